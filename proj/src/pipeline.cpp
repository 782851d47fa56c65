#include "speechpanel/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "speechpanel/errors.hpp"

namespace speechpanel {

std::vector<std::string> feature_names(const PipelineConfig& config, bool with_trees) {
  std::vector<std::string> names;
  for (const auto& enc : config.encoders) {
    for (int scene = 1; scene <= kSceneCount; ++scene) {
      for (auto stat : kCoherenceStatNames) {
        names.push_back(enc.label + "_" + std::string(stat) + "_scene" + std::to_string(scene));
      }
    }
  }
  names.push_back("mattr");
  if (config.include_ttr) names.push_back("ttr");
  for (const char* n : {"brunet", "honore", "func_w", "uh_w", "mls"}) names.push_back(n);
  if (with_trees) {
    for (const char* n : {"yngve_mean", "yngve_total", "yngve_max", "tree_height"}) names.push_back(n);
  }
  return names;
}

std::optional<double> FeaturePanel::get(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == name) return values[i];
  }
  return std::nullopt;
}

namespace {

// Runs `fn`, re-raising any library error tagged with subject and feature.
template <typename Fn>
auto tagged(const std::string& subject, const std::string& feature, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error("subject " + subject + ", feature " + feature + ": " + e.what());
  }
}

}  // namespace

FeaturePanel extract_panel(const Transcript& transcript, const EncodingContext& ctx_in, const TreeSet* trees,
                           const PipelineConfig& config, std::vector<std::string>* warnings,
                           std::vector<CoherenceDistribution>* distributions) {
  const std::string& sid = transcript.subject_id;
  FeaturePanel panel;
  panel.subject_id = sid;
  panel.group = transcript.group;
  panel.sspa_overall = transcript.sspa_overall;
  panel.names = feature_names(config, trees != nullptr);
  panel.values.reserve(panel.names.size());

  const EncodingContext* ctx = &ctx_in;
  EncodingContext local;
  const bool wants_sif = std::any_of(config.encoders.begin(), config.encoders.end(),
                                     [](const EncoderSpec& e) { return e.kind == EncoderKind::Sif; });
  if (wants_sif && ctx_in.sif_component.empty()) {
    local = ctx_in;
    local.sif_component = tagged(sid, "sif common component",
                                 [&] { return corpus_sif_component({transcript}, ctx_in, Execution::Serial); });
    ctx = &local;
  }

  for (const auto& enc : config.encoders) {
    for (int scene_id = 1; scene_id <= kSceneCount; ++scene_id) {
      const std::string feature = enc.label + "_*_scene" + std::to_string(scene_id);
      const Scene* scene = transcript.scene(scene_id);
      if (!scene) throw Error("subject " + sid + ", feature " + feature + ": scene " + std::to_string(scene_id) + " missing");
      auto dist = tagged(sid, feature, [&] { return score_scene(sid, *scene, enc, *ctx, warnings); });
      const auto stats = as_array(summarize(dist.scores));
      panel.values.insert(panel.values.end(), stats.begin(), stats.end());
      if (distributions) distributions->push_back(std::move(dist));
    }
  }

  const auto tokens = subject_tokens(transcript);
  const auto counts = lexical_counts(tokens);
  bool fell_back = false;
  panel.values.push_back(tagged(sid, "mattr", [&] { return mattr(tokens, config.mattr_window, &fell_back); }));
  if (fell_back && warnings) {
    warnings->push_back("mattr: " + std::to_string(tokens.size()) + " tokens < window " +
                        std::to_string(config.mattr_window) + ", used plain TTR");
  }
  if (config.include_ttr) panel.values.push_back(tagged(sid, "ttr", [&] { return ttr(counts); }));
  panel.values.push_back(tagged(sid, "brunet", [&] { return brunet(counts); }));
  panel.values.push_back(tagged(sid, "honore", [&] { return honore(counts); }));

  const auto sentences = subject_sentences(transcript);
  std::vector<TaggedToken> tagged_tokens;
  if (trees) {
    for (std::size_t i = 0; i < sentences.size(); ++i) {
      if (i < trees->size() && (*trees)[i]) {
        for (auto& tt : preterminals(strip_root(*(*trees)[i]))) {
          if (!is_punctuation_tag(tt.second)) tagged_tokens.push_back(std::move(tt));
        }
      } else {
        for (auto& tt : tag_with_lexicon(tokenize(sentences[i]))) tagged_tokens.push_back(std::move(tt));
      }
    }
  } else {
    tagged_tokens = tag_with_lexicon(tokens);
  }
  const auto density = tagged(sid, "func_w", [&] { return density_ratios(tagged_tokens, config.tagset); });
  panel.values.push_back(density.func_w);
  panel.values.push_back(density.uh_w);
  panel.values.push_back(tagged(sid, "mls", [&] { return mls(sentences); }));

  if (trees) {
    const auto syn = tagged(sid, "yngve_mean",
                            [&] { return syntax_features(*trees, sentences.size(), config.height_agg, warnings); });
    panel.values.push_back(syn.yngve.mean);
    panel.values.push_back(syn.yngve.total);
    panel.values.push_back(syn.yngve.max);
    panel.values.push_back(syn.tree_height);
  }

  for (std::size_t i = 0; i < panel.values.size(); ++i) {
    if (!std::isfinite(panel.values[i])) {
      throw Error("subject " + sid + ", feature " + panel.names[i] + ": non-finite value");
    }
  }
  return panel;
}

std::vector<SubjectOutcome> extract_corpus(const std::vector<Transcript>& corpus, EncodingContext ctx,
                                           const std::map<std::string, TreeSet>* trees, const PipelineConfig& config,
                                           Execution exec) {
  const bool wants_sif = std::any_of(config.encoders.begin(), config.encoders.end(),
                                     [](const EncoderSpec& e) { return e.kind == EncoderKind::Sif; });
  if (wants_sif) ctx.sif_component = corpus_sif_component(corpus, ctx, exec);

  std::vector<SubjectOutcome> out(corpus.size());
  static const TreeSet kNoTrees;
  auto work = [&](long i) {
    const Transcript& t = corpus[static_cast<std::size_t>(i)];
    SubjectOutcome& o = out[static_cast<std::size_t>(i)];
    o.subject_id = t.subject_id;
    const TreeSet* subject_trees = nullptr;
    if (trees) {
      auto it = trees->find(t.subject_id);
      subject_trees = it == trees->end() ? &kNoTrees : &it->second;
    }
    try {
      o.panel = extract_panel(t, ctx, subject_trees, config, &o.warnings, &o.distributions);
    } catch (const std::exception& e) {
      o.error = e.what();
    }
  };
  const long n = static_cast<long>(corpus.size());
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(active_thread_count())
    for (long i = 0; i < n; ++i) work(i);
  } else {
    for (long i = 0; i < n; ++i) work(i);
  }
  return out;
}

}  // namespace speechpanel
