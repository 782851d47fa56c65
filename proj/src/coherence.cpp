#include "speechpanel/coherence.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "speechpanel/errors.hpp"

namespace speechpanel {

std::string_view default_label(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::Bow: return "bow";
    case EncoderKind::Sif: return "sif";
    case EncoderKind::Ext: return "ext";
  }
  return "bow";
}

std::optional<EncoderKind> parse_encoder(std::string_view name) {
  if (name == "bow") return EncoderKind::Bow;
  if (name == "sif") return EncoderKind::Sif;
  if (name == "ext") return EncoderKind::Ext;
  return std::nullopt;
}

std::vector<MergedTurn> merge_turns(const Scene& scene) {
  std::vector<MergedTurn> out;
  for (std::size_t i = 0; i < scene.turns.size(); ++i) {
    const Turn& t = scene.turns[i];
    if (out.empty() || out.back().speaker != t.speaker) {
      out.push_back({t.speaker, {}, {}});
    }
    auto& m = out.back();
    m.tokens.insert(m.tokens.end(), t.tokens.begin(), t.tokens.end());
    m.members.push_back(i);
  }
  return out;
}

std::vector<TurnPair> pair_turns(const Scene& scene) {
  auto merged = merge_turns(scene);
  std::vector<TurnPair> out;
  for (std::size_t i = 0; i + 1 < merged.size(); ++i) {
    if (merged[i].speaker == Speaker::Assessor && merged[i + 1].speaker == Speaker::Subject) {
      out.push_back({std::move(merged[i]), std::move(merged[i + 1])});
      ++i;
    }
  }
  return out;
}

TurnVector encode_turn(EncoderKind kind, const EncodingContext& ctx, const std::string& subject_id, int scene_id,
                       const MergedTurn& turn) {
  switch (kind) {
    case EncoderKind::Bow:
      if (!ctx.store) throw ParameterError("bow encoder needs word embeddings");
      return encode_bow(turn.tokens, *ctx.store);
    case EncoderKind::Sif: {
      if (!ctx.store || !ctx.freq) throw ParameterError("sif encoder needs word embeddings and frequencies");
      TurnVector v = encode_sif(turn.tokens, *ctx.store, *ctx.freq, ctx.sif_a);
      if (v.valid && !ctx.sif_component.empty()) {
        std::vector<TurnVector> one{std::move(v)};
        project_out(one, ctx.sif_component);
        return std::move(one.front());
      }
      return v;
    }
    case EncoderKind::Ext: {
      if (!ctx.ext) throw ParameterError("ext encoder needs an external vector file");
      TurnVector out = invalid_turn_vector(ctx.ext->dimension);
      std::size_t k = 0;
      for (std::size_t idx : turn.members) {
        const TurnKey key{subject_id, scene_id, idx};
        const TurnVector* v = ctx.ext->find(key);
        if (!v) throw FormatError("external vectors: missing key " + to_string(key));
        if (!v->valid) continue;
        for (std::size_t i = 0; i < out.vector.size(); ++i) out.vector[i] += v->vector[i];
        ++k;
      }
      if (k > 0) {
        for (double& x : out.vector) x /= static_cast<double>(k);
        out.valid = true;
      }
      return out;
    }
  }
  throw ParameterError("unknown encoder");
}

std::vector<double> corpus_sif_component(const std::vector<Transcript>& corpus, const EncodingContext& ctx,
                                         Execution exec) {
  EncodingContext raw = ctx;
  raw.sif_component.clear();
  // Each subject's vectors land in their own slot, concatenated in corpus
  // order afterwards, so the result is independent of scheduling.
  std::vector<std::vector<TurnVector>> per_subject(corpus.size());
  const long n = static_cast<long>(corpus.size());
  auto work = [&](long i) {
    const Transcript& t = corpus[static_cast<std::size_t>(i)];
    for (const auto& scene : t.scenes) {
      for (const auto& m : merge_turns(scene)) {
        per_subject[static_cast<std::size_t>(i)].push_back(
            encode_turn(EncoderKind::Sif, raw, t.subject_id, scene.scene_id, m));
      }
    }
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(active_thread_count())
    for (long i = 0; i < n; ++i) work(i);
  } else {
    for (long i = 0; i < n; ++i) work(i);
  }
  std::vector<TurnVector> all;
  for (auto& v : per_subject) {
    for (auto& tv : v) all.push_back(std::move(tv));
  }
  return first_principal_component(all);
}

CoherenceDistribution score_scene(const std::string& subject_id, const Scene& scene, const EncoderSpec& encoder,
                                  const EncodingContext& ctx, std::vector<std::string>* warnings) {
  CoherenceDistribution dist;
  dist.subject_id = subject_id;
  dist.scene_id = scene.scene_id;
  dist.encoder = encoder.label;
  for (const auto& pair : pair_turns(scene)) {
    const TurnVector a = encode_turn(encoder.kind, ctx, subject_id, scene.scene_id, pair.assessor);
    const TurnVector s = encode_turn(encoder.kind, ctx, subject_id, scene.scene_id, pair.subject);
    if (!a.valid || !s.valid) {
      ++dist.skipped_pairs;
      continue;
    }
    dist.scores.push_back(cosine(a.vector, s.vector));
  }
  if (dist.skipped_pairs > 0 && warnings) {
    warnings->push_back("scene " + std::to_string(scene.scene_id) + " encoder " + encoder.label + ": skipped " +
                        std::to_string(dist.skipped_pairs) + " pair(s) with no in-vocabulary tokens");
  }
  if (dist.scores.empty()) {
    throw Error("subject " + subject_id + " scene " + std::to_string(scene.scene_id) + " encoder " +
                encoder.label + ": no scorable assessor/subject turn pairs");
  }
  return dist;
}

std::array<double, 7> as_array(const CoherenceStats& s) {
  return {s.min, s.max, s.mean, s.median, s.stdev, s.p90, s.p10};
}

double percentile_sorted(const std::vector<double>& sorted, double p) {
  if (sorted.empty()) throw DegenerateInputError("percentile of an empty list");
  const double rank = p / 100.0 * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = rank - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

CoherenceStats summarize(const std::vector<double>& scores) {
  if (scores.empty()) throw DegenerateInputError("cannot summarize an empty score distribution");
  std::vector<double> sorted = scores;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  CoherenceStats s;
  s.min = sorted.front();
  s.max = sorted.back();
  double sum = 0.0;
  for (double x : sorted) sum += x;
  s.mean = sum / n;
  double ss = 0.0;
  for (double x : sorted) ss += (x - s.mean) * (x - s.mean);
  s.stdev = sorted.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  s.median = percentile_sorted(sorted, 50.0);
  s.p90 = percentile_sorted(sorted, 90.0);
  s.p10 = percentile_sorted(sorted, 10.0);
  return s;
}

std::vector<TurnKey> missing_external_keys(const ExternalVectors& ext, const std::vector<Transcript>& corpus) {
  std::vector<TurnKey> missing;
  for (const auto& t : corpus) {
    for (const auto& scene : t.scenes) {
      for (const auto& pair : pair_turns(scene)) {
        for (const auto* m : {&pair.assessor, &pair.subject}) {
          for (std::size_t idx : m->members) {
            TurnKey key{t.subject_id, scene.scene_id, idx};
            if (!ext.find(key)) missing.push_back(std::move(key));
          }
        }
      }
    }
  }
  return missing;
}

void require_external_coverage(const ExternalVectors& ext, const std::vector<Transcript>& corpus) {
  const auto missing = missing_external_keys(ext, corpus);
  if (missing.empty()) return;
  std::string msg = "external vectors missing " + std::to_string(missing.size()) + " turn(s):";
  for (const auto& k : missing) msg += " " + to_string(k);
  throw FormatError(msg);
}

std::string serialize_distributions(const std::string& subject_id,
                                    const std::vector<CoherenceDistribution>& dists) {
  nlohmann::json doc;
  doc["subject_id"] = subject_id;
  doc["distributions"] = nlohmann::json::array();
  for (const auto& d : dists) {
    doc["distributions"].push_back(
        {{"scene_id", d.scene_id}, {"encoder", d.encoder}, {"skipped_pairs", d.skipped_pairs}, {"scores", d.scores}});
  }
  return doc.dump(2) + "\n";
}

}  // namespace speechpanel
