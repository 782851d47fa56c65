#include "speechpanel/commands.hpp"

#include <cmath>
#include <ostream>

#include "speechpanel/errors.hpp"
#include "speechpanel/io.hpp"
#include "speechpanel/reports.hpp"
#include "speechpanel/synth.hpp"

namespace speechpanel {

namespace fs = std::filesystem;

namespace {

class UsageError : public Error {
 public:
  using Error::Error;
};

// Runs a command body, mapping exceptions onto exit codes.
template <typename Body>
int guarded(std::ostream& log, Body&& body) {
  try {
    return body();
  } catch (const UsageError& e) {
    log << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    log << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_json(const fs::path& path, const nlohmann::json& doc) { write_file_atomic(path, doc.dump(2) + "\n"); }

}  // namespace

std::optional<int> task_label(const std::string& task, Group group) {
  if (task == "clinical-vs-control") return group == Group::Control ? 0 : 1;
  if (task == "sz-vs-bipolar") {
    if (group == Group::SzSza) return 1;
    if (group == Group::Bipolar) return 0;
    return std::nullopt;
  }
  throw UsageError("unknown task '" + task + "' (expected clinical-vs-control or sz-vs-bipolar)");
}

int run_extract(const ExtractOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    PipelineConfig config;
    config.encoders.clear();
    bool need_words = false, need_freq = false, need_ext = false;
    for (const auto& name : opt.encoders) {
      auto kind = parse_encoder(name);
      if (!kind) throw UsageError("unknown encoder '" + name + "' (expected bow, sif or ext)");
      for (const auto& e : config.encoders) {
        if (e.kind == *kind) throw UsageError("encoder '" + name + "' listed twice");
      }
      const std::string label = *kind == EncoderKind::Ext ? opt.ext_label : std::string(default_label(*kind));
      config.encoders.push_back({*kind, label});
      need_words |= *kind != EncoderKind::Ext;
      need_freq |= *kind == EncoderKind::Sif;
      need_ext |= *kind == EncoderKind::Ext;
    }
    if (config.encoders.empty()) throw UsageError("--encoders must name at least one encoder");
    if (need_ext && !opt.ext_vectors) throw UsageError("encoder 'ext' needs --ext-vectors");
    if (opt.mattr_window == 0) throw UsageError("--mattr-window must be at least 1");
    if (!(opt.sif_a > 0)) throw UsageError("--sif-a must be positive");
    config.mattr_window = opt.mattr_window;
    config.include_ttr = opt.include_ttr;
    if (opt.height_agg == "mean") {
      config.height_agg = HeightAggregate::Mean;
    } else if (opt.height_agg == "max") {
      config.height_agg = HeightAggregate::Max;
    } else {
      throw UsageError("--height-agg must be mean or max");
    }
    if (!opt.function_tags.empty()) {
      config.tagset.tags = {opt.function_tags.begin(), opt.function_tags.end()};
      config.tagset.tags.insert(kInterjectionTag);
    }

    const auto corpus = load_corpus(opt.corpus);
    log << "loaded " << corpus.size() << " transcript(s) from " << opt.corpus.string() << "\n";

    EmbeddingStore store;
    FrequencyTable freq;
    ExternalVectors ext;
    EncodingContext ctx;
    ctx.sif_a = opt.sif_a;
    if (need_words) {
      store = load_embeddings(opt.embeddings);
      if (store.duplicate_count() > 0) {
        log << "warning: " << store.duplicate_count() << " duplicate word(s) in " << opt.embeddings.string()
            << "; last occurrence kept\n";
      }
      ctx.store = &store;
    }
    if (need_freq) {
      if (opt.freq) {
        freq = load_frequencies(*opt.freq);
      } else {
        log << "warning: no --freq file; deriving word frequencies from the corpus\n";
        freq = frequencies_from_corpus(corpus);
      }
      ctx.freq = &freq;
    }
    if (need_ext) {
      ext = load_external_vectors(*opt.ext_vectors);
      require_external_coverage(ext, corpus);
      ctx.ext = &ext;
    }

    std::map<std::string, TreeSet> trees;
    if (opt.trees) {
      if (!fs::is_directory(*opt.trees)) throw Error(opt.trees->string() + ": not a directory");
      for (const auto& t : corpus) {
        const fs::path p = *opt.trees / (t.subject_id + ".trees");
        trees[t.subject_id] = fs::exists(p) ? load_tree_sidecar(p) : TreeSet{};
      }
    } else {
      log << "warning: no --trees directory; syntax features omitted\n";
    }

    const auto outcomes = extract_corpus(corpus, ctx, opt.trees ? &trees : nullptr, config);

    std::vector<FeaturePanel> panels;
    std::size_t failed = 0;
    for (const auto& o : outcomes) {
      for (const auto& w : o.warnings) log << "warning: subject " << o.subject_id << ": " << w << "\n";
      if (o.panel) {
        panels.push_back(*o.panel);
      } else {
        ++failed;
        log << "error: " << o.error << "\n";
      }
      if (opt.dump_coherence && !o.distributions.empty()) {
        write_file_atomic(*opt.dump_coherence / (o.subject_id + ".coherence.json"),
                          serialize_distributions(o.subject_id, o.distributions));
      }
    }
    const std::size_t n_features = feature_names(config, opt.trees.has_value()).size();
    log << "features per subject: " << n_features << "\n";
    if (failed > 0) {
      log << failed << " subject(s) failed\n";
      if (opt.keep_partial) {
        write_table(panels, opt.out);
        log << "wrote partial table with " << panels.size() << " subject(s) to " << opt.out.string() << "\n";
      }
      return kExitFailure;
    }
    write_table(panels, opt.out);
    log << "wrote " << panels.size() << " subject(s) to " << opt.out.string() << "\n";
    return kExitOk;
  });
}

int run_select(const SelectOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    if (opt.max_features == 0) throw UsageError("--max-features must be at least 1");
    if (!std::isfinite(opt.min_improvement)) throw UsageError("--min-improvement must be finite");
    const auto panels = read_table(opt.features);
    std::vector<std::string> excluded;
    Dataset data;
    if (opt.target == "sspa_overall") {
      data = regression_dataset(panels, &excluded);
    } else {
      throw Error("target column '" + opt.target + "' not found (supported: sspa_overall)");
    }
    for (const auto& id : excluded) log << "warning: subject " << id << " has no " << opt.target << "; excluded\n";
    if (data.X.rows() < 3) {
      throw Error("need at least 3 subjects with " + opt.target + ", have " + std::to_string(data.X.rows()));
    }
    SelectionFile sel;
    sel.target = opt.target;
    sel.max_features = opt.max_features;
    sel.min_improvement = opt.min_improvement;
    sel.excluded_subjects = excluded;
    sel.result = stepwise_select(data.X, data.y, data.feature_names, opt.max_features, opt.min_improvement);

    Provenance prov;
    prov.command = "select";
    prov.flags = {{"target", opt.target},
                  {"max-features", std::to_string(opt.max_features)},
                  {"min-improvement", fmt(opt.min_improvement)}};
    prov.add_input(opt.features);
    write_json(opt.out, selection_to_json(sel, prov));
    log << "selected " << sel.result.steps.size() << " feature(s); baseline LOOCV RMSE " << sel.result.baseline_rmse;
    if (!sel.result.steps.empty()) log << ", final " << sel.result.steps.back().loocv_rmse;
    log << "\n";
    return kExitOk;
  });
}

int run_regress(const RegressOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    const auto panels = read_table(opt.features);
    const auto sel = read_selection(opt.selection);
    std::vector<std::string> excluded;
    const Dataset all = regression_dataset(panels, &excluded);
    for (const auto& id : excluded) log << "warning: subject " << id << " has no sspa_overall; excluded\n";
    if (all.X.rows() < 3) throw Error("need at least 3 subjects with sspa_overall");

    RegressionReport rep;
    rep.nested = opt.nested;
    rep.subject_ids = all.subject_ids;
    rep.actual = all.y;
    if (opt.nested) {
      rep.features = all.feature_names;
      rep.predicted = loocv_nested_regress(all.X, all.y, sel.max_features, sel.min_improvement);
    } else {
      const Dataset data = select_columns(all, sel.result.top(sel.result.steps.size()));
      rep.features = data.feature_names;
      rep.predicted = loocv_regress(data.X, data.y);
    }
    rep.metrics = metrics_regress(rep.actual, rep.predicted);

    Provenance prov;
    prov.command = "regress";
    prov.flags = {{"nested", opt.nested ? "true" : "false"}};
    prov.add_input(opt.features);
    prov.add_input(opt.selection);
    write_json(opt.out, regression_to_json(rep, prov));
    log << "LOOCV r = " << rep.metrics.r << ", MAE = " << rep.metrics.mae << ", RMSE = " << rep.metrics.rmse << "\n";
    return kExitOk;
  });
}

int run_classify(const ClassifyOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    if (opt.label != "group") throw UsageError("--label must be 'group'");
    ModelKind kind;
    if (opt.model == "lr") {
      kind = ModelKind::Logistic;
    } else if (opt.model == "nb") {
      kind = ModelKind::NaiveBayes;
    } else {
      throw UsageError("--model must be lr or nb");
    }
    if (opt.top == 0) throw UsageError("--top must be at least 1");
    task_label(opt.task, Group::Control);  // validates the task name

    const auto panels = read_table(opt.features);
    const auto sel = read_selection(opt.selection);

    std::vector<const FeaturePanel*> rows;
    Labels labels;
    for (const auto& p : panels) {
      if (!p.group) {
        log << "warning: subject " << p.subject_id << " has no group; excluded\n";
        continue;
      }
      if (auto l = task_label(opt.task, *p.group)) {
        rows.push_back(&p);
        labels.push_back(*l);
      }
    }
    if (rows.empty()) throw Error("task " + opt.task + " has no eligible subjects");
    const auto positives = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (positives == 0 || positives == labels.size()) {
      throw Error("task " + opt.task + " has an empty class (" + std::to_string(positives) + " positive of " +
                  std::to_string(labels.size()) + ")");
    }

    Dataset all;
    all.feature_names = panels.front().names;
    all.X.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(all.feature_names.size()));
    all.y = Vector::Zero(static_cast<Eigen::Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (std::size_t j = 0; j < all.feature_names.size(); ++j) {
        all.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i]->values[j];
      }
      all.subject_ids.push_back(rows[i]->subject_id);
      if (rows[i]->sspa_overall) all.y(static_cast<Eigen::Index>(i)) = *rows[i]->sspa_overall;
    }

    ClassificationReport rep;
    rep.task = opt.task;
    rep.model = opt.model;
    rep.positive_class = opt.task == "clinical-vs-control" ? "clinical" : "sz_sza";
    rep.top = opt.top;
    rep.nested = opt.nested;
    rep.subject_ids = all.subject_ids;
    rep.labels = labels;
    if (opt.nested) {
      for (const auto* r : rows) {
        if (!r->sspa_overall) throw Error("nested selection needs sspa_overall for subject " + r->subject_id);
      }
      rep.features = all.feature_names;
      rep.result = loocv_nested_classify(all.X, all.y, labels, kind, std::min(opt.top, sel.max_features),
                                         sel.min_improvement);
    } else {
      rep.features = sel.result.top(opt.top);
      if (rep.features.size() < opt.top) {
        log << "warning: selection has " << rep.features.size() << " feature(s); --top " << opt.top
            << " uses all of them\n";
      }
      if (rep.features.empty()) throw Error("selection is empty; nothing to classify with");
      const Dataset data = select_columns(all, rep.features);
      rep.result = loocv_classify(data.X, labels, kind);
    }
    for (const auto& w : rep.result.warnings) log << "warning: " << w << "\n";
    rep.confusion = confusion(labels, rep.result.predicted);
    rep.roc = roc_auc(labels, rep.result.scores);

    Provenance prov;
    prov.command = "classify";
    prov.flags = {{"label", opt.label},
                  {"task", opt.task},
                  {"model", opt.model},
                  {"top", std::to_string(opt.top)},
                  {"nested", opt.nested ? "true" : "false"}};
    prov.add_input(opt.features);
    prov.add_input(opt.selection);
    write_json(opt.out, classification_to_json(rep, prov));
    const auto& c = rep.confusion.counts;
    log << opt.task << " " << opt.model << " (" << rep.features.size() << " features): AUC = " << rep.roc.auc
        << ", TP " << c[1][1] << " FN " << c[1][0] << " FP " << c[0][1] << " TN " << c[0][0] << "\n";
    return kExitOk;
  });
}

int run_synth(const SynthOptions& opt, std::ostream& log) {
  return guarded(log, [&] {
    if (opt.n < 2) throw UsageError("--n must be at least 2");
    const SynthProfile profile = opt.profile ? load_profile(*opt.profile) : default_two_group_profile();
    const SynthCorpus corpus = generate(profile, opt.n, opt.seed);
    write_corpus(corpus, profile, opt.out);
    log << "wrote " << corpus.transcripts.size() << " synthetic subject(s) to " << opt.out.string() << "\n";
    return kExitOk;
  });
}

}  // namespace speechpanel
