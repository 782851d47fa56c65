// speechpanel: feature extraction and modeling over interview transcripts.
#include <CLI11.hpp>

#include <iostream>

#include "speechpanel/commands.hpp"
#include "speechpanel/parallel.hpp"

using namespace speechpanel;

int main(int argc, char** argv) {
  CLI::App app{"Coherence and complexity features from interview transcripts"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: SPEECHPANEL_THREADS or all cores)")
      ->check(CLI::NonNegativeNumber);

  ExtractOptions ex;
  auto* extract = app.add_subcommand("extract", "Build the per-subject feature table");
  extract->add_option("--corpus", ex.corpus, "Directory of transcript JSON files")->required();
  extract->add_option("--embeddings", ex.embeddings, "Word vectors in text format")->required();
  extract->add_option("--freq", ex.freq, "Word frequency table for SIF weights");
  extract->add_option("--trees", ex.trees, "Directory of <subject>.trees sidecars");
  extract->add_option("--encoders", ex.encoders, "Comma-separated encoders: bow, sif, ext")->delimiter(',');
  extract->add_option("--ext-vectors", ex.ext_vectors, "Precomputed per-turn vectors (JSON)");
  extract->add_option("--ext-label", ex.ext_label, "Feature-name prefix for the external encoder");
  extract->add_option("--mattr-window", ex.mattr_window, "MATTR window length");
  extract->add_option("--function-tags", ex.function_tags, "Comma-separated function POS tags")->delimiter(',');
  extract->add_option("--height-agg", ex.height_agg, "Tree height aggregate: mean or max");
  extract->add_flag("--include-ttr", ex.include_ttr, "Add the plain type-token ratio column");
  extract->add_option("--sif-a", ex.sif_a, "SIF smoothing parameter");
  extract->add_option("--dump-coherence", ex.dump_coherence, "Directory for per-subject coherence dumps");
  extract->add_flag("--keep-partial", ex.keep_partial, "Write the table even when some subjects fail");
  extract->add_option("--out", ex.out, "Output feature table (CSV)")->required();

  SelectOptions se;
  auto* select = app.add_subcommand("select", "Greedy stepwise feature selection");
  select->add_option("--features", se.features, "Feature table")->required();
  select->add_option("--target", se.target, "Target column");
  select->add_option("--max-features", se.max_features, "Selection budget");
  select->add_option("--min-improvement", se.min_improvement, "Minimum LOOCV RMSE gain per step");
  select->add_option("--out", se.out, "Output selection (JSON)")->required();

  RegressOptions re;
  auto* regress = app.add_subcommand("regress", "LOOCV linear regression on selected features");
  regress->add_option("--features", re.features, "Feature table")->required();
  regress->add_option("--selection", re.selection, "Selection file")->required();
  regress->add_flag("--nested", re.nested, "Re-run selection inside every fold");
  regress->add_option("--out", re.out, "Output report (JSON)")->required();

  ClassifyOptions cl;
  auto* classify = app.add_subcommand("classify", "LOOCV binary classification with ROC/AUC");
  classify->add_option("--features", cl.features, "Feature table")->required();
  classify->add_option("--selection", cl.selection, "Selection file")->required();
  classify->add_option("--label", cl.label, "Label column");
  classify->add_option("--task", cl.task, "clinical-vs-control or sz-vs-bipolar");
  classify->add_option("--model", cl.model, "lr or nb");
  classify->add_option("--top", cl.top, "Use selection ranks 1..N");
  classify->add_flag("--nested", cl.nested, "Re-run selection inside every fold");
  classify->add_option("--out", cl.out, "Output report (JSON)")->required();

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus");
  synth->add_option("--profile", sy.profile, "Profile JSON (default: built-in two-group profile)");
  synth->add_option("--n", sy.n, "Subjects per group");
  synth->add_option("--seed", sy.seed, "Random seed");
  synth->add_option("--out", sy.out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }
  if (threads > 0) set_thread_count(threads);

  if (*extract) return run_extract(ex, std::cerr);
  if (*select) return run_select(se, std::cerr);
  if (*regress) return run_regress(re, std::cerr);
  if (*classify) return run_classify(cl, std::cerr);
  return run_synth(sy, std::cerr);
}
