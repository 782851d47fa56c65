// Serial reference loops against the OpenMP kernels.
#include <benchmark/benchmark.h>

#include <random>

#include "speechpanel/learn.hpp"
#include "speechpanel/pipeline.hpp"
#include "speechpanel/synth.hpp"

using namespace speechpanel;

namespace {

struct Corpus {
  SynthCorpus synth = generate(default_two_group_profile(), 30, 1);
  FrequencyTable freq{{synth.frequencies.begin(), synth.frequencies.end()}};
  std::map<std::string, TreeSet> trees;

  Corpus() {
    for (const auto& [id, lines] : synth.trees) {
      std::string text;
      for (const auto& l : lines) text += l + "\n";
      trees[id] = parse_tree_sidecar(text, id);
    }
  }
  EncodingContext context() const {
    EncodingContext ctx;
    ctx.store = &synth.embeddings;
    ctx.freq = &freq;
    ctx.ext = &synth.ext;
    return ctx;
  }
};

const Corpus& corpus() {
  static const Corpus c;
  return c;
}

struct Table {
  Matrix X;
  Vector y;
  Labels labels;
  std::vector<std::string> names;
};

const Table& table() {
  static const Table t = [] {
    Table t;
    std::mt19937_64 gen(3);
    std::normal_distribution<double> z(0, 1);
    t.X.resize(109, 73);
    for (Eigen::Index i = 0; i < 109; ++i) {
      for (Eigen::Index j = 0; j < 73; ++j) t.X(i, j) = z(gen);
    }
    t.y = t.X.col(4) + 0.7 * t.X.col(20) + 0.5 * t.X.col(61) + 0.1 * Vector::NullaryExpr(109, [&] { return z(gen); });
    for (Eigen::Index i = 0; i < 109; ++i) t.labels.push_back(t.y(i) > 0);
    for (int j = 0; j < 73; ++j) t.names.push_back("f" + std::to_string(j));
    return t;
  }();
  return t;
}

Execution mode(const benchmark::State& state) { return state.range(0) ? Execution::Parallel : Execution::Serial; }

void BM_ExtractCorpus(benchmark::State& state) {
  const auto& c = corpus();
  for (auto _ : state) {
    benchmark::DoNotOptimize(extract_corpus(c.synth.transcripts, c.context(), &c.trees, PipelineConfig{}, mode(state)));
  }
}

void BM_StepwiseSelect(benchmark::State& state) {
  const auto& t = table();
  for (auto _ : state) benchmark::DoNotOptimize(stepwise_select(t.X, t.y, t.names, 25, 1e-4, mode(state)));
}

void BM_LoocvRegress(benchmark::State& state) {
  const auto& t = table();
  const Matrix X = t.X.leftCols(25);
  for (auto _ : state) benchmark::DoNotOptimize(loocv_regress(X, t.y, 0.0, mode(state)));
}

void BM_LoocvLogistic(benchmark::State& state) {
  const auto& t = table();
  const Matrix X = t.X.leftCols(25);
  for (auto _ : state) {
    benchmark::DoNotOptimize(loocv_classify(X, t.labels, ModelKind::Logistic, kDefaultLogisticRidge, mode(state)));
  }
}

}  // namespace

// Argument 0 runs the serial reference, 1 the parallel kernel.
BENCHMARK(BM_ExtractCorpus)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_StepwiseSelect)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LoocvRegress)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_LoocvLogistic)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
