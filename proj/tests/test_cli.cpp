#include <doctest.h>

#include <cstdlib>
#include <sstream>
#include <sys/wait.h>

#include "json.hpp"
#include "speechpanel/commands.hpp"
#include "speechpanel/io.hpp"
#include "speechpanel/reports.hpp"
#include "speechpanel/synth.hpp"
#include "support.hpp"

using namespace speechpanel;
namespace fs = std::filesystem;

namespace {

struct Workspace {
  testing::TempDir dir{"cli"};
  std::ostringstream log;

  Workspace(std::size_t n = 12, std::uint64_t seed = 3) {
    SynthOptions s;
    s.n = n;
    s.seed = seed;
    s.out = dir / "corpus";
    REQUIRE(run_synth(s, log) == kExitOk);
  }

  ExtractOptions extract_options() const {
    ExtractOptions e;
    e.corpus = dir / "corpus/transcripts";
    e.embeddings = dir / "corpus/embeddings.txt";
    e.freq = dir / "corpus/frequencies.txt";
    e.trees = dir / "corpus/trees";
    e.ext_vectors = dir / "corpus/ext_vectors.json";
    e.out = dir / "features.csv";
    return e;
  }
};

int run_cli(const std::string& args) {
  const int status = std::system((std::string(SPEECHPANEL_CLI) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("extract writes a 73-feature table without warnings") {
  Workspace ws;
  REQUIRE(run_extract(ws.extract_options(), ws.log) == kExitOk);
  CHECK(ws.log.str().find("warning") == std::string::npos);
  const auto panels = read_table(ws.dir / "features.csv");
  REQUIRE(panels.size() == 24);
  CHECK(panels.front().values.size() == 73);

  auto bow = ws.extract_options();
  bow.encoders = {"bow"};
  bow.out = ws.dir / "bow.csv";
  REQUIRE(run_extract(bow, ws.log) == kExitOk);
  CHECK(read_table(bow.out).front().values.size() == 31);

  auto bad = ws.extract_options();
  bad.encoders = {"glove"};
  CHECK(run_extract(bad, ws.log) == kExitUsage);
  bad = ws.extract_options();
  bad.ext_vectors.reset();
  CHECK(run_extract(bad, ws.log) == kExitUsage);
}

TEST_CASE("extract reports failed subjects") {
  Workspace ws(3);
  const auto victim = ws.dir / "corpus/trees/S0002.trees";
  write_file_atomic(victim, "\n\n\n\n\n\n\n\n\n\n\n\n\n\n\n\n\n\n\n\n");
  auto opt = ws.extract_options();
  CHECK(run_extract(opt, ws.log) == kExitFailure);
  CHECK(ws.log.str().find("1 subject(s) failed") != std::string::npos);
  CHECK(ws.log.str().find("S0002") != std::string::npos);
  CHECK_FALSE(fs::exists(opt.out));
  opt.keep_partial = true;
  CHECK(run_extract(opt, ws.log) == kExitFailure);
  CHECK(read_table(opt.out).size() == 5);
}

TEST_CASE("select, regress and classify round trip") {
  Workspace ws(15);
  REQUIRE(run_extract(ws.extract_options(), ws.log) == kExitOk);
  SelectOptions sel;
  sel.features = ws.dir / "features.csv";
  sel.max_features = 25;
  sel.min_improvement = -1e9;
  sel.out = ws.dir / "sel.json";
  REQUIRE(run_select(sel, ws.log) == kExitOk);
  const auto selection = read_selection(sel.out);
  CHECK(selection.result.steps.size() == 25);

  SelectOptions single = sel;
  single.max_features = 1;
  single.out = ws.dir / "sel1.json";
  REQUIRE(run_select(single, ws.log) == kExitOk);
  CHECK(read_selection(single.out).result.steps.size() == 1);
  CHECK(read_selection(single.out).result.steps[0].feature == selection.result.steps[0].feature);

  SelectOptions bad_target = sel;
  bad_target.target = "age";
  CHECK(run_select(bad_target, ws.log) == kExitFailure);

  RegressOptions reg;
  reg.features = sel.features;
  reg.selection = single.out;
  reg.out = ws.dir / "reg.json";
  REQUIRE(run_regress(reg, ws.log) == kExitOk);
  const auto report = regression_from_json(read_report(reg.out), "reg");
  const auto check = metrics_regress(report.actual, report.predicted);
  CHECK(check.r == report.metrics.r);
  CHECK(check.rmse == report.metrics.rmse);
  const auto first = read_text_file(reg.out);
  REQUIRE(run_regress(reg, ws.log) == kExitOk);
  CHECK(read_text_file(reg.out) == first);

  ClassifyOptions cls;
  cls.features = sel.features;
  cls.selection = sel.out;
  cls.top = 15;
  for (const std::string model : {"lr", "nb"}) {
    cls.model = model;
    cls.out = ws.dir / ("cls_" + model + ".json");
    REQUIRE(run_classify(cls, ws.log) == kExitOk);
  }
  const auto lr = classification_from_json(read_report(ws.dir / "cls_lr.json"), "lr");
  const auto nb = classification_from_json(read_report(ws.dir / "cls_nb.json"), "nb");
  CHECK(lr.features == selection.result.top(15));
  CHECK(lr.subject_ids == nb.subject_ids);
  CHECK(lr.labels == nb.labels);
  CHECK(lr.confusion.total() == 30);

  cls.task = "sz-vs-bipolar";
  CHECK(run_classify(cls, ws.log) == kExitFailure);
  cls.task = "everything";
  CHECK(run_classify(cls, ws.log) == kExitUsage);

  reg.selection = ws.dir / "bogus.json";
  nlohmann::json doc = read_report(sel.out);
  doc["selected"][0]["feature"] = "not_a_feature";
  write_file_atomic(reg.selection, doc.dump());
  CHECK(run_regress(reg, ws.log) == kExitFailure);
  CHECK(ws.log.str().find("not_a_feature") != std::string::npos);
}

TEST_CASE("synth determinism and minimum size") {
  Workspace a(2, 5), b(2, 5);
  for (const auto& e : fs::recursive_directory_iterator(a.dir / "corpus")) {
    if (!e.is_regular_file()) continue;
    CHECK(sha256_file(e.path()) == sha256_file(b.dir / "corpus" / fs::relative(e.path(), a.dir / "corpus")));
  }
  REQUIRE(run_extract(a.extract_options(), a.log) == kExitOk);
  CHECK(read_table(a.dir / "features.csv").size() == 4);
  SynthOptions s;
  s.n = 1;
  s.out = a.dir / "tiny";
  CHECK(run_synth(s, a.log) == kExitUsage);
}

TEST_CASE("command-line exit codes") {
  testing::TempDir dir("cli-exit");
  CHECK(run_cli("extract --corpus " + dir.path().string() + " --out x.csv") == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("select --features " + (dir / "missing.csv").string() + " --out s.json") == 1);
  CHECK(run_cli("synth --n 2 --out " + (dir / "c").string()) == 0);
  CHECK(run_cli("--help") == 0);
}
