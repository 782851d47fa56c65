#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "speechpanel/errors.hpp"
#include "speechpanel/pipeline.hpp"
#include "support.hpp"

using namespace speechpanel;

TEST_CASE("feature_names arithmetic") {
  PipelineConfig config;
  CHECK(feature_names(config).size() == 73);
  CHECK(feature_names(config, false).size() == 69);
  config.encoders.pop_back();
  CHECK(feature_names(config).size() == 52);
  config.encoders.pop_back();
  CHECK(feature_names(config).size() == 31);
  config.include_ttr = true;
  CHECK(feature_names(config).size() == 32);
  const auto names = feature_names(PipelineConfig{});
  CHECK(names.front() == "bow_min_scene1");
  CHECK(names[7] == "bow_min_scene2");
  CHECK(names[21] == "sif_min_scene1");
  CHECK(names.back() == "tree_height");
}

TEST_CASE("extract_panel on synthetic transcripts") {
  const testing::SynthInputs in(generate(default_two_group_profile(), 3, 5));
  auto ctx = in.context();
  ctx.sif_component = corpus_sif_component(in.corpus.transcripts, ctx);
  const PipelineConfig config;
  for (const auto& t : in.corpus.transcripts) {
    std::vector<std::string> warnings;
    const auto panel = extract_panel(t, ctx, &in.trees.at(t.subject_id), config, &warnings);
    CHECK(panel.values.size() == 73);
    CHECK(panel.names == feature_names(config));
    for (double v : panel.values) CHECK(std::isfinite(v));
    CHECK(warnings.empty());
    CHECK(panel.get("bow_mean_scene1").has_value());
    CHECK_FALSE(panel.get("nope").has_value());
  }

  SUBCASE("a scene without pairs is named in the error") {
    Transcript t = in.corpus.transcripts.front();
    t.scenes[1].turns = {Turn(Speaker::Subject, "alone")};
    try {
      extract_panel(t, ctx, &in.trees.at(t.subject_id), config);
      FAIL("expected an error");
    } catch (const Error& e) {
      const std::string msg = e.what();
      CHECK(msg.find(t.subject_id) != std::string::npos);
      CHECK(msg.find("scene 2") != std::string::npos);
      CHECK(msg.find("bow") != std::string::npos);
    }
  }
}

TEST_CASE("extract_corpus matches per-subject extraction") {
  const testing::SynthInputs in(generate(default_two_group_profile(), 4, 6));
  const auto ctx = in.context();
  const auto outcomes = extract_corpus(in.corpus.transcripts, ctx, &in.trees, PipelineConfig{});
  auto with_pc = ctx;
  with_pc.sif_component = corpus_sif_component(in.corpus.transcripts, ctx);
  REQUIRE(outcomes.size() == in.corpus.transcripts.size());
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    REQUIRE(outcomes[i].panel.has_value());
    const auto& t = in.corpus.transcripts[i];
    CHECK(*outcomes[i].panel == extract_panel(t, with_pc, &in.trees.at(t.subject_id), PipelineConfig{}));
  }
  const auto no_trees = extract_corpus(in.corpus.transcripts, ctx, nullptr, PipelineConfig{});
  CHECK(no_trees.front().panel->values.size() == 69);

  auto partial = in.trees;
  partial.erase(in.corpus.transcripts.front().subject_id);
  const auto missing = extract_corpus(in.corpus.transcripts, ctx, &partial, PipelineConfig{});
  CHECK_FALSE(missing.front().panel.has_value());
  CHECK(missing.front().error.find(in.corpus.transcripts.front().subject_id) != std::string::npos);
  CHECK(missing[1].panel.has_value());
}

TEST_CASE("feature table round trip") {
  const testing::SynthInputs in(generate(default_two_group_profile(), 2, 7));
  std::vector<FeaturePanel> panels;
  for (const auto& o : extract_corpus(in.corpus.transcripts, in.context(), &in.trees, PipelineConfig{})) {
    panels.push_back(*o.panel);
  }
  panels.resize(3);
  panels[2].group.reset();
  panels[1].sspa_overall.reset();
  const auto text = format_table(panels);
  std::size_t lines = 0;
  for (char c : text) lines += c == '\n';
  CHECK(lines == 4);
  CHECK(text.substr(0, text.find('\n')).find("subject_id") == 0);
  CHECK(std::count(text.begin(), text.begin() + static_cast<long>(text.find('\n')), ',') == 73 + 2);
  CHECK(parse_table(text, "mem") == panels);

  testing::TempDir dir("table");
  write_table(panels, dir / "t.csv");
  CHECK(read_table(dir / "t.csv") == panels);

  std::vector<std::string> rows;
  std::string row;
  for (char c : text) {
    if (c == '\n') {
      rows.push_back(row);
      row.clear();
    } else {
      row += c;
    }
  }
  rows[2].erase(rows[2].find(','), rows[2].find(',', rows[2].find(',') + 1) - rows[2].find(','));
  std::string broken;
  for (const auto& r : rows) broken += r + "\n";
  try {
    parse_table(broken, "broken.csv");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("broken.csv:3:") != std::string::npos);
  }
}

TEST_CASE("serial and parallel extraction agree bitwise") {
  const testing::SynthInputs in(generate(default_two_group_profile(), 6, 8));
  set_thread_count(4);
  const auto par = extract_corpus(in.corpus.transcripts, in.context(), &in.trees, PipelineConfig{}, Execution::Parallel);
  set_thread_count(0);
  const auto ser = extract_corpus(in.corpus.transcripts, in.context(), &in.trees, PipelineConfig{}, Execution::Serial);
  REQUIRE(par.size() == ser.size());
  for (std::size_t i = 0; i < par.size(); ++i) CHECK(*par[i].panel == *ser[i].panel);
  CHECK(corpus_sif_component(in.corpus.transcripts, in.context(), Execution::Serial) ==
        corpus_sif_component(in.corpus.transcripts, in.context(), Execution::Parallel));
}
