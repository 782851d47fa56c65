#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "speechpanel/errors.hpp"
#include "speechpanel/io.hpp"
#include "speechpanel/lexical.hpp"
#include "speechpanel/rng.hpp"
#include "speechpanel/synth.hpp"
#include "support.hpp"

using namespace speechpanel;

namespace {

SynthProfile single_group(double drift, double concentration) {
  SynthProfile p = default_two_group_profile();
  p.groups.resize(1);
  p.groups[0].topic_drift = drift;
  p.groups[0].vocab_concentration = concentration;
  return p;
}

std::vector<double> feature_values(const SynthProfile& profile, std::size_t n, std::uint64_t seed,
                                   const std::string& feature) {
  const testing::SynthInputs in(generate(profile, n, seed));
  std::vector<double> out;
  for (const auto& o : extract_corpus(in.corpus.transcripts, in.context(), &in.trees, PipelineConfig{})) {
    REQUIRE(o.panel.has_value());
    out.push_back(*o.panel->get(feature));
  }
  return out;
}

// Welch t statistic for mean(a) - mean(b).
double welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  auto moments = [](const std::vector<double>& x) {
    double m = 0;
    for (double v : x) m += v;
    m /= static_cast<double>(x.size());
    double s = 0;
    for (double v : x) s += (v - m) * (v - m);
    return std::pair{m, s / static_cast<double>(x.size() - 1)};
  };
  const auto [ma, va] = moments(a);
  const auto [mb, vb] = moments(b);
  return (ma - mb) / std::sqrt(va / static_cast<double>(a.size()) + vb / static_cast<double>(b.size()));
}

// One-sided critical value at alpha = 0.01 for ~58 degrees of freedom.
constexpr double kCritical = 2.39;

}  // namespace

TEST_CASE("Rng") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng ref(5489);
  std::uint64_t last = 0;
  for (int i = 0; i < 10000; ++i) last = ref.next();
  CHECK(last == 9981545732273789042ULL);

  Rng r(7);
  double sum = 0, sq = 0;
  for (int i = 0; i < 20000; ++i) {
    const double z = r.normal();
    sum += z;
    sq += z * z;
    const double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.below(7) < 7);
  }
  CHECK(std::abs(sum / 20000) < 0.05);
  CHECK(std::abs(sq / 20000 - 1) < 0.05);
  CHECK(derive_seed(1, 1) != derive_seed(1, 2));
}

TEST_CASE("profiles") {
  const auto p = default_two_group_profile();
  CHECK_NOTHROW(validate(p));
  const auto back = parse_profile(serialize_profile(p), "mem");
  CHECK(serialize_profile(back) == serialize_profile(p));

  auto bad = p;
  bad.groups[0].function_word_rate = 1.5;
  try {
    validate(bad);
    FAIL("expected an error");
  } catch (const ParameterError& e) {
    CHECK(std::string(e.what()).find("function_word_rate") != std::string::npos);
  }
  bad = p;
  bad.groups.clear();
  CHECK_THROWS_AS(validate(bad), ParameterError);
  CHECK_THROWS_AS(parse_profile(R"({"groups": [], "colour": 1})", "mem"), FormatError);
  CHECK_THROWS_AS(generate(p, 1, 1), ParameterError);
}

TEST_CASE("generate is deterministic and well formed") {
  const auto p = default_two_group_profile();
  testing::TempDir one("synth-a"), two("synth-b");
  write_corpus(generate(p, 3, 99), p, one.path());
  write_corpus(generate(p, 3, 99), p, two.path());
  std::size_t files = 0;
  for (const auto& e : std::filesystem::recursive_directory_iterator(one.path())) {
    if (!e.is_regular_file()) continue;
    ++files;
    const auto rel = std::filesystem::relative(e.path(), one.path());
    CHECK(sha256_file(e.path()) == sha256_file(two.path() / rel));
  }
  CHECK(files == 5 + 2 * 6);

  const auto c = generate(p, 2, 3);
  CHECK(c.transcripts.size() == 4);
  CHECK(c.latents.size() == 4);
  for (const auto& t : c.transcripts) {
    CHECK(t.scenes.size() == 3);
    CHECK(*t.sspa_overall >= 1.0);
    CHECK(*t.sspa_overall <= 5.0);
    CHECK(c.trees.at(t.subject_id).size() == subject_sentences(t).size());
  }
  CHECK(generate(p, 2, 4).transcripts != c.transcripts);
  CHECK(synthetic_word(0) != synthetic_word(1));
}

TEST_CASE("zero drift gives unit BoW coherence") {
  auto p = single_group(0.0, 1.0);
  p.settings.word_spread = 0.0;
  const testing::SynthInputs in(generate(p, 3, 8));
  auto ctx = in.context();
  for (const auto& t : in.corpus.transcripts) {
    for (const auto& s : t.scenes) {
      for (double v : score_scene(t.subject_id, s, {EncoderKind::Bow, "bow"}, ctx).scores) {
        CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("generated corpora extract without warnings") {
  const testing::SynthInputs in(generate(default_two_group_profile(), 5, 21));
  for (const auto& o : extract_corpus(in.corpus.transcripts, in.context(), &in.trees, PipelineConfig{})) {
    CHECK(o.panel.has_value());
    CHECK(o.warnings.empty());
  }
}

TEST_CASE("drift lowers coherence and concentration lowers MATTR") {
  const auto low = feature_values(single_group(0.1, 1.0), 30, 17, "bow_mean_scene3");
  const auto high = feature_values(single_group(1.0, 1.0), 30, 17, "bow_mean_scene3");
  CHECK(welch_t(low, high) > kCritical);

  const auto spread = feature_values(single_group(0.3, 0.8), 30, 18, "mattr");
  const auto focused = feature_values(single_group(0.3, 1.6), 30, 18, "mattr");
  CHECK(welch_t(spread, focused) > kCritical);

  const testing::SynthInputs two(generate(default_two_group_profile(), 30, 19));
  double control = 0, clinical = 0;
  for (const auto& o : extract_corpus(two.corpus.transcripts, two.context(), &two.trees, PipelineConfig{})) {
    (o.panel->group == Group::Control ? control : clinical) += *o.panel->get("bow_mean_scene3");
  }
  CHECK(control > clinical);
}
