#include <doctest.h>

#include <Eigen/Dense>
#include <fstream>

#include "speechpanel/coherence.hpp"
#include "speechpanel/embed.hpp"
#include "speechpanel/errors.hpp"
#include "support.hpp"

using namespace speechpanel;

namespace {

EmbeddingStore store_of(const std::vector<std::pair<std::string, std::vector<double>>>& entries) {
  EmbeddingStore s(entries.front().second.size());
  for (const auto& [w, v] : entries) s.insert(w, v);
  return s;
}

TurnVector valid(std::vector<double> v) { return {std::move(v), true}; }

double dot(const std::vector<double>& a, std::span<const double> b) {
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

}  // namespace

TEST_CASE("embedding file round trip") {
  testing::TempDir dir("embed");
  std::ofstream(dir / "small.txt") << "3 4\ncat 1 2 3 4\ndog 0 0 0 1\ncat 4 3 2 1\nfish 0.5 0.25 0 0\n";
  const auto small = load_embeddings(dir / "small.txt");
  CHECK(small.size() == 3);
  CHECK(small.dimension() == 4);
  CHECK(small.duplicate_count() == 1);
  CHECK(small.find("cat")[0] == 4.0);
  CHECK(small.find("bird").empty());

  std::ofstream(dir / "bad.txt") << "2 4\ncat 1 2 3 4\ndog 1 2 3\n";
  try {
    load_embeddings(dir / "bad.txt");
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find("bad.txt:3:") != std::string::npos);
  }
  std::ofstream(dir / "empty.txt") << "";
  CHECK_THROWS_AS(load_embeddings(dir / "empty.txt"), FormatError);

  std::mt19937_64 gen(1);
  EmbeddingStore big(16);
  std::vector<std::vector<double>> written;
  for (int i = 0; i < 10000; ++i) {
    written.push_back(testing::random_vector(gen, 16));
    big.insert("w" + std::to_string(i), written.back());
  }
  write_embeddings(big, dir / "big.txt");
  const auto back = load_embeddings(dir / "big.txt");
  REQUIRE(back.size() == 10000);
  bool exact = true;
  for (int i = 0; i < 10000; ++i) {
    const auto v = back.find("w" + std::to_string(i));
    exact = exact && std::equal(v.begin(), v.end(), written[static_cast<std::size_t>(i)].begin());
  }
  CHECK(exact);
}

TEST_CASE("frequency table") {
  const FrequencyTable f({{"a", 3}, {"b", 1}});
  CHECK(f.probability("a") == 0.75);
  CHECK(f.probability("zzz") == 0.25);
  testing::TempDir dir("freq");
  std::ofstream(dir / "f.txt") << "a 2\nb 2\n";
  CHECK(load_frequencies(dir / "f.txt").probability("b") == 0.5);
  std::ofstream(dir / "g.txt") << "a -1\n";
  CHECK_THROWS_AS(load_frequencies(dir / "g.txt"), FormatError);
}

TEST_CASE("encode_bow") {
  const auto s = store_of({{"x", {1, 0}}, {"y", {0, 1}}});
  const auto v = encode_bow({"x", "y"}, s);
  CHECK(v.valid);
  CHECK(v.vector == std::vector<double>{0.5, 0.5});
  const auto none = encode_bow({"q", "r"}, s);
  CHECK_FALSE(none.valid);
  CHECK(none.vector == std::vector<double>{0, 0});

  std::mt19937_64 gen(2);
  EmbeddingStore big(8);
  for (int i = 0; i < 30; ++i) big.insert("w" + std::to_string(i), testing::random_vector(gen, 8));
  for (int trial = 0; trial < 50; ++trial) {
    const auto tokens = testing::random_tokens(gen, 20, 40);
    std::vector<long double> sum(8, 0);
    int k = 0;
    for (const auto& t : tokens) {
      const auto e = big.find(t);
      if (e.empty()) continue;
      ++k;
      for (int j = 0; j < 8; ++j) sum[static_cast<std::size_t>(j)] += e[static_cast<std::size_t>(j)];
    }
    const auto got = encode_bow(tokens, big);
    CHECK(got.valid == (k > 0));
    for (std::size_t j = 0; k > 0 && j < 8; ++j) {
      CHECK(testing::close_rel(got.vector[j], static_cast<double>(sum[j] / k), 1e-12));
    }
  }
}

TEST_CASE("encode_sif") {
  const auto s = store_of({{"x", {2, -4}}, {"y", {0, 1}}});
  const FrequencyTable f({{"x", 1}, {"y", 1}});
  const double a = 1e-3;
  const auto single = encode_sif({"x"}, s, f, a);
  CHECK(single.vector[0] == doctest::Approx(2 * a / (a + 0.5)));
  const FrequencyTable tiny({{"x", 1e-12}, {"y", 1.0}});
  CHECK(encode_sif({"x"}, s, tiny, a).vector[0] == doctest::Approx(2.0).epsilon(1e-8));

  const auto both = encode_sif({"x", "y"}, s, f, a);
  const auto bow = encode_bow({"x", "y"}, s);
  const double w = sif_weight(0.5, a);
  CHECK(both.vector[0] == doctest::Approx(w * bow.vector[0]));
  CHECK(both.vector[1] == doctest::Approx(w * bow.vector[1]));

  std::mt19937_64 gen(3);
  EmbeddingStore big(6);
  std::unordered_map<std::string, double> raw;
  for (int i = 0; i < 10; ++i) {
    big.insert("w" + std::to_string(i), testing::random_vector(gen, 6));
    raw["w" + std::to_string(i)] = 1.0 + static_cast<double>(gen() % 1000);
  }
  const FrequencyTable freq(raw);
  double total = 0;
  for (const auto& [w, c] : raw) total += c;
  for (int trial = 0; trial < 50; ++trial) {
    const auto tokens = testing::random_tokens(gen, 10, 10);
    std::vector<double> expected(6, 0);
    for (const auto& t : tokens) {
      const double p = raw[t] / total;
      const auto e = big.find(t);
      for (std::size_t j = 0; j < 6; ++j) expected[j] += a / (a + p) * e[j];
    }
    const auto got = encode_sif(tokens, big, freq, a);
    for (std::size_t j = 0; j < 6; ++j) CHECK(testing::close_rel(got.vector[j], expected[j] / 10, 1e-12));
  }
}

TEST_CASE("principal component removal") {
  SUBCASE("rank one collapses") {
    std::vector<TurnVector> vs(5, valid({1, 2, 3}));
    const auto u = remove_first_pc(vs);
    for (const auto& v : vs) CHECK(norm(v.vector) < 1e-8 * std::sqrt(14.0));
    CHECK(std::abs(std::abs(dot({1, 2, 3}, u)) - std::sqrt(14.0)) < 1e-10);
  }
  SUBCASE("dominant direction matches a dense eigendecomposition") {
    std::vector<TurnVector> vs = {valid({3, 0.1}), valid({-3, 0.2}), valid({2.5, -0.3}), valid({0.1, 1})};
    Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
    for (const auto& v : vs) {
      Eigen::Vector2d e(v.vector[0], v.vector[1]);
      m += e * e.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> eig(m);
    const Eigen::Vector2d top = eig.eigenvectors().col(1);
    const auto u = first_principal_component(vs);
    CHECK(std::abs(std::abs(top(0) * u[0] + top(1) * u[1]) - 1.0) < 1e-9);
    project_out(vs, u);
    for (const auto& v : vs) CHECK(std::abs(dot(v.vector, u)) < 1e-8);
  }
  SUBCASE("invalid vectors pass through") {
    std::vector<TurnVector> vs = {valid({1, 0}), valid({0.9, 0.1}), invalid_turn_vector(2)};
    remove_first_pc(vs);
    CHECK(vs[2] == invalid_turn_vector(2));
  }
  CHECK_THROWS_AS(first_principal_component({valid({1, 0})}), ParameterError);
}

TEST_CASE("cosine properties") {
  CHECK(cosine(std::vector<double>{1, 0}, std::vector<double>{0, 1}) == 0.0);
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> scale(0.01, 100);
  for (int i = 0; i < 10000; ++i) {
    const auto a = testing::random_vector(gen, 7);
    const auto b = testing::random_vector(gen, 7);
    auto as = a, neg = a;
    const double c = scale(gen);
    for (std::size_t j = 0; j < 7; ++j) {
      as[j] *= c;
      neg[j] *= -2;
    }
    const double ab = cosine(a, b);
    CHECK(ab == cosine(b, a));
    CHECK(std::abs(cosine(as, b) - ab) < 1e-12);
    CHECK(ab >= -1.0);
    CHECK(ab <= 1.0);
    CHECK(std::abs(cosine(a, a) - 1.0) < 1e-12);
    CHECK(std::abs(cosine(a, neg) + 1.0) < 1e-12);
  }
  CHECK_THROWS_AS(cosine(std::vector<double>{0, 0}, std::vector<double>{1, 0}), DegenerateInputError);
}

TEST_CASE("external vectors") {
  Transcript t;
  t.subject_id = "S1";
  t.scenes = {Scene{1, {Turn(Speaker::Assessor, "a"), Turn(Speaker::Subject, "b")}}};
  ExternalVectors ext;
  ext.dimension = 3;
  ext.vectors[{"S1", 1, 0}] = valid({0.1, 1.0 / 3.0, -2e-300});
  ext.vectors[{"S1", 1, 1}] = invalid_turn_vector(3);
  const auto back = parse_external_vectors(serialize_external_vectors(ext), "mem");
  CHECK(back.vectors == ext.vectors);
  CHECK(missing_external_keys(ext, {t}).empty());

  ext.vectors.erase({"S1", 1, 1});
  const auto missing = missing_external_keys(ext, {t});
  REQUIRE(missing.size() == 1);
  CHECK(missing[0] == TurnKey{"S1", 1, 1});
  try {
    require_external_coverage(ext, {t});
    FAIL("expected an error");
  } catch (const FormatError& e) {
    CHECK(std::string(e.what()).find(to_string(TurnKey{"S1", 1, 1})) != std::string::npos);
  }
  CHECK_THROWS_AS(parse_external_vectors(R"({"dimension": 2, "vectors": [{"subject_id": "S", "scene_id": 1,
      "turn_index": 0, "vector": [1, 2, 3]}]})", "m"), FormatError);
}
