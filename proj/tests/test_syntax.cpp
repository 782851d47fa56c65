#include <doctest.h>

#include "speechpanel/errors.hpp"
#include "speechpanel/syntax.hpp"
#include "support.hpp"

using namespace speechpanel;

namespace {

const char* kDog = "(S (NP (DT the) (NN dog)) (VP (VBD barked)))";

// Independent recursive reference for Yngve depths and height.
void oracle_depths(const ParseTree& t, std::size_t depth, std::vector<std::size_t>& out) {
  if (t.children.empty()) {
    out.push_back(depth);
    return;
  }
  const std::size_t k = t.children.size();
  for (std::size_t i = 0; i < k; ++i) oracle_depths(t.children[i], depth + (k - 1 - i), out);
}

std::size_t oracle_height(const ParseTree& t) {
  std::size_t best = 0;
  for (const auto& c : t.children) best = std::max(best, 1 + oracle_height(c));
  return best;
}

ParseTree random_tree(std::mt19937_64& gen, int depth) {
  if (depth == 0 || gen() % 4 == 0) return ParseTree{"NN", {ParseTree{"w" + std::to_string(gen() % 50), {}}}};
  ParseTree node{depth % 2 ? "NP" : "VP", {}};
  const std::size_t k = 1 + gen() % 4;
  for (std::size_t i = 0; i < k; ++i) node.children.push_back(random_tree(gen, depth - 1));
  return node;
}

}  // namespace

TEST_CASE("parse_bracketed") {
  const auto nn = parse_bracketed("(NN dog)");
  CHECK(nn.label == "NN");
  CHECK(nn.is_preterminal());
  CHECK(nn.children[0].label == "dog");

  const auto s = parse_bracketed(kDog);
  CHECK(preterminals(s).size() == 3);
  CHECK(to_bracketed(s) == kDog);

  const auto wrapped = parse_bracketed(std::string("(ROOT ") + kDog + ")");
  CHECK(strip_root(wrapped) == s);
  CHECK(strip_root(parse_bracketed(std::string("( ") + kDog + " )")) == s);

  try {
    parse_bracketed("((S");
    FAIL("expected a parse error");
  } catch (const TreeParseError& e) {
    CHECK(e.offset() <= 3);
  }
  CHECK_THROWS_AS(parse_bracketed("NN dog"), TreeParseError);
  CHECK_THROWS_AS(parse_bracketed("(NN dog))"), TreeParseError);
  CHECK_THROWS_AS(parse_bracketed("()"), TreeParseError);
}

TEST_CASE("tree_height") {
  CHECK(tree_height(parse_bracketed("(NN dog)")) == 1);
  CHECK(tree_height(parse_bracketed(kDog)) == 3);
  for (std::size_t k = 1; k < 30; ++k) {
    ParseTree t{"w", {}};
    for (std::size_t i = 0; i < k; ++i) t = ParseTree{"X", {t}};
    CHECK(tree_height(t) == k);
  }
}

TEST_CASE("yngve depths") {
  CHECK(yngve_depths(parse_bracketed(kDog)) == std::vector<std::size_t>{2, 1, 0});
  CHECK(yngve_depths(parse_bracketed("(S (A (B (C x))))")) == std::vector<std::size_t>{0});
  CHECK(yngve_depths(parse_bracketed("(S (A a) (S (B b) (S (C c) (D d))))")) == std::vector<std::size_t>{1, 1, 1, 0});

  std::mt19937_64 gen(5);
  for (int i = 0; i < 1000; ++i) {
    const auto t = random_tree(gen, 6);
    std::vector<std::size_t> expected;
    oracle_depths(t, 0, expected);
    CHECK(yngve_depths(t) == expected);
    CHECK(tree_height(t) == oracle_height(t));
    CHECK(parse_bracketed(to_bracketed(t)) == t);
  }
}

TEST_CASE("yngve_stats") {
  const auto one = yngve_stats({{2, 1, 0}});
  CHECK(one.mean == 1.0);
  CHECK(one.total == 3.0);
  CHECK(one.max == 2.0);
  const auto flat = yngve_stats({{0}, {0}});
  CHECK(flat.mean == 0.0);
  CHECK(flat.total == 0.0);
  CHECK(flat.max == 0.0);

  std::mt19937_64 gen(6);
  for (int i = 0; i < 100; ++i) {
    std::vector<std::vector<std::size_t>> parts(1 + gen() % 5);
    std::vector<std::size_t> merged;
    for (auto& p : parts) {
      p.resize(1 + gen() % 6);
      for (auto& d : p) d = gen() % 7;
      merged.insert(merged.end(), p.begin(), p.end());
    }
    const auto a = yngve_stats(parts);
    const auto b = yngve_stats({merged});
    CHECK(testing::close_rel(a.mean, b.mean, 1e-12));
    CHECK(a.total == b.total);
    CHECK(a.max == b.max);
  }
}

TEST_CASE("tree sidecars and coverage") {
  const auto trees = parse_tree_sidecar(std::string(kDog) + "\n\n(NN dog)\n", "s.trees");
  REQUIRE(trees.size() == 3);
  CHECK(trees[0].has_value());
  CHECK_FALSE(trees[1].has_value());

  std::vector<std::string> warnings;
  const auto f = syntax_features(trees, 3, HeightAggregate::Mean, &warnings);
  CHECK(f.covered == 2);
  CHECK(f.tree_height == 2.0);
  CHECK(f.yngve.total == 3.0);
  CHECK_FALSE(warnings.empty());
  CHECK(syntax_features(trees, 3, HeightAggregate::Max).tree_height == 3.0);

  CHECK_THROWS_AS(syntax_features(trees, 5, HeightAggregate::Mean), Error);
  CHECK_THROWS_AS(syntax_features(trees, 2, HeightAggregate::Mean), Error);
  CHECK_THROWS_AS(parse_tree_sidecar("(S (NN x)\n", "bad"), FormatError);
}
