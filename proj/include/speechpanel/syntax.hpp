#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speechpanel/lexical.hpp"

namespace speechpanel {

// A constituent, or a terminal when `children` is empty (then `label` holds
// the word).
struct ParseTree {
  std::string label;
  std::vector<ParseTree> children;

  bool is_terminal() const noexcept { return children.empty(); }
  bool is_preterminal() const noexcept { return children.size() == 1 && children.front().is_terminal(); }

  bool operator==(const ParseTree&) const = default;
};

// Penn Treebank bracket reader. A root with an empty label, e.g. "( (S ...) )",
// is allowed. Throws TreeParseError with the character offset.
ParseTree parse_bracketed(std::string_view text);

// Single-space canonical form; parse_bracketed(to_bracketed(t)) == t.
std::string to_bracketed(const ParseTree& tree);

// Drops a "ROOT" (or empty-label) wrapper with exactly one child.
const ParseTree& strip_root(const ParseTree& tree);

// Edges on the longest root-to-terminal path.
std::size_t tree_height(const ParseTree& tree);

// Per-terminal Yngve depth in word order: children are numbered right to
// left from 0 and a word's depth sums those numbers along its path.
std::vector<std::size_t> yngve_depths(const ParseTree& tree);

// (word, tag) for every preterminal, left to right.
std::vector<TaggedToken> preterminals(const ParseTree& tree);

struct YngveStats {
  double mean = 0;
  double total = 0;
  double max = 0;
};

YngveStats yngve_stats(const std::vector<std::vector<std::size_t>>& per_sentence);

// One tree per line; a blank line is a missing tree. Each parsed tree has its
// ROOT wrapper kept; callers strip it.
std::vector<std::optional<ParseTree>> parse_tree_sidecar(std::string_view text, const std::string& source);
std::vector<std::optional<ParseTree>> load_tree_sidecar(const std::filesystem::path& path);

enum class HeightAggregate { Mean, Max };

struct SyntaxFeatures {
  YngveStats yngve;
  double tree_height = 0;
  std::size_t sentences = 0;
  std::size_t covered = 0;
};

// Aligns trees to the subject's `sentence_count` sentences. Sentences
// without a tree are skipped with a warning; fewer than half covered is an
// error.
SyntaxFeatures syntax_features(const std::vector<std::optional<ParseTree>>& trees, std::size_t sentence_count,
                               HeightAggregate height_agg, std::vector<std::string>* warnings = nullptr);

}  // namespace speechpanel
