#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "speechpanel/corpus.hpp"

namespace speechpanel {

// Penn Treebank tags counted as function words. UH is always a member.
struct FunctionTagSet {
  std::set<std::string> tags;

  static FunctionTagSet penn_default();
  bool contains(const std::string& tag) const { return tags.count(tag) != 0; }
};

inline constexpr const char* kInterjectionTag = "UH";
inline constexpr std::size_t kDefaultMattrWindow = 100;

using TaggedToken = std::pair<std::string, std::string>;  // (token, POS tag)

// Tags tokens from the built-in closed-class lexicon. Words outside it get
// the content tag "NN".
std::vector<TaggedToken> tag_with_lexicon(const std::vector<std::string>& tokens);

// True for punctuation preterminals (".", ",", "``", "-LRB-", ...).
bool is_punctuation_tag(const std::string& tag);

double ttr(const LexicalCounts& counts);

// Mean TTR over every contiguous window of `window` tokens. Shorter texts
// fall back to plain TTR and set *fell_back.
double mattr(const std::vector<std::string>& tokens, std::size_t window, bool* fell_back = nullptr);

// N^(V^-0.165)
double brunet(const LexicalCounts& counts);

// 100 ln(N / (1 - V1/V)). Throws DegenerateInputError when V1 == V.
double honore(const LexicalCounts& counts);

struct DensityRatios {
  double func_w = 0;
  double uh_w = 0;
};

DensityRatios density_ratios(const std::vector<TaggedToken>& tagged, const FunctionTagSet& tagset);

// Mean token count per sentence.
double mls(const std::vector<std::string>& sentences);

}  // namespace speechpanel
