#include "speechpanel/corpus.hpp"

#include <cctype>
#include <unordered_map>

namespace speechpanel {
namespace {

// Multi-byte punctuation that separates words. U+2019 is handled separately
// as an apostrophe.
constexpr std::string_view kUnicodePunct[] = {
    "\xE2\x80\x98",  // left single quote
    "\xE2\x80\x9C",  // left double quote
    "\xE2\x80\x9D",  // right double quote
    "\xE2\x80\x93",  // en dash
    "\xE2\x80\x94",  // em dash
    "\xE2\x80\xA6",  // ellipsis
    "\xC2\xAB",      // guillemets
    "\xC2\xBB",
};
constexpr std::string_view kRightQuote = "\xE2\x80\x99";

enum class Kind { Word, Apostrophe, Separator };

// Classifies the character starting at text[i]; `len` receives its byte length.
Kind classify(std::string_view text, std::size_t i, std::size_t& len) {
  const auto c = static_cast<unsigned char>(text[i]);
  len = 1;
  if (c < 0x80) {
    if (std::isalnum(c)) return Kind::Word;
    if (c == '\'') return Kind::Apostrophe;
    return Kind::Separator;
  }
  const std::string_view rest = text.substr(i);
  if (rest.starts_with(kRightQuote)) {
    len = kRightQuote.size();
    return Kind::Apostrophe;
  }
  for (auto p : kUnicodePunct) {
    if (rest.starts_with(p)) {
      len = p.size();
      return Kind::Separator;
    }
  }
  return Kind::Word;
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> out;
  std::string current;
  // An apostrophe is only kept when a word character follows it.
  bool pending_apostrophe = false;

  auto flush = [&] {
    if (!current.empty()) out.push_back(std::move(current));
    current.clear();
    pending_apostrophe = false;
  };

  std::size_t i = 0;
  while (i < text.size()) {
    std::size_t len = 1;
    const Kind kind = classify(text, i, len);
    switch (kind) {
      case Kind::Word:
        if (pending_apostrophe) {
          current.push_back('\'');
          pending_apostrophe = false;
        }
        for (std::size_t k = 0; k < len; ++k) {
          const auto c = static_cast<unsigned char>(text[i + k]);
          current.push_back(c < 0x80 ? static_cast<char>(std::tolower(c)) : text[i + k]);
        }
        break;
      case Kind::Apostrophe:
        if (!current.empty() && !pending_apostrophe) {
          pending_apostrophe = true;
        } else {
          flush();
        }
        break;
      case Kind::Separator:
        flush();
        break;
    }
    i += len;
  }
  flush();
  return out;
}

std::vector<std::string> split_sentences(std::string_view text) {
  std::vector<std::string> out;
  auto is_space = [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; };
  auto is_terminal = [](char c) { return c == '.' || c == '!' || c == '?'; };

  auto emit = [&](std::size_t begin, std::size_t end) {
    while (begin < end && is_space(text[begin])) ++begin;
    while (end > begin && is_space(text[end - 1])) --end;
    if (end > begin) out.emplace_back(text.substr(begin, end - begin));
  };

  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    if (!is_terminal(text[i])) {
      ++i;
      continue;
    }
    std::size_t run_end = i;
    while (run_end < text.size() && is_terminal(text[run_end])) ++run_end;
    if (run_end == text.size() || is_space(text[run_end])) {
      emit(start, run_end);
      start = run_end;
    }
    i = run_end;
  }
  emit(start, text.size());
  return out;
}

LexicalCounts lexical_counts(const std::vector<std::string>& tokens) {
  std::unordered_map<std::string_view, std::size_t> freq;
  freq.reserve(tokens.size());
  for (const auto& t : tokens) ++freq[t];
  LexicalCounts c;
  c.tokens = tokens.size();
  c.types = freq.size();
  for (const auto& [_, n] : freq) {
    if (n == 1) ++c.hapaxes;
  }
  return c;
}

}  // namespace speechpanel
