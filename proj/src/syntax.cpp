#include "speechpanel/syntax.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "speechpanel/errors.hpp"

namespace speechpanel {
namespace {

class BracketReader {
 public:
  explicit BracketReader(std::string_view text) : text_(text) {}

  ParseTree read() {
    skip_space();
    if (pos_ >= text_.size()) throw TreeParseError("empty tree text", pos_);
    if (text_[pos_] != '(') throw TreeParseError("expected '('", pos_);
    ParseTree t = constituent();
    skip_space();
    if (pos_ != text_.size()) throw TreeParseError("trailing characters after tree", pos_);
    return t;
  }

 private:
  static bool is_delim(char c) { return c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c)); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  std::string atom() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && !is_delim(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  // Iterative so deeply nested input cannot exhaust the stack.
  ParseTree constituent() {
    struct Frame {
      ParseTree node;
      std::size_t open;
    };
    std::vector<Frame> stack;
    auto open = [&] {
      const std::size_t at = pos_;
      ++pos_;  // '('
      skip_space();
      ParseTree node;
      if (pos_ < text_.size() && text_[pos_] != '(' && text_[pos_] != ')') node.label = atom();
      stack.push_back({std::move(node), at});
    };
    open();
    while (true) {
      skip_space();
      if (pos_ >= text_.size()) throw TreeParseError("unbalanced brackets: missing ')'", pos_);
      const char c = text_[pos_];
      if (c == '(') {
        open();
      } else if (c == ')') {
        Frame f = std::move(stack.back());
        stack.pop_back();
        if (f.node.children.empty()) throw TreeParseError("empty constituent", f.open);
        ++pos_;
        if (stack.empty()) return std::move(f.node);
        stack.back().node.children.push_back(std::move(f.node));
      } else {
        stack.back().node.children.push_back(ParseTree{atom(), {}});
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

void write(const ParseTree& t, std::string& out) {
  if (t.is_terminal()) {
    out += t.label;
    return;
  }
  out += '(';
  out += t.label;
  for (const auto& c : t.children) {
    out += ' ';
    write(c, out);
  }
  out += ')';
}

void collect_depths(const ParseTree& t, std::size_t depth, std::vector<std::size_t>& out) {
  if (t.is_terminal()) {
    out.push_back(depth);
    return;
  }
  const std::size_t n = t.children.size();
  for (std::size_t i = 0; i < n; ++i) collect_depths(t.children[i], depth + (n - 1 - i), out);
}

void collect_preterminals(const ParseTree& t, std::vector<TaggedToken>& out) {
  if (t.is_preterminal()) {
    out.emplace_back(t.children.front().label, t.label);
    return;
  }
  for (const auto& c : t.children) collect_preterminals(c, out);
}

}  // namespace

ParseTree parse_bracketed(std::string_view text) { return BracketReader(text).read(); }

std::string to_bracketed(const ParseTree& tree) {
  std::string out;
  write(tree, out);
  return out;
}

const ParseTree& strip_root(const ParseTree& tree) {
  if ((tree.label.empty() || tree.label == "ROOT") && tree.children.size() == 1 &&
      !tree.children.front().is_terminal()) {
    return tree.children.front();
  }
  return tree;
}

std::size_t tree_height(const ParseTree& tree) {
  if (tree.is_terminal()) return 0;
  std::size_t h = 0;
  for (const auto& c : tree.children) h = std::max(h, tree_height(c));
  return h + 1;
}

std::vector<std::size_t> yngve_depths(const ParseTree& tree) {
  std::vector<std::size_t> out;
  collect_depths(tree, 0, out);
  return out;
}

std::vector<TaggedToken> preterminals(const ParseTree& tree) {
  std::vector<TaggedToken> out;
  collect_preterminals(tree, out);
  return out;
}

YngveStats yngve_stats(const std::vector<std::vector<std::size_t>>& per_sentence) {
  std::size_t words = 0, total = 0, max = 0;
  for (const auto& s : per_sentence) {
    for (std::size_t d : s) {
      ++words;
      total += d;
      max = std::max(max, d);
    }
  }
  if (words == 0) throw DegenerateInputError("Yngve statistics need at least one word");
  return {static_cast<double>(total) / static_cast<double>(words), static_cast<double>(total),
          static_cast<double>(max)};
}

std::vector<std::optional<ParseTree>> parse_tree_sidecar(std::string_view text, const std::string& source) {
  std::vector<std::optional<ParseTree>> out;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    const bool last = end == std::string_view::npos;
    if (last) end = text.size();
    std::string_view line = text.substr(start, end - start);
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    // No trailing newline means the final segment is a real line; an empty
    // final segment after '\n' is not.
    if (last && line.empty()) break;
    const bool blank = std::all_of(line.begin(), line.end(),
                                   [](char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; });
    if (blank) {
      out.emplace_back(std::nullopt);
    } else {
      try {
        out.emplace_back(parse_bracketed(line));
      } catch (const TreeParseError& e) {
        throw FormatError(source + ":" + std::to_string(lineno) + ": " + e.what());
      }
    }
    if (last) break;
    start = end + 1;
  }
  return out;
}

std::vector<std::optional<ParseTree>> load_tree_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_tree_sidecar(buf.str(), path.string());
}

SyntaxFeatures syntax_features(const std::vector<std::optional<ParseTree>>& trees, std::size_t sentence_count,
                               HeightAggregate height_agg, std::vector<std::string>* warnings) {
  if (trees.size() > sentence_count) {
    throw FormatError("tree sidecar has " + std::to_string(trees.size()) + " lines for " +
                      std::to_string(sentence_count) + " sentences");
  }
  SyntaxFeatures f;
  f.sentences = sentence_count;
  std::vector<std::vector<std::size_t>> depths;
  double height_acc = 0.0;
  for (const auto& t : trees) {
    if (!t) continue;
    const ParseTree& body = strip_root(*t);
    depths.push_back(yngve_depths(body));
    const auto h = static_cast<double>(tree_height(body));
    height_acc = height_agg == HeightAggregate::Mean ? height_acc + h : std::max(height_acc, h);
    ++f.covered;
  }
  if (sentence_count == 0 || 2 * f.covered < sentence_count) {
    throw Error("parse trees cover " + std::to_string(f.covered) + " of " + std::to_string(sentence_count) +
                " sentences (need at least half)");
  }
  if (f.covered < sentence_count && warnings) {
    warnings->push_back("parse trees cover " + std::to_string(f.covered) + " of " + std::to_string(sentence_count) +
                        " sentences");
  }
  f.yngve = yngve_stats(depths);
  f.tree_height = height_agg == HeightAggregate::Mean ? height_acc / static_cast<double>(f.covered) : height_acc;
  return f;
}

}  // namespace speechpanel
