#include "speechpanel/lexical.hpp"

#include <cmath>
#include <string_view>
#include <unordered_map>

#include "speechpanel/errors.hpp"

namespace speechpanel {

FunctionTagSet FunctionTagSet::penn_default() {
  return {{"CC", "DT", "EX", "IN", "MD", "PDT", "POS", "PRP", "PRP$", "RP", "TO", "UH", "WDT", "WP", "WP$",
           "WRB"}};
}

namespace {

struct LexiconEntry {
  std::string_view word;
  std::string_view tag;
};

// Closed-class words with their most common Penn tag in conversational text.
constexpr LexiconEntry kLexicon[] = {
    // coordinating conjunctions
    {"and", "CC"}, {"but", "CC"}, {"or", "CC"}, {"nor", "CC"}, {"yet", "CC"}, {"plus", "CC"},
    // determiners
    {"a", "DT"}, {"an", "DT"}, {"the", "DT"}, {"this", "DT"}, {"that", "DT"}, {"these", "DT"},
    {"those", "DT"}, {"some", "DT"}, {"any", "DT"}, {"no", "DT"}, {"every", "DT"}, {"each", "DT"},
    {"another", "DT"}, {"either", "DT"}, {"neither", "DT"}, {"all", "DT"}, {"both", "PDT"}, {"half", "PDT"},
    {"such", "PDT"},
    // existential there
    {"there", "EX"},
    // prepositions and subordinating conjunctions
    {"in", "IN"}, {"on", "IN"}, {"at", "IN"}, {"of", "IN"}, {"for", "IN"}, {"with", "IN"}, {"about", "IN"},
    {"from", "IN"}, {"by", "IN"}, {"into", "IN"}, {"onto", "IN"}, {"over", "IN"}, {"under", "IN"},
    {"after", "IN"}, {"before", "IN"}, {"because", "IN"}, {"if", "IN"}, {"since", "IN"}, {"while", "IN"},
    {"although", "IN"}, {"though", "IN"}, {"than", "IN"}, {"like", "IN"}, {"through", "IN"},
    {"between", "IN"}, {"during", "IN"}, {"without", "IN"}, {"within", "IN"}, {"against", "IN"},
    {"among", "IN"}, {"until", "IN"}, {"unless", "IN"}, {"upon", "IN"}, {"whether", "IN"}, {"so", "IN"},
    {"as", "IN"}, {"around", "IN"}, {"behind", "IN"}, {"below", "IN"}, {"above", "IN"}, {"across", "IN"},
    // modals
    {"can", "MD"}, {"could", "MD"}, {"may", "MD"}, {"might", "MD"}, {"must", "MD"}, {"shall", "MD"},
    {"should", "MD"}, {"will", "MD"}, {"would", "MD"}, {"can't", "MD"}, {"won't", "MD"},
    {"couldn't", "MD"}, {"wouldn't", "MD"}, {"shouldn't", "MD"}, {"'ll", "MD"},
    // pronouns
    {"i", "PRP"}, {"me", "PRP"}, {"you", "PRP"}, {"he", "PRP"}, {"him", "PRP"}, {"she", "PRP"},
    {"her", "PRP$"}, {"it", "PRP"}, {"we", "PRP"}, {"us", "PRP"}, {"they", "PRP"}, {"them", "PRP"},
    {"myself", "PRP"}, {"yourself", "PRP"}, {"himself", "PRP"}, {"herself", "PRP"}, {"itself", "PRP"},
    {"ourselves", "PRP"}, {"themselves", "PRP"}, {"i'm", "PRP"}, {"i've", "PRP"}, {"i'd", "PRP"},
    {"i'll", "PRP"}, {"you're", "PRP"}, {"it's", "PRP"}, {"he's", "PRP"}, {"she's", "PRP"},
    {"we're", "PRP"}, {"they're", "PRP"}, {"that's", "DT"},
    // possessive pronouns
    {"my", "PRP$"}, {"your", "PRP$"}, {"his", "PRP$"}, {"its", "PRP$"}, {"our", "PRP$"}, {"their", "PRP$"},
    // particles and to
    {"up", "RP"}, {"off", "RP"}, {"out", "RP"}, {"down", "RP"}, {"to", "TO"},
    // wh-words
    {"which", "WDT"}, {"whatever", "WDT"}, {"what", "WP"}, {"who", "WP"}, {"whom", "WP"}, {"whose", "WP$"},
    {"how", "WRB"}, {"when", "WRB"}, {"where", "WRB"}, {"why", "WRB"},
    // interjections and discourse fillers
    {"uh", "UH"}, {"um", "UH"}, {"uhm", "UH"}, {"umm", "UH"}, {"er", "UH"}, {"erm", "UH"}, {"ah", "UH"},
    {"ahh", "UH"}, {"oh", "UH"}, {"ohh", "UH"}, {"hmm", "UH"}, {"hm", "UH"}, {"mm", "UH"}, {"mhm", "UH"},
    {"huh", "UH"}, {"wow", "UH"}, {"oops", "UH"}, {"yeah", "UH"}, {"yep", "UH"}, {"yes", "UH"},
    {"okay", "UH"}, {"ok", "UH"}, {"hey", "UH"}, {"whoa", "UH"}, {"uh-huh", "UH"},
};

const std::unordered_map<std::string_view, std::string_view>& lexicon() {
  static const auto table = [] {
    std::unordered_map<std::string_view, std::string_view> m;
    for (const auto& e : kLexicon) m.emplace(e.word, e.tag);
    return m;
  }();
  return table;
}

}  // namespace

std::vector<TaggedToken> tag_with_lexicon(const std::vector<std::string>& tokens) {
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  const auto& lex = lexicon();
  for (const auto& t : tokens) {
    auto it = lex.find(t);
    out.emplace_back(t, it == lex.end() ? std::string("NN") : std::string(it->second));
  }
  return out;
}

bool is_punctuation_tag(const std::string& tag) {
  static const std::set<std::string> punct = {".", ",", ":", "``", "''", "-LRB-", "-RRB-", "#", "$", "HYPH", "NFP"};
  return punct.count(tag) != 0;
}

double ttr(const LexicalCounts& counts) {
  if (counts.tokens == 0) throw DegenerateInputError("TTR of an empty text");
  return static_cast<double>(counts.types) / static_cast<double>(counts.tokens);
}

double mattr(const std::vector<std::string>& tokens, std::size_t window, bool* fell_back) {
  if (window == 0) throw ParameterError("MATTR window must be at least 1");
  if (fell_back) *fell_back = false;
  if (tokens.size() < window) {
    if (fell_back) *fell_back = true;
    return ttr(lexical_counts(tokens));
  }
  std::unordered_map<std::string_view, std::size_t> counts;
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < window; ++i) {
    if (counts[tokens[i]]++ == 0) ++distinct;
  }
  // Integer sum of per-window type counts; one division at the end.
  std::size_t type_sum = distinct;
  for (std::size_t i = window; i < tokens.size(); ++i) {
    if (counts[tokens[i]]++ == 0) ++distinct;
    if (--counts[tokens[i - window]] == 0) --distinct;
    type_sum += distinct;
  }
  const std::size_t windows = tokens.size() - window + 1;
  return static_cast<double>(type_sum) / (static_cast<double>(windows) * static_cast<double>(window));
}

double brunet(const LexicalCounts& counts) {
  if (counts.tokens == 0 || counts.types == 0) throw DegenerateInputError("Brunet's index of an empty text");
  return std::pow(static_cast<double>(counts.tokens), std::pow(static_cast<double>(counts.types), -0.165));
}

double honore(const LexicalCounts& counts) {
  if (counts.tokens == 0 || counts.types == 0) throw DegenerateInputError("Honore's statistic of an empty text");
  if (counts.hapaxes >= counts.types) {
    throw DegenerateInputError("Honore's statistic is undefined when every word type occurs once (V1 = V)");
  }
  const double ratio = static_cast<double>(counts.hapaxes) / static_cast<double>(counts.types);
  return 100.0 * std::log(static_cast<double>(counts.tokens) / (1.0 - ratio));
}

DensityRatios density_ratios(const std::vector<TaggedToken>& tagged, const FunctionTagSet& tagset) {
  if (tagged.empty()) throw DegenerateInputError("density ratios need at least one tagged token");
  std::size_t func = 0, uh = 0;
  for (const auto& [_, tag] : tagged) {
    if (tag == kInterjectionTag) ++uh;
    if (tag == kInterjectionTag || tagset.contains(tag)) ++func;
  }
  const double w = static_cast<double>(tagged.size());
  return {static_cast<double>(func) / w, static_cast<double>(uh) / w};
}

double mls(const std::vector<std::string>& sentences) {
  if (sentences.empty()) throw DegenerateInputError("mean sentence length needs at least one sentence");
  std::size_t total = 0;
  for (const auto& s : sentences) total += tokenize(s).size();
  return static_cast<double>(total) / static_cast<double>(sentences.size());
}

}  // namespace speechpanel
