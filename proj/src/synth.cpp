#include "speechpanel/synth.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>

#include "json.hpp"
#include "speechpanel/errors.hpp"
#include "speechpanel/io.hpp"
#include "speechpanel/lexical.hpp"
#include "speechpanel/rng.hpp"

namespace speechpanel {

using nlohmann::json;
namespace fs = std::filesystem;

std::string synthetic_word(std::size_t index) {
  static constexpr char kConsonants[] = "bdfgklmnprstvz";
  static constexpr char kVowels[] = "aeiou";
  constexpr std::size_t nc = sizeof(kConsonants) - 1;
  constexpr std::size_t nv = sizeof(kVowels) - 1;
  std::string w;
  for (int s = 0; s < 3; ++s) {
    const std::size_t syl = index % (nc * nv);
    index /= nc * nv;
    w.push_back(kConsonants[syl / nv]);
    w.push_back(kVowels[syl % nv]);
  }
  // Beyond 3 syllables' worth of indices, keep extending.
  while (index > 0) {
    const std::size_t syl = index % (nc * nv);
    index /= nc * nv;
    w.push_back(kConsonants[syl / nv]);
    w.push_back(kVowels[syl % nv]);
  }
  return w;
}

void validate(const SynthProfile& profile) {
  const auto& s = profile.settings;
  auto require = [](bool ok, const std::string& field, const std::string& rule) {
    if (!ok) throw ParameterError("profile field '" + field + "' must be " + rule);
  };
  require(s.dimension >= 2, "settings.dimension", ">= 2");
  require(s.topics >= 2, "settings.topics", ">= 2");
  require(s.vocab_size >= s.topics, "settings.vocab_size", ">= topics");
  require(s.exchanges_per_scene >= 1, "settings.exchanges_per_scene", ">= 1");
  require(s.word_spread >= 0 && std::isfinite(s.word_spread), "settings.word_spread", "finite and >= 0");
  require(s.ext_noise >= 0 && std::isfinite(s.ext_noise), "settings.ext_noise", "finite and >= 0");
  require(!profile.groups.empty(), "groups", "non-empty");
  for (std::size_t i = 0; i < profile.groups.size(); ++i) {
    const auto& g = profile.groups[i];
    const std::string at = "groups[" + std::to_string(i) + "].";
    require(g.topic_drift >= 0 && std::isfinite(g.topic_drift), at + "topic_drift", "finite and >= 0");
    require(g.vocab_concentration > 0 && std::isfinite(g.vocab_concentration), at + "vocab_concentration", "> 0");
    require(g.turn_length_mean >= 1 && std::isfinite(g.turn_length_mean), at + "turn_length_mean", ">= 1");
    require(g.turn_length_sd >= 0 && std::isfinite(g.turn_length_sd), at + "turn_length_sd", ">= 0");
    require(g.function_word_rate >= 0 && g.function_word_rate < 1, at + "function_word_rate", "in [0, 1)");
    require(g.interjection_rate >= 0 && g.interjection_rate < 1, at + "interjection_rate", "in [0, 1)");
    require(g.function_word_rate + g.interjection_rate < 1, at + "function_word_rate + interjection_rate", "< 1");
    require(g.sentence_length_mean >= 1 && std::isfinite(g.sentence_length_mean), at + "sentence_length_mean", ">= 1");
    require(g.subject_jitter >= 0 && std::isfinite(g.subject_jitter), at + "subject_jitter", ">= 0");
    require(g.score_weights.noise_sd >= 0, at + "latent_score_weights.noise_sd", ">= 0");
  }
}

SynthProfile default_two_group_profile() {
  SynthProfile p;
  GroupProfile control;
  GroupProfile clinical;
  clinical.group = Group::SzSza;
  clinical.topic_drift = 1.0;
  clinical.vocab_concentration = 1.4;
  clinical.turn_length_mean = 11.0;
  clinical.turn_length_sd = 3.0;
  clinical.function_word_rate = 0.55;
  clinical.interjection_rate = 0.08;
  clinical.sentence_length_mean = 6.0;
  p.groups = {control, clinical};
  return p;
}

namespace {

json weights_to_json(const LatentScoreWeights& w) {
  return {{"intercept", w.intercept},
          {"topic_drift", w.topic_drift},
          {"vocab_concentration", w.vocab_concentration},
          {"function_word_rate", w.function_word_rate},
          {"interjection_rate", w.interjection_rate},
          {"sentence_length", w.sentence_length},
          {"noise_sd", w.noise_sd}};
}

// Reads each present key into its field; unknown keys are rejected.
class FieldReader {
 public:
  FieldReader(const json& obj, std::string where, std::string source)
      : obj_(obj), where_(std::move(where)), source_(std::move(source)) {
    if (!obj_.is_object()) throw FormatError(source_ + ": " + where_ + " must be an object");
  }

  template <typename T>
  FieldReader& read(const char* key, T& out) {
    seen_.push_back(key);
    auto it = obj_.find(key);
    if (it == obj_.end()) return *this;
    if (!it->is_number()) throw FormatError(source_ + ": " + where_ + "." + key + " must be a number");
    if constexpr (std::is_integral_v<T>) {
      if (!it->is_number_unsigned()) throw FormatError(source_ + ": " + where_ + "." + key + " must be a non-negative integer");
    }
    out = it->get<T>();
    return *this;
  }

  FieldReader& allow(const char* key) {
    seen_.push_back(key);
    return *this;
  }

  void finish() const {
    for (const auto& [k, _] : obj_.items()) {
      if (std::find(seen_.begin(), seen_.end(), k) == seen_.end()) {
        throw FormatError(source_ + ": unknown field " + where_ + "." + k);
      }
    }
  }

 private:
  const json& obj_;
  std::string where_;
  std::string source_;
  std::vector<std::string> seen_;
};

}  // namespace

SynthProfile parse_profile(std::string_view json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(source + ": " + e.what());
  }
  SynthProfile p;
  FieldReader top(doc, "profile", source);
  top.allow("settings").allow("groups").finish();
  if (auto it = doc.find("settings"); it != doc.end()) {
    auto& s = p.settings;
    FieldReader(*it, "settings", source)
        .read("dimension", s.dimension)
        .read("vocab_size", s.vocab_size)
        .read("topics", s.topics)
        .read("exchanges_per_scene", s.exchanges_per_scene)
        .read("word_spread", s.word_spread)
        .read("ext_noise", s.ext_noise)
        .finish();
  }
  auto groups = doc.find("groups");
  if (groups == doc.end() || !groups->is_array()) throw FormatError(source + ": 'groups' must be an array");
  for (std::size_t i = 0; i < groups->size(); ++i) {
    const json& g = (*groups)[i];
    const std::string where = "groups[" + std::to_string(i) + "]";
    GroupProfile gp;
    FieldReader r(g, where, source);
    r.allow("group")
        .allow("latent_score_weights")
        .read("topic_drift", gp.topic_drift)
        .read("vocab_concentration", gp.vocab_concentration)
        .read("turn_length_mean", gp.turn_length_mean)
        .read("turn_length_sd", gp.turn_length_sd)
        .read("function_word_rate", gp.function_word_rate)
        .read("interjection_rate", gp.interjection_rate)
        .read("sentence_length_mean", gp.sentence_length_mean)
        .read("subject_jitter", gp.subject_jitter)
        .finish();
    auto label = g.find("group");
    if (label == g.end() || !label->is_string() || !parse_group(label->get<std::string>())) {
      throw FormatError(source + ": " + where + ".group must be control, sz_sza or bipolar");
    }
    gp.group = *parse_group(label->get<std::string>());
    if (auto w = g.find("latent_score_weights"); w != g.end()) {
      auto& sw = gp.score_weights;
      FieldReader(*w, where + ".latent_score_weights", source)
          .read("intercept", sw.intercept)
          .read("topic_drift", sw.topic_drift)
          .read("vocab_concentration", sw.vocab_concentration)
          .read("function_word_rate", sw.function_word_rate)
          .read("interjection_rate", sw.interjection_rate)
          .read("sentence_length", sw.sentence_length)
          .read("noise_sd", sw.noise_sd)
          .finish();
    }
    p.groups.push_back(gp);
  }
  validate(p);
  return p;
}

SynthProfile load_profile(const fs::path& path) { return parse_profile(read_text_file(path), path.string()); }

std::string serialize_profile(const SynthProfile& profile) {
  json doc;
  const auto& s = profile.settings;
  doc["settings"] = {{"dimension", s.dimension},     {"vocab_size", s.vocab_size},
                     {"topics", s.topics},           {"exchanges_per_scene", s.exchanges_per_scene},
                     {"word_spread", s.word_spread}, {"ext_noise", s.ext_noise}};
  doc["groups"] = json::array();
  for (const auto& g : profile.groups) {
    doc["groups"].push_back({{"group", std::string(to_string(g.group))},
                             {"topic_drift", g.topic_drift},
                             {"vocab_concentration", g.vocab_concentration},
                             {"turn_length_mean", g.turn_length_mean},
                             {"turn_length_sd", g.turn_length_sd},
                             {"function_word_rate", g.function_word_rate},
                             {"interjection_rate", g.interjection_rate},
                             {"sentence_length_mean", g.sentence_length_mean},
                             {"subject_jitter", g.subject_jitter},
                             {"latent_score_weights", weights_to_json(g.score_weights)}});
  }
  return doc.dump(2) + "\n";
}

namespace {

constexpr const char* kFunctionWords[] = {"the",  "a",     "and",   "to",   "of",    "in",    "i",
                                          "it",   "that",  "you",   "we",   "but",   "my",    "for",
                                          "with", "on",    "they",  "so",   "what",  "could", "would",
                                          "there", "this", "some",  "if",   "about", "because"};
constexpr const char* kInterjections[] = {"uh", "um", "yeah", "oh", "okay", "hmm"};

// Cumulative Zipf weights r^-s over ranks 1..n.
std::vector<double> zipf_cdf(std::size_t n, double s) {
  std::vector<double> cdf(n);
  double acc = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    acc += std::pow(static_cast<double>(r + 1), -s);
    cdf[r] = acc;
  }
  for (double& c : cdf) c /= acc;
  return cdf;
}

std::size_t sample_cdf(const std::vector<double>& cdf, Rng& rng) {
  const double u = rng.uniform();
  const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
  return std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
}

std::vector<double> unit_gaussian(std::size_t d, Rng& rng) {
  std::vector<double> v(d);
  double n = 0.0;
  for (double& x : v) {
    x = rng.normal();
    n += x * x;
  }
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

// normalize(center + spread * z / sqrt(d)), z standard normal.
std::vector<double> jittered(const std::vector<double>& center, double spread, Rng& rng) {
  const double k = spread / std::sqrt(static_cast<double>(center.size()));
  std::vector<double> v(center.size());
  double n = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    v[i] = center[i] + k * rng.normal();
    n += v[i] * v[i];
  }
  n = std::sqrt(n);
  for (double& x : v) x /= n;
  return v;
}

enum class Slot { Content, Function, Interjection };

struct Word {
  std::string text;
  Slot slot;
};

struct SpeakerStyle {
  double function_rate;
  double interjection_rate;
  const std::vector<double>* content_cdf;
  double sentence_length;
  double length_mean;
  double length_sd;
};

struct Vocabulary {
  std::vector<std::vector<double>> centers;
  std::size_t per_topic = 0;
  std::vector<double> function_cdf;

  std::string content_word(std::size_t topic, std::size_t rank) const { return synthetic_word(topic * per_topic + rank); }
};

std::vector<Word> draw_turn_words(const SpeakerStyle& style, std::size_t topic, const Vocabulary& vocab, Rng& rng) {
  const double raw = std::round(style.length_mean + style.length_sd * rng.normal());
  const auto len = static_cast<std::size_t>(std::max(2.0, raw));
  std::vector<Word> words;
  words.reserve(len);
  bool any_content = false;
  for (std::size_t i = 0; i < len; ++i) {
    const double u = rng.uniform();
    // Every slot draws the same number of variates regardless of outcome.
    const std::size_t content_rank = sample_cdf(*style.content_cdf, rng);
    const std::size_t function_idx = sample_cdf(vocab.function_cdf, rng);
    const std::size_t uh_idx = rng.below(std::size(kInterjections));
    if (u < style.interjection_rate) {
      words.push_back({kInterjections[uh_idx], Slot::Interjection});
    } else if (u < style.interjection_rate + style.function_rate) {
      words.push_back({kFunctionWords[function_idx], Slot::Function});
    } else {
      words.push_back({vocab.content_word(topic, content_rank), Slot::Content});
      any_content = true;
    }
  }
  if (!any_content) words.back() = {vocab.content_word(topic, 0), Slot::Content};
  return words;
}

// Sentence boundaries: lengths around `mean`, last sentence takes the rest.
std::vector<std::vector<Word>> split_into_sentences(std::vector<Word> words, double mean, Rng& rng) {
  std::vector<std::vector<Word>> out;
  std::size_t i = 0;
  while (i < words.size()) {
    const double raw = std::round(mean + 1.5 * rng.normal());
    const auto len = static_cast<std::size_t>(std::max(1.0, raw));
    const std::size_t end = std::min(words.size(), i + len);
    out.emplace_back(words.begin() + static_cast<std::ptrdiff_t>(i), words.begin() + static_cast<std::ptrdiff_t>(end));
    i = end;
  }
  return out;
}

std::string render(const std::vector<std::vector<Word>>& sentences, char terminal) {
  std::string text;
  for (const auto& s : sentences) {
    if (!text.empty()) text += ' ';
    for (std::size_t k = 0; k < s.size(); ++k) {
      std::string w = s[k].text;
      if (k == 0) w[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(w[0])));
      if (k > 0) text += ' ';
      text += w;
    }
    text += terminal;
  }
  return text;
}

std::string tag_for(const Word& w, bool verb_position) {
  if (w.slot == Slot::Content) return verb_position ? "VB" : "NN";
  return tag_with_lexicon({w.text}).front().second;
}

// (S (NP w1) (VP w2 (NP w3 (VP ...)))) over the sentence's words.
std::string right_branching_tree(const std::vector<Word>& words) {
  auto leaf = [&](std::size_t i, bool verb) { return "(" + tag_for(words[i], verb) + " " + words[i].text + ")"; };
  const std::size_t n = words.size();
  std::string tail;
  for (std::size_t i = n; i-- > 1;) {
    const bool verb = (i % 2) == 1;
    const std::string label = verb ? "VP" : "NP";
    tail = tail.empty() ? "(" + label + " " + leaf(i, verb) + ")" : "(" + label + " " + leaf(i, verb) + " " + tail + ")";
  }
  std::string tree = "(S (NP " + leaf(0, false) + ")";
  if (!tail.empty()) tree += " " + tail;
  return tree + ")";
}

double clamp_score(double s) { return std::clamp(s, 1.0, 5.0); }

}  // namespace

SynthCorpus generate(const SynthProfile& profile, std::size_t n_per_group, std::uint64_t seed) {
  validate(profile);
  if (n_per_group < 2) throw ParameterError("n_per_group must be at least 2");
  const auto& st = profile.settings;

  SynthCorpus out;
  Vocabulary vocab;
  vocab.per_topic = st.vocab_size / st.topics;
  vocab.function_cdf = zipf_cdf(std::size(kFunctionWords), 1.0);
  {
    Rng rng(derive_seed(seed, 0));
    for (std::size_t t = 0; t < st.topics; ++t) vocab.centers.push_back(unit_gaussian(st.dimension, rng));
    out.embeddings = EmbeddingStore(st.dimension);
    for (std::size_t t = 0; t < st.topics; ++t) {
      for (std::size_t r = 0; r < vocab.per_topic; ++r) {
        out.embeddings.insert(vocab.content_word(t, r), jittered(vocab.centers[t], st.word_spread, rng));
      }
    }
  }
  out.ext.dimension = st.dimension;
  const auto assessor_cdf = zipf_cdf(vocab.per_topic, 1.0);

  std::size_t subject_index = 0;
  for (const auto& gp : profile.groups) {
    for (std::size_t k = 0; k < n_per_group; ++k, ++subject_index) {
      Rng rng(derive_seed(seed, subject_index + 1));
      char id[16];
      std::snprintf(id, sizeof id, "S%04zu", subject_index + 1);

      SubjectLatents lat;
      lat.subject_id = id;
      lat.group = gp.group;
      auto jitter = [&] { return std::exp(gp.subject_jitter * rng.normal()); };
      lat.topic_drift = gp.topic_drift * jitter();
      lat.vocab_concentration = gp.vocab_concentration * jitter();
      lat.function_word_rate = std::min(0.9, gp.function_word_rate * jitter());
      lat.interjection_rate = std::min(0.9 - lat.function_word_rate, gp.interjection_rate * jitter());
      lat.sentence_length = std::max(1.0, gp.sentence_length_mean * jitter());
      const auto& w = gp.score_weights;
      lat.sspa_overall = clamp_score(w.intercept + w.topic_drift * lat.topic_drift +
                                     w.vocab_concentration * lat.vocab_concentration +
                                     w.function_word_rate * lat.function_word_rate +
                                     w.interjection_rate * lat.interjection_rate +
                                     w.sentence_length * lat.sentence_length + w.noise_sd * rng.normal());

      const auto subject_cdf = zipf_cdf(vocab.per_topic, lat.vocab_concentration);
      const SpeakerStyle assessor{0.4, 0.0, &assessor_cdf, 10.0, 12.0, 3.0};
      const SpeakerStyle subject{lat.function_word_rate, lat.interjection_rate, &subject_cdf, lat.sentence_length,
                                 gp.turn_length_mean, gp.turn_length_sd};

      Transcript t;
      t.subject_id = id;
      t.group = gp.group;
      t.sspa_overall = lat.sspa_overall;
      std::vector<std::string>& trees = out.trees[id];
      for (int scene_id = 1; scene_id <= 3; ++scene_id) {
        Scene scene;
        scene.scene_id = scene_id;
        for (std::size_t e = 0; e < st.exchanges_per_scene; ++e) {
          const std::size_t topic = rng.below(st.topics);
          // Reply topic: the center nearest to the drifted assessor topic.
          std::vector<double> target(st.dimension);
          for (std::size_t i = 0; i < st.dimension; ++i) {
            target[i] = vocab.centers[topic][i] + lat.topic_drift * rng.normal();
          }
          std::size_t reply = topic;
          double best = -1e300;
          for (std::size_t c = 0; c < st.topics; ++c) {
            double dot = 0.0;
            for (std::size_t i = 0; i < st.dimension; ++i) dot += vocab.centers[c][i] * target[i];
            if (dot > best) {
              best = dot;
              reply = c;
            }
          }

          const auto a_sent = split_into_sentences(draw_turn_words(assessor, topic, vocab, rng), assessor.sentence_length, rng);
          const auto s_sent = split_into_sentences(draw_turn_words(subject, reply, vocab, rng), subject.sentence_length, rng);
          const std::size_t a_index = scene.turns.size();
          scene.turns.emplace_back(Speaker::Assessor, render(a_sent, '?'));
          scene.turns.emplace_back(Speaker::Subject, render(s_sent, '.'));
          for (const auto& s : s_sent) trees.push_back(right_branching_tree(s));

          out.ext.vectors[{id, scene_id, a_index}] = {jittered(vocab.centers[topic], st.ext_noise, rng), true};
          out.ext.vectors[{id, scene_id, a_index + 1}] = {jittered(vocab.centers[reply], st.ext_noise, rng), true};
        }
        t.scenes.push_back(std::move(scene));
      }
      for (const auto& scene : t.scenes) {
        for (const auto& turn : scene.turns) {
          for (const auto& tok : turn.tokens) out.frequencies[tok] += 1.0;
        }
      }
      out.transcripts.push_back(std::move(t));
      out.latents.push_back(lat);
    }
  }
  // Every known word gets at least one count.
  for (const auto& w : out.embeddings.words()) out.frequencies[w] += 1.0;
  for (const char* w : kFunctionWords) out.frequencies[w] += 1.0;
  for (const char* w : kInterjections) out.frequencies[w] += 1.0;
  return out;
}

void write_corpus(const SynthCorpus& corpus, const SynthProfile& profile, const fs::path& dir) {
  fs::create_directories(dir / "transcripts");
  fs::create_directories(dir / "trees");
  for (const auto& t : corpus.transcripts) {
    write_file_atomic(dir / "transcripts" / (t.subject_id + ".json"), serialize_transcript(t));
  }
  for (const auto& [id, lines] : corpus.trees) {
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    write_file_atomic(dir / "trees" / (id + ".trees"), text);
  }
  write_embeddings(corpus.embeddings, dir / "embeddings.txt");
  std::string freq;
  char buf[64];
  for (const auto& [w, c] : corpus.frequencies) {
    std::snprintf(buf, sizeof buf, " %.17g\n", c);
    freq += w + buf;
  }
  write_file_atomic(dir / "frequencies.txt", freq);
  write_file_atomic(dir / "ext_vectors.json", serialize_external_vectors(corpus.ext));
  write_file_atomic(dir / "profile.json", serialize_profile(profile));
  std::string lat = "subject_id,group,topic_drift,vocab_concentration,function_word_rate,interjection_rate,"
                    "sentence_length,sspa_overall\n";
  for (const auto& l : corpus.latents) {
    std::snprintf(buf, sizeof buf, "%s,%s,", l.subject_id.c_str(), std::string(to_string(l.group)).c_str());
    lat += buf;
    for (double v : {l.topic_drift, l.vocab_concentration, l.function_word_rate, l.interjection_rate,
                     l.sentence_length}) {
      std::snprintf(buf, sizeof buf, "%.17g,", v);
      lat += buf;
    }
    std::snprintf(buf, sizeof buf, "%.17g\n", l.sspa_overall);
    lat += buf;
  }
  write_file_atomic(dir / "latents.csv", lat);
}

}  // namespace speechpanel
