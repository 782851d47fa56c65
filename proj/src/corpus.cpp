#include "speechpanel/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "speechpanel/errors.hpp"

namespace speechpanel {

using nlohmann::json;
namespace fs = std::filesystem;

std::string_view to_string(Speaker s) { return s == Speaker::Assessor ? "assessor" : "subject"; }

std::string_view to_string(Group g) {
  switch (g) {
    case Group::Control: return "control";
    case Group::SzSza: return "sz_sza";
    case Group::Bipolar: return "bipolar";
  }
  return "control";
}

std::optional<Speaker> parse_speaker(std::string_view s) {
  if (s == "assessor") return Speaker::Assessor;
  if (s == "subject") return Speaker::Subject;
  return std::nullopt;
}

std::optional<Group> parse_group(std::string_view s) {
  if (s == "control") return Group::Control;
  if (s == "sz_sza") return Group::SzSza;
  if (s == "bipolar") return Group::Bipolar;
  return std::nullopt;
}

Turn::Turn(Speaker who, std::string raw) : speaker(who), text(std::move(raw)), tokens(tokenize(text)) {}

const Scene* Transcript::scene(int scene_id) const {
  for (const auto& s : scenes) {
    if (s.scene_id == scene_id) return &s;
  }
  return nullptr;
}

namespace {

[[noreturn]] void fail(const std::string& source, const std::string& field, const std::string& what) {
  throw FormatError(source + ": field '" + field + "': " + what);
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& source, const std::string& where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(source, where.empty() ? key : where + "." + key, "unknown field");
    }
  }
}

const json& require(const json& obj, const char* key, const std::string& source, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(source, where.empty() ? key : where + "." + key, "missing");
  return *it;
}

}  // namespace

Transcript parse_transcript(std::string_view json_text, const std::string& source) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(source + ": " + e.what());
  }
  if (!doc.is_object()) fail(source, "<root>", "expected an object");
  reject_unknown(doc, {"subject_id", "group", "sspa_overall", "scenes"}, source, "");

  Transcript t;
  const json& id = require(doc, "subject_id", source, "");
  if (!id.is_string() || id.get<std::string>().empty()) fail(source, "subject_id", "expected a non-empty string");
  t.subject_id = id.get<std::string>();

  if (auto it = doc.find("group"); it != doc.end() && !it->is_null()) {
    if (!it->is_string()) fail(source, "group", "expected a string");
    auto g = parse_group(it->get<std::string>());
    if (!g) fail(source, "group", "unknown group '" + it->get<std::string>() + "'");
    t.group = *g;
  }
  if (auto it = doc.find("sspa_overall"); it != doc.end() && !it->is_null()) {
    if (!it->is_number()) fail(source, "sspa_overall", "expected a number");
    const double v = it->get<double>();
    if (!std::isfinite(v) || v < 1.0 || v > 5.0) {
      fail(source, "sspa_overall", "value " + it->dump() + " outside [1, 5]");
    }
    t.sspa_overall = v;
  }

  const json& scenes = require(doc, "scenes", source, "");
  if (!scenes.is_array()) fail(source, "scenes", "expected an array");
  std::set<int> seen;
  for (std::size_t si = 0; si < scenes.size(); ++si) {
    const std::string where = "scenes[" + std::to_string(si) + "]";
    const json& s = scenes[si];
    if (!s.is_object()) fail(source, where, "expected an object");
    reject_unknown(s, {"scene_id", "turns"}, source, where);
    const json& sid = require(s, "scene_id", source, where);
    if (!sid.is_number_integer()) fail(source, where + ".scene_id", "expected an integer");
    Scene scene;
    scene.scene_id = sid.get<int>();
    if (scene.scene_id < 1 || scene.scene_id > 3) {
      fail(source, where + ".scene_id", "value " + std::to_string(scene.scene_id) + " outside {1,2,3}");
    }
    if (!seen.insert(scene.scene_id).second) {
      fail(source, where + ".scene_id", "duplicate scene " + std::to_string(scene.scene_id));
    }
    const json& turns = require(s, "turns", source, where);
    if (!turns.is_array()) fail(source, where + ".turns", "expected an array");
    for (std::size_t ti = 0; ti < turns.size(); ++ti) {
      const std::string tw = where + ".turns[" + std::to_string(ti) + "]";
      const json& turn = turns[ti];
      if (!turn.is_object()) fail(source, tw, "expected an object");
      reject_unknown(turn, {"speaker", "text"}, source, tw);
      const json& sp = require(turn, "speaker", source, tw);
      auto speaker = sp.is_string() ? parse_speaker(sp.get<std::string>()) : std::nullopt;
      if (!speaker) fail(source, tw + ".speaker", "expected \"assessor\" or \"subject\"");
      const json& text = require(turn, "text", source, tw);
      if (!text.is_string()) fail(source, tw + ".text", "expected a string");
      scene.turns.emplace_back(*speaker, text.get<std::string>());
    }
    t.scenes.push_back(std::move(scene));
  }
  std::sort(t.scenes.begin(), t.scenes.end(),
            [](const Scene& a, const Scene& b) { return a.scene_id < b.scene_id; });
  return t;
}

std::string serialize_transcript(const Transcript& t) {
  json doc;
  doc["subject_id"] = t.subject_id;
  if (t.group) doc["group"] = std::string(to_string(*t.group));
  if (t.sspa_overall) doc["sspa_overall"] = *t.sspa_overall;
  doc["scenes"] = json::array();
  for (const auto& s : t.scenes) {
    json turns = json::array();
    for (const auto& turn : s.turns) {
      turns.push_back({{"speaker", std::string(to_string(turn.speaker))}, {"text", turn.text}});
    }
    doc["scenes"].push_back({{"scene_id", s.scene_id}, {"turns", std::move(turns)}});
  }
  return doc.dump(2) + "\n";
}

std::vector<Transcript> load_corpus(const fs::path& path) {
  std::vector<fs::path> files;
  if (fs::is_directory(path)) {
    for (const auto& entry : fs::directory_iterator(path)) {
      if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
  } else if (fs::is_regular_file(path)) {
    files.push_back(path);
  } else {
    throw FormatError(path.string() + ": no such file or directory");
  }
  std::sort(files.begin(), files.end());

  std::vector<Transcript> out;
  out.reserve(files.size());
  for (const auto& f : files) {
    std::ifstream in(f, std::ios::binary);
    if (!in) throw FormatError(f.string() + ": cannot open");
    std::ostringstream buf;
    buf << in.rdbuf();
    out.push_back(parse_transcript(buf.str(), f.string()));
  }
  std::sort(out.begin(), out.end(),
            [](const Transcript& a, const Transcript& b) { return a.subject_id < b.subject_id; });
  for (std::size_t i = 1; i < out.size(); ++i) {
    if (out[i].subject_id == out[i - 1].subject_id) {
      throw FormatError("duplicate subject_id '" + out[i].subject_id + "'");
    }
  }
  return out;
}

std::vector<std::string> subject_sentences(const Transcript& t) {
  std::vector<std::string> out;
  for (const auto& scene : t.scenes) {
    for (const auto& turn : scene.turns) {
      if (turn.speaker != Speaker::Subject) continue;
      for (auto& s : split_sentences(turn.text)) {
        if (!tokenize(s).empty()) out.push_back(std::move(s));
      }
    }
  }
  return out;
}

std::vector<std::string> subject_tokens(const Transcript& t) {
  std::vector<std::string> out;
  for (const auto& scene : t.scenes) {
    for (const auto& turn : scene.turns) {
      if (turn.speaker == Speaker::Subject) out.insert(out.end(), turn.tokens.begin(), turn.tokens.end());
    }
  }
  return out;
}

}  // namespace speechpanel
