#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace speechpanel {

enum class Speaker { Assessor, Subject };

enum class Group { Control, SzSza, Bipolar };

std::string_view to_string(Speaker s);
std::string_view to_string(Group g);
std::optional<Speaker> parse_speaker(std::string_view s);
std::optional<Group> parse_group(std::string_view s);

struct Turn {
  Speaker speaker = Speaker::Assessor;
  std::string text;
  std::vector<std::string> tokens;  // tokenize(text)

  Turn() = default;
  Turn(Speaker who, std::string raw);

  bool operator==(const Turn&) const = default;
};

struct Scene {
  int scene_id = 0;  // 1, 2 or 3
  std::vector<Turn> turns;

  bool operator==(const Scene&) const = default;
};

struct Transcript {
  std::string subject_id;
  std::optional<Group> group;
  std::optional<double> sspa_overall;  // in [1, 5]
  std::vector<Scene> scenes;

  const Scene* scene(int scene_id) const;

  bool operator==(const Transcript&) const = default;
};

struct LexicalCounts {
  std::size_t tokens = 0;       // N
  std::size_t types = 0;        // V
  std::size_t hapaxes = 0;      // V1

  bool operator==(const LexicalCounts&) const = default;
};

// Lowercased word tokens. Splits on whitespace and punctuation, keeps
// apostrophes between word characters ("don't"), and treats non-ASCII bytes
// as word characters apart from common typographic punctuation.
std::vector<std::string> tokenize(std::string_view text);

// Splits after each run of '.', '!' or '?' that is followed by whitespace or
// the end of the text. Segments are trimmed; empty ones dropped.
std::vector<std::string> split_sentences(std::string_view text);

LexicalCounts lexical_counts(const std::vector<std::string>& tokens);

// Parses one transcript document. `source` names the origin in errors.
Transcript parse_transcript(std::string_view json_text, const std::string& source);
std::string serialize_transcript(const Transcript& t);

// Loads every *.json document under `path` (or the single file `path`),
// sorted by subject_id.
std::vector<Transcript> load_corpus(const std::filesystem::path& path);

// Subject's sentences across scenes in scene, turn, sentence order. Only
// sentences with at least one token are returned, so the list aligns with
// tree sidecar lines.
std::vector<std::string> subject_sentences(const Transcript& t);

// All subject tokens across scenes in order.
std::vector<std::string> subject_tokens(const Transcript& t);

}  // namespace speechpanel
