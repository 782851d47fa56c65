#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"
#include "speechpanel/learn.hpp"

namespace speechpanel {

inline constexpr const char* kToolName = "speechpanel";
inline constexpr const char* kToolVersion = "1.0.0";

// Header stamped on every report: tool, version, flags, and SHA-256 of each
// input file. Contains nothing run-dependent (no clock, no host).
struct Provenance {
  std::string command;
  std::map<std::string, std::string> flags;
  std::map<std::string, std::string> input_digests;  // path -> sha256

  void add_input(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

struct SelectionFile {
  std::string target;
  std::size_t max_features = 0;
  double min_improvement = 0;
  std::vector<std::string> excluded_subjects;
  SelectionResult result;
};

nlohmann::json selection_to_json(const SelectionFile& sel, const Provenance& prov);
SelectionFile selection_from_json(const nlohmann::json& doc, const std::string& source);
SelectionFile read_selection(const std::filesystem::path& path);

struct RegressionReport {
  std::vector<std::string> features;
  bool nested = false;
  std::vector<std::string> subject_ids;
  Vector actual;
  Vector predicted;
  RegressionMetrics metrics;
};

nlohmann::json regression_to_json(const RegressionReport& r, const Provenance& prov);
RegressionReport regression_from_json(const nlohmann::json& doc, const std::string& source);

struct ClassificationReport {
  std::string task;
  std::string model;
  std::string positive_class;
  std::size_t top = 0;
  bool nested = false;
  std::vector<std::string> features;
  std::vector<std::string> subject_ids;
  Labels labels;
  ClassificationResult result;
  Confusion confusion;
  RocCurve roc;
};

nlohmann::json classification_to_json(const ClassificationReport& r, const Provenance& prov);
ClassificationReport classification_from_json(const nlohmann::json& doc, const std::string& source);

// Reads a report file written by the commands.
nlohmann::json read_report(const std::filesystem::path& path);

}  // namespace speechpanel
