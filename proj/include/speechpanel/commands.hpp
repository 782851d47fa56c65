#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "speechpanel/pipeline.hpp"

namespace speechpanel {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitUsage = 2;

struct ExtractOptions {
  std::filesystem::path corpus;
  std::filesystem::path embeddings;
  std::optional<std::filesystem::path> freq;
  std::optional<std::filesystem::path> trees;
  std::vector<std::string> encoders = {"bow", "sif", "ext"};
  std::optional<std::filesystem::path> ext_vectors;
  std::string ext_label = "ext";
  std::size_t mattr_window = kDefaultMattrWindow;
  std::vector<std::string> function_tags;  // empty = Penn default set
  std::string height_agg = "mean";
  bool include_ttr = false;
  double sif_a = kDefaultSifA;
  std::optional<std::filesystem::path> dump_coherence;
  bool keep_partial = false;
  std::filesystem::path out;
};

struct SelectOptions {
  std::filesystem::path features;
  std::string target = "sspa_overall";
  std::size_t max_features = 25;
  double min_improvement = 1e-4;
  std::filesystem::path out;
};

struct RegressOptions {
  std::filesystem::path features;
  std::filesystem::path selection;
  bool nested = false;
  std::filesystem::path out;
};

struct ClassifyOptions {
  std::filesystem::path features;
  std::filesystem::path selection;
  std::string label = "group";
  std::string task = "clinical-vs-control";
  std::string model = "lr";
  std::size_t top = 25;
  bool nested = false;
  std::filesystem::path out;
};

struct SynthOptions {
  std::optional<std::filesystem::path> profile;
  std::size_t n = 30;
  std::uint64_t seed = 1;
  std::filesystem::path out;
};

// Each returns an exit code and writes progress/warnings to `log`.
int run_extract(const ExtractOptions& opt, std::ostream& log);
int run_select(const SelectOptions& opt, std::ostream& log);
int run_regress(const RegressOptions& opt, std::ostream& log);
int run_classify(const ClassifyOptions& opt, std::ostream& log);
int run_synth(const SynthOptions& opt, std::ostream& log);

// Maps a group to the task's binary label; nullopt drops the subject.
std::optional<int> task_label(const std::string& task, Group group);

}  // namespace speechpanel
