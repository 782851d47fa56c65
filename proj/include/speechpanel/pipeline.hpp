#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "speechpanel/coherence.hpp"
#include "speechpanel/corpus.hpp"
#include "speechpanel/lexical.hpp"
#include "speechpanel/parallel.hpp"
#include "speechpanel/syntax.hpp"

namespace speechpanel {

struct PipelineConfig {
  std::vector<EncoderSpec> encoders = {{EncoderKind::Bow, "bow"}, {EncoderKind::Sif, "sif"}, {EncoderKind::Ext, "ext"}};
  std::size_t mattr_window = kDefaultMattrWindow;
  FunctionTagSet tagset = FunctionTagSet::penn_default();
  HeightAggregate height_agg = HeightAggregate::Mean;
  bool include_ttr = false;
};

inline constexpr int kSceneCount = 3;

// Canonical order: for each encoder, scene 1..3, each coherence stat
// ("bow_min_scene1", ...); then mattr, [ttr], brunet, honore, func_w, uh_w,
// mls, and with trees yngve_mean, yngve_total, yngve_max, tree_height.
std::vector<std::string> feature_names(const PipelineConfig& config, bool with_trees = true);

struct FeaturePanel {
  std::string subject_id;
  std::vector<std::string> names;
  std::vector<double> values;
  std::optional<Group> group;
  std::optional<double> sspa_overall;

  std::optional<double> get(const std::string& name) const;

  bool operator==(const FeaturePanel&) const = default;
};

using TreeSet = std::vector<std::optional<ParseTree>>;

// `trees` may be null (syntax features are then left out of the panel).
// Errors carry subject_id and the feature they arose in. `ctx.sif_component`
// is used as given; when empty and SIF is configured, the component is
// estimated from this transcript alone.
FeaturePanel extract_panel(const Transcript& transcript, const EncodingContext& ctx, const TreeSet* trees,
                           const PipelineConfig& config, std::vector<std::string>* warnings = nullptr,
                           std::vector<CoherenceDistribution>* distributions = nullptr);

struct SubjectOutcome {
  std::string subject_id;
  std::optional<FeaturePanel> panel;
  std::string error;  // set when panel is empty
  std::vector<std::string> warnings;
  std::vector<CoherenceDistribution> distributions;
};

// Batch extraction. Estimates the SIF common component over the whole
// corpus (when SIF is configured) and then extracts subjects independently.
// `trees` maps subject_id -> sidecar; pass null to run without trees.
// Results follow corpus order.
std::vector<SubjectOutcome> extract_corpus(const std::vector<Transcript>& corpus, EncodingContext ctx,
                                           const std::map<std::string, TreeSet>* trees, const PipelineConfig& config,
                                           Execution exec = Execution::Parallel);

// Comma-separated table: subject_id, features..., group, sspa_overall.
// Values printed with 17 significant digits; missing labels are empty.
std::string format_table(const std::vector<FeaturePanel>& panels);
std::vector<FeaturePanel> parse_table(std::string_view text, const std::string& source);
void write_table(const std::vector<FeaturePanel>& panels, const std::filesystem::path& path);
std::vector<FeaturePanel> read_table(const std::filesystem::path& path);

}  // namespace speechpanel
