#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "speechpanel/corpus.hpp"
#include "speechpanel/embed.hpp"
#include "speechpanel/parallel.hpp"

namespace speechpanel {

enum class EncoderKind { Bow, Sif, Ext };

struct EncoderSpec {
  EncoderKind kind = EncoderKind::Bow;
  std::string label;  // feature-name prefix: "bow", "sif", "ext" by default
};

std::string_view default_label(EncoderKind kind);
std::optional<EncoderKind> parse_encoder(std::string_view name);

// A run of same-speaker turns collapsed into one. `members` are the raw turn
// indices within the scene.
struct MergedTurn {
  Speaker speaker = Speaker::Assessor;
  std::vector<std::string> tokens;
  std::vector<std::size_t> members;
};

struct TurnPair {
  MergedTurn assessor;
  MergedTurn subject;
};

std::vector<MergedTurn> merge_turns(const Scene& scene);

// Merge consecutive same-speaker turns, then emit every adjacent
// (assessor, subject) pair in that order.
std::vector<TurnPair> pair_turns(const Scene& scene);

// Everything an encoder may need. Pointers are non-owning; only the ones the
// configured encoders use must be set.
struct EncodingContext {
  const EmbeddingStore* store = nullptr;
  const FrequencyTable* freq = nullptr;
  const ExternalVectors* ext = nullptr;
  double sif_a = kDefaultSifA;
  // Common component removed from SIF vectors; empty until computed.
  std::vector<double> sif_component;
};

// Encodes one merged turn. For Ext, the merged vector is the mean of the
// members' valid external vectors. Throws FormatError when an Ext member has
// no entry at all.
TurnVector encode_turn(EncoderKind kind, const EncodingContext& ctx, const std::string& subject_id,
                       int scene_id, const MergedTurn& turn);

// SIF common direction over every valid merged-turn vector of the corpus.
std::vector<double> corpus_sif_component(const std::vector<Transcript>& corpus, const EncodingContext& ctx,
                                         Execution exec = Execution::Parallel);

struct CoherenceDistribution {
  std::string subject_id;
  int scene_id = 0;
  std::string encoder;
  std::vector<double> scores;  // pair order
  std::size_t skipped_pairs = 0;
};

// One cosine per pair whose vectors are both valid. Skipped pairs are
// counted and reported through `warnings`. Throws Error when nothing
// survives.
CoherenceDistribution score_scene(const std::string& subject_id, const Scene& scene, const EncoderSpec& encoder,
                                  const EncodingContext& ctx, std::vector<std::string>* warnings = nullptr);

struct CoherenceStats {
  double min = 0, max = 0, mean = 0, median = 0, stdev = 0, p90 = 0, p10 = 0;
};

// Stat names in canonical feature order.
inline constexpr std::array<std::string_view, 7> kCoherenceStatNames = {"min", "max", "mean", "median",
                                                                         "stdev", "p90", "p10"};
std::array<double, 7> as_array(const CoherenceStats& s);

// Linear-interpolated percentile at rank p/100 * (n-1) of sorted data.
double percentile_sorted(const std::vector<double>& sorted, double p);

// Sample (n-1) standard deviation, 0 for a singleton.
CoherenceStats summarize(const std::vector<double>& scores);

// Raw turns that take part in a pair but have no entry in `ext`.
std::vector<TurnKey> missing_external_keys(const ExternalVectors& ext, const std::vector<Transcript>& corpus);

// Throws FormatError listing every missing key.
void require_external_coverage(const ExternalVectors& ext, const std::vector<Transcript>& corpus);

// Per-subject audit dump of all distributions.
std::string serialize_distributions(const std::string& subject_id,
                                    const std::vector<CoherenceDistribution>& dists);

}  // namespace speechpanel
