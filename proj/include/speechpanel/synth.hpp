#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "speechpanel/corpus.hpp"
#include "speechpanel/embed.hpp"
#include "speechpanel/syntax.hpp"

namespace speechpanel {

// Maps a subject's latent parameters to a synthetic SSPA score:
// clamp(intercept + sum of weight * latent + N(0, noise_sd), 1, 5).
struct LatentScoreWeights {
  double intercept = 4.5;
  double topic_drift = -1.5;
  double vocab_concentration = -0.5;
  double function_word_rate = -1.0;
  double interjection_rate = -2.0;
  double sentence_length = 0.0;
  double noise_sd = 0.2;
};

struct GroupProfile {
  Group group = Group::Control;
  double topic_drift = 0.1;           // spread of subject replies around the assessor's topic
  double vocab_concentration = 1.0;   // Zipf exponent within a topic
  double turn_length_mean = 16.0;     // words per subject turn
  double turn_length_sd = 4.0;
  double function_word_rate = 0.45;
  double interjection_rate = 0.02;
  double sentence_length_mean = 8.0;
  double subject_jitter = 0.2;        // log-scale spread of per-subject latents
  LatentScoreWeights score_weights;
};

// Corpus-wide generation settings.
struct SynthSettings {
  std::size_t dimension = 50;
  std::size_t vocab_size = 2000;  // content words, split evenly across topics
  std::size_t topics = 20;
  std::size_t exchanges_per_scene = 8;
  double word_spread = 0.3;  // word-vector noise around its topic center
  double ext_noise = 0.5;    // external turn-vector noise around the topic center
};

struct SynthProfile {
  SynthSettings settings;
  std::vector<GroupProfile> groups;
};

// Throws ParameterError naming the offending field.
void validate(const SynthProfile& profile);

SynthProfile default_two_group_profile();
SynthProfile parse_profile(std::string_view json_text, const std::string& source);
SynthProfile load_profile(const std::filesystem::path& path);
std::string serialize_profile(const SynthProfile& profile);

struct SubjectLatents {
  std::string subject_id;
  Group group = Group::Control;
  double topic_drift = 0;
  double vocab_concentration = 0;
  double function_word_rate = 0;
  double interjection_rate = 0;
  double sentence_length = 0;
  double sspa_overall = 0;
};

struct SynthCorpus {
  std::vector<Transcript> transcripts;
  EmbeddingStore embeddings;
  std::map<std::string, double> frequencies;  // word -> count
  std::map<std::string, std::vector<std::string>> trees;  // subject -> bracketed tree per sentence
  ExternalVectors ext;
  std::vector<SubjectLatents> latents;
};

// Deterministic for a fixed seed. Subject k of the whole run draws from its
// own stream derive_seed(seed, k + 1); the shared vocabulary from stream 0.
SynthCorpus generate(const SynthProfile& profile, std::size_t n_per_group, std::uint64_t seed);

// Layout: transcripts/<id>.json, embeddings.txt, frequencies.txt,
// trees/<id>.trees, ext_vectors.json, profile.json, latents.csv.
void write_corpus(const SynthCorpus& corpus, const SynthProfile& profile, const std::filesystem::path& dir);

// Synthetic content word for a vocabulary index (three consonant-vowel
// syllables, never a closed-class English word).
std::string synthetic_word(std::size_t index);

}  // namespace speechpanel
