#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "speechpanel/corpus.hpp"
#include "speechpanel/parallel.hpp"

namespace speechpanel {

// Word -> dense vector, all of one dimension. Vectors live in one flat buffer.
class EmbeddingStore {
 public:
  EmbeddingStore() = default;
  explicit EmbeddingStore(std::size_t dimension);

  // Inserts or replaces. Returns false when `word` was already present.
  bool insert(std::string word, std::span<const double> vec);

  // nullptr-like empty span for out-of-vocabulary words.
  std::span<const double> find(std::string_view word) const;

  std::size_t dimension() const noexcept { return dim_; }
  std::size_t size() const noexcept { return index_.size(); }
  std::size_t duplicate_count() const noexcept { return duplicates_; }
  std::vector<std::string> words() const;  // sorted

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::size_t dim_ = 0;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<double> data_;
  std::size_t duplicates_ = 0;

  friend EmbeddingStore load_embeddings(const std::filesystem::path&);
};

// Plain-text word-vector file: "<vocab_size> <dimension>" header, then
// "word v1 ... vd" per line. Duplicate words: last one wins, counted.
EmbeddingStore load_embeddings(const std::filesystem::path& path);
void write_embeddings(const EmbeddingStore& store, const std::filesystem::path& path);

// Relative word frequencies p(w) for SIF weighting.
class FrequencyTable {
 public:
  FrequencyTable() = default;
  // Normalizes raw counts (or probabilities) so they sum to one.
  explicit FrequencyTable(const std::unordered_map<std::string, double>& raw);

  // p(w), or the smallest observed probability for unseen words.
  double probability(std::string_view word) const;
  double unseen_probability() const noexcept { return unseen_; }
  std::size_t size() const noexcept { return table_.size(); }

 private:
  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
  };
  std::unordered_map<std::string, double, Hash, std::equal_to<>> table_;
  double unseen_ = 1.0;
};

// Lines "word count-or-probability".
FrequencyTable load_frequencies(const std::filesystem::path& path);

// Fallback when no frequency file is given: relative frequencies of all
// tokens of all turns in the corpus.
FrequencyTable frequencies_from_corpus(const std::vector<Transcript>& corpus);

struct TurnVector {
  std::vector<double> vector;
  bool valid = false;  // false => zero vector, never paired

  bool operator==(const TurnVector&) const = default;
};

TurnVector invalid_turn_vector(std::size_t dimension);

inline constexpr double kDefaultSifA = 1e-3;

// Mean of the in-vocabulary token vectors.
TurnVector encode_bow(const std::vector<std::string>& tokens, const EmbeddingStore& store);

// (1/k) * sum of a/(a+p(t)) * vec(t) over the k in-vocabulary tokens.
// Common-component removal is a separate batch step.
TurnVector encode_sif(const std::vector<std::string>& tokens, const EmbeddingStore& store,
                      const FrequencyTable& freq, double a = kDefaultSifA);

inline double sif_weight(double p, double a) { return a / (a + p); }

// First principal direction of the valid vectors (uncentered). Power
// iteration from the normalized all-ones vector, tolerance 1e-10 on the
// direction change, at most 1000 iterations; the largest-magnitude
// coordinate is made positive. Throws ParameterError with < 2 valid vectors.
std::vector<double> first_principal_component(const std::vector<TurnVector>& vectors);

// Replaces each valid v with v - (u.v) u. Invalid vectors pass through.
void project_out(std::vector<TurnVector>& vectors, std::span<const double> u);

// first_principal_component + project_out. Returns the removed direction.
std::vector<double> remove_first_pc(std::vector<TurnVector>& vectors);

// a.b / (|a| |b|). Throws DegenerateInputError on a zero-norm input.
double cosine(std::span<const double> a, std::span<const double> b);

// Raw turn identity: turn_index is 0-based within the scene's turn list.
struct TurnKey {
  std::string subject_id;
  int scene_id = 0;
  std::size_t turn_index = 0;

  auto operator<=>(const TurnKey&) const = default;
  bool operator==(const TurnKey&) const = default;
};

std::string to_string(const TurnKey& key);

// Precomputed turn vectors from an external encoder. A `vector: null`
// entry marks the turn as explicitly invalid.
struct ExternalVectors {
  std::size_t dimension = 0;
  std::map<TurnKey, TurnVector> vectors;

  const TurnVector* find(const TurnKey& key) const;
};

ExternalVectors load_external_vectors(const std::filesystem::path& path);
ExternalVectors parse_external_vectors(std::string_view json_text, const std::string& source);
std::string serialize_external_vectors(const ExternalVectors& ext);

}  // namespace speechpanel
