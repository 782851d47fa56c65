#include "speechpanel/embed.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "speechpanel/errors.hpp"

namespace speechpanel {

namespace fs = std::filesystem;

EmbeddingStore::EmbeddingStore(std::size_t dimension) : dim_(dimension) {
  if (dimension == 0) throw ParameterError("embedding dimension must be positive");
}

bool EmbeddingStore::insert(std::string word, std::span<const double> vec) {
  if (vec.size() != dim_) {
    throw ParameterError("vector for '" + word + "' has length " + std::to_string(vec.size()) +
                         ", expected " + std::to_string(dim_));
  }
  auto it = index_.find(word);
  if (it != index_.end()) {
    std::copy(vec.begin(), vec.end(), data_.begin() + static_cast<std::ptrdiff_t>(it->second * dim_));
    ++duplicates_;
    return false;
  }
  index_.emplace(std::move(word), index_.size());
  data_.insert(data_.end(), vec.begin(), vec.end());
  return true;
}

std::span<const double> EmbeddingStore::find(std::string_view word) const {
  auto it = index_.find(word);
  if (it == index_.end()) return {};
  return {data_.data() + it->second * dim_, dim_};
}

std::vector<std::string> EmbeddingStore::words() const {
  std::vector<std::string> out;
  out.reserve(index_.size());
  for (const auto& [w, _] : index_) out.push_back(w);
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

EmbeddingStore load_embeddings(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };
  if (!next_line()) throw FormatError(path.string() + ": empty embedding file");
  const auto header = split_fields(line);
  double vocab = 0, dim = 0;
  if (header.size() != 2 || !parse_double(header[0], vocab) || !parse_double(header[1], dim) || dim < 1 ||
      dim != std::floor(dim)) {
    throw FormatError(path.string() + ":1: expected header '<vocab_size> <dimension>'");
  }
  EmbeddingStore store(static_cast<std::size_t>(dim));
  store.index_.reserve(static_cast<std::size_t>(vocab));
  store.data_.reserve(static_cast<std::size_t>(vocab) * store.dim_);
  std::vector<double> vec(store.dim_);
  while (next_line()) {
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    if (fields.size() != store.dim_ + 1) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected " +
                        std::to_string(store.dim_) + " values, found " + std::to_string(fields.size() - 1));
    }
    for (std::size_t k = 0; k < store.dim_; ++k) {
      if (!parse_double(fields[k + 1], vec[k])) {
        throw FormatError(path.string() + ":" + std::to_string(lineno) + ": bad number '" +
                          std::string(fields[k + 1]) + "'");
      }
    }
    store.insert(std::string(fields[0]), vec);
  }
  if (store.size() == 0) throw FormatError(path.string() + ": no word vectors");
  return store;
}

void write_embeddings(const EmbeddingStore& store, const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError(path.string() + ": cannot write");
  out << store.size() << ' ' << store.dimension() << '\n';
  char buf[32];
  for (const auto& w : store.words()) {
    out << w;
    for (double x : store.find(w)) {
      auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
      out << ' ' << std::string_view(buf, static_cast<std::size_t>(end - buf));
    }
    out << '\n';
  }
}

FrequencyTable::FrequencyTable(const std::unordered_map<std::string, double>& raw) {
  double total = 0.0;
  for (const auto& [w, c] : raw) {
    if (!(c > 0.0) || !std::isfinite(c)) throw ParameterError("frequency for '" + w + "' must be positive");
    total += c;
  }
  double smallest = 1.0;
  for (const auto& [w, c] : raw) {
    const double p = c / total;
    table_.emplace(w, p);
    smallest = std::min(smallest, p);
  }
  unseen_ = smallest;
}

double FrequencyTable::probability(std::string_view word) const {
  auto it = table_.find(word);
  return it == table_.end() ? unseen_ : it->second;
}

FrequencyTable load_frequencies(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError(path.string() + ": cannot open");
  std::unordered_map<std::string, double> raw;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto fields = split_fields(line);
    if (fields.empty()) continue;
    double v = 0;
    if (fields.size() != 2 || !parse_double(fields[1], v) || v <= 0) {
      throw FormatError(path.string() + ":" + std::to_string(lineno) + ": expected 'word positive-number'");
    }
    raw[std::string(fields[0])] += v;
  }
  if (raw.empty()) throw FormatError(path.string() + ": empty frequency file");
  return FrequencyTable(raw);
}

FrequencyTable frequencies_from_corpus(const std::vector<Transcript>& corpus) {
  std::unordered_map<std::string, double> raw;
  for (const auto& t : corpus) {
    for (const auto& s : t.scenes) {
      for (const auto& turn : s.turns) {
        for (const auto& tok : turn.tokens) raw[tok] += 1.0;
      }
    }
  }
  if (raw.empty()) throw DegenerateInputError("corpus has no tokens to derive frequencies from");
  return FrequencyTable(raw);
}

TurnVector invalid_turn_vector(std::size_t dimension) { return {std::vector<double>(dimension, 0.0), false}; }

TurnVector encode_bow(const std::vector<std::string>& tokens, const EmbeddingStore& store) {
  TurnVector out = invalid_turn_vector(store.dimension());
  std::size_t k = 0;
  for (const auto& t : tokens) {
    auto v = store.find(t);
    if (v.empty()) continue;
    for (std::size_t i = 0; i < v.size(); ++i) out.vector[i] += v[i];
    ++k;
  }
  if (k == 0) return out;
  for (double& x : out.vector) x /= static_cast<double>(k);
  out.valid = true;
  return out;
}

TurnVector encode_sif(const std::vector<std::string>& tokens, const EmbeddingStore& store,
                      const FrequencyTable& freq, double a) {
  if (!(a > 0.0)) throw ParameterError("SIF parameter a must be positive");
  TurnVector out = invalid_turn_vector(store.dimension());
  std::size_t k = 0;
  for (const auto& t : tokens) {
    auto v = store.find(t);
    if (v.empty()) continue;
    const double w = sif_weight(freq.probability(t), a);
    for (std::size_t i = 0; i < v.size(); ++i) out.vector[i] += w * v[i];
    ++k;
  }
  if (k == 0) return out;
  for (double& x : out.vector) x /= static_cast<double>(k);
  out.valid = true;
  return out;
}

namespace {

double norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// y = G x where G = sum over rows r of r r^T, never formed.
void gram_apply(const std::vector<const std::vector<double>*>& rows, const std::vector<double>& x,
                std::vector<double>& y) {
  std::fill(y.begin(), y.end(), 0.0);
  for (const auto* r : rows) {
    double dot = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) dot += (*r)[i] * x[i];
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += dot * (*r)[i];
  }
}

}  // namespace

std::vector<double> first_principal_component(const std::vector<TurnVector>& vectors) {
  std::vector<const std::vector<double>*> rows;
  for (const auto& v : vectors) {
    if (v.valid) rows.push_back(&v.vector);
  }
  if (rows.size() < 2) {
    throw ParameterError("first principal component needs at least 2 valid vectors, got " +
                         std::to_string(rows.size()));
  }
  const std::size_t d = rows.front()->size();
  double energy = 0.0;
  for (const auto* r : rows) energy += norm(*r) * norm(*r);

  std::vector<double> u(d), next(d);
  // The all-ones start can be orthogonal to the dominant direction; the unit
  // axes are tried next, in order.
  for (std::size_t start = 0; start <= d; ++start) {
    if (start == 0) {
      std::fill(u.begin(), u.end(), 1.0 / std::sqrt(static_cast<double>(d)));
    } else {
      std::fill(u.begin(), u.end(), 0.0);
      u[start - 1] = 1.0;
    }
    bool degenerate = false;
    for (int iter = 0; iter < 1000; ++iter) {
      gram_apply(rows, u, next);
      const double n = norm(next);
      if (!(n > 1e-14 * energy)) {
        degenerate = true;
        break;
      }
      double change = 0.0;
      for (std::size_t i = 0; i < d; ++i) {
        next[i] /= n;
        change += (next[i] - u[i]) * (next[i] - u[i]);
      }
      u.swap(next);
      if (std::sqrt(change) < 1e-10) break;
    }
    if (!degenerate) break;
    if (start == d) throw DegenerateInputError("all valid vectors are zero; no principal direction");
  }
  std::size_t arg = 0;
  for (std::size_t i = 1; i < d; ++i) {
    if (std::abs(u[i]) > std::abs(u[arg])) arg = i;
  }
  if (u[arg] < 0) {
    for (double& x : u) x = -x;
  }
  return u;
}

void project_out(std::vector<TurnVector>& vectors, std::span<const double> u) {
  for (auto& v : vectors) {
    if (!v.valid) continue;
    double dot = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) dot += u[i] * v.vector[i];
    for (std::size_t i = 0; i < u.size(); ++i) v.vector[i] -= dot * u[i];
  }
}

std::vector<double> remove_first_pc(std::vector<TurnVector>& vectors) {
  auto u = first_principal_component(vectors);
  project_out(vectors, u);
  return u;
}

double cosine(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw ParameterError("cosine of vectors with different lengths");
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  if (!(aa > 0.0) || !(bb > 0.0)) throw DegenerateInputError("cosine of a zero-norm vector");
  const double c = ab / (std::sqrt(aa) * std::sqrt(bb));
  return std::clamp(c, -1.0, 1.0);
}

std::string to_string(const TurnKey& key) {
  return "(" + key.subject_id + ", scene " + std::to_string(key.scene_id) + ", turn " +
         std::to_string(key.turn_index) + ")";
}

const TurnVector* ExternalVectors::find(const TurnKey& key) const {
  auto it = vectors.find(key);
  return it == vectors.end() ? nullptr : &it->second;
}

ExternalVectors parse_external_vectors(std::string_view json_text, const std::string& source) {
  using nlohmann::json;
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(source + ": " + e.what());
  }
  auto fail = [&](const std::string& what) -> void { throw FormatError(source + ": " + what); };
  if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("vectors")) {
    fail("expected an object with 'dimension' and 'vectors'");
  }
  ExternalVectors ext;
  if (!doc["dimension"].is_number_unsigned() || doc["dimension"].get<std::size_t>() == 0) {
    fail("'dimension' must be a positive integer");
  }
  ext.dimension = doc["dimension"].get<std::size_t>();
  const json& list = doc["vectors"];
  if (!list.is_array()) fail("'vectors' must be an array");
  for (std::size_t i = 0; i < list.size(); ++i) {
    const json& e = list[i];
    const std::string where = "vectors[" + std::to_string(i) + "]";
    if (!e.is_object()) fail(where + ": expected an object");
    for (const auto& [k, _] : e.items()) {
      if (k != "subject_id" && k != "scene_id" && k != "turn_index" && k != "vector") {
        fail(where + ": unknown field '" + k + "'");
      }
    }
    if (!e.contains("subject_id") || !e["subject_id"].is_string()) fail(where + ": missing subject_id");
    if (!e.contains("scene_id") || !e["scene_id"].is_number_integer()) fail(where + ": missing scene_id");
    if (!e.contains("turn_index") || !e["turn_index"].is_number_unsigned()) fail(where + ": missing turn_index");
    if (!e.contains("vector")) fail(where + ": missing vector");
    TurnKey key{e["subject_id"].get<std::string>(), e["scene_id"].get<int>(), e["turn_index"].get<std::size_t>()};
    TurnVector tv = invalid_turn_vector(ext.dimension);
    const json& v = e["vector"];
    if (!v.is_null()) {
      if (!v.is_array() || v.size() != ext.dimension) {
        fail(where + ": vector must have " + std::to_string(ext.dimension) + " entries");
      }
      double sq = 0.0;
      for (std::size_t k = 0; k < ext.dimension; ++k) {
        if (!v[k].is_number()) fail(where + ": non-numeric vector entry");
        tv.vector[k] = v[k].get<double>();
        sq += tv.vector[k] * tv.vector[k];
      }
      // A zero vector carries no direction; treat it like an explicit null.
      tv.valid = sq > 0.0;
      if (!tv.valid) std::fill(tv.vector.begin(), tv.vector.end(), 0.0);
    }
    if (!ext.vectors.emplace(key, std::move(tv)).second) fail(where + ": duplicate key " + to_string(key));
  }
  return ext;
}

ExternalVectors load_external_vectors(const fs::path& path) {
  return parse_external_vectors(read_file(path), path.string());
}

std::string serialize_external_vectors(const ExternalVectors& ext) {
  using nlohmann::json;
  json doc;
  doc["dimension"] = ext.dimension;
  doc["vectors"] = json::array();
  for (const auto& [key, tv] : ext.vectors) {
    json e;
    e["subject_id"] = key.subject_id;
    e["scene_id"] = key.scene_id;
    e["turn_index"] = key.turn_index;
    e["vector"] = tv.valid ? json(tv.vector) : json(nullptr);
    doc["vectors"].push_back(std::move(e));
  }
  return doc.dump() + "\n";
}

}  // namespace speechpanel
