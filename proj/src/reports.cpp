#include "speechpanel/reports.hpp"

#include <algorithm>

#include "speechpanel/errors.hpp"
#include "speechpanel/io.hpp"

namespace speechpanel {

using nlohmann::json;

void Provenance::add_input(const std::filesystem::path& path) {
  if (std::filesystem::is_regular_file(path)) {
    input_digests[path.string()] = sha256_file(path);
    return;
  }
  // Directory inputs hash the sorted (relative name, file digest) list.
  std::vector<std::pair<std::string, std::string>> entries;
  for (const auto& e : std::filesystem::recursive_directory_iterator(path)) {
    if (e.is_regular_file()) {
      entries.emplace_back(std::filesystem::relative(e.path(), path).generic_string(), sha256_file(e.path()));
    }
  }
  std::sort(entries.begin(), entries.end());
  std::string manifest;
  for (const auto& [name, digest] : entries) manifest += name + " " + digest + "\n";
  input_digests[path.string()] = sha256_hex(manifest);
}

json Provenance::to_json() const {
  return {{"tool", kToolName}, {"version", kToolVersion}, {"command", command}, {"flags", flags},
          {"inputs", input_digests}};
}

namespace {

template <typename T>
T field(const json& doc, const char* key, const std::string& source) {
  auto it = doc.find(key);
  if (it == doc.end()) throw FormatError(source + ": missing field '" + std::string(key) + "'");
  try {
    return it->get<T>();
  } catch (const json::exception& e) {
    throw FormatError(source + ": field '" + std::string(key) + "': " + e.what());
  }
}

}  // namespace

json selection_to_json(const SelectionFile& sel, const Provenance& prov) {
  json doc;
  doc["provenance"] = prov.to_json();
  doc["target"] = sel.target;
  doc["max_features"] = sel.max_features;
  doc["min_improvement"] = sel.min_improvement;
  doc["excluded_subjects"] = sel.excluded_subjects;
  doc["baseline_rmse"] = sel.result.baseline_rmse;
  doc["selected"] = json::array();
  for (const auto& s : sel.result.steps) {
    doc["selected"].push_back({{"rank", s.rank}, {"feature", s.feature}, {"column", s.column}, {"loocv_rmse", s.loocv_rmse}});
  }
  return doc;
}

SelectionFile selection_from_json(const json& doc, const std::string& source) {
  SelectionFile sel;
  sel.target = field<std::string>(doc, "target", source);
  sel.max_features = field<std::size_t>(doc, "max_features", source);
  sel.min_improvement = field<double>(doc, "min_improvement", source);
  sel.excluded_subjects = field<std::vector<std::string>>(doc, "excluded_subjects", source);
  sel.result.baseline_rmse = field<double>(doc, "baseline_rmse", source);
  const json steps = field<json>(doc, "selected", source);
  if (!steps.is_array()) throw FormatError(source + ": 'selected' must be an array");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    SelectionStep s;
    s.rank = field<std::size_t>(steps[i], "rank", source);
    s.feature = field<std::string>(steps[i], "feature", source);
    s.column = field<std::size_t>(steps[i], "column", source);
    s.loocv_rmse = field<double>(steps[i], "loocv_rmse", source);
    if (s.rank != i + 1) throw FormatError(source + ": selection ranks must run 1..k in order");
    sel.result.steps.push_back(std::move(s));
  }
  return sel;
}

json read_report(const std::filesystem::path& path) {
  try {
    return json::parse(read_text_file(path));
  } catch (const json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

SelectionFile read_selection(const std::filesystem::path& path) {
  return selection_from_json(read_report(path), path.string());
}

json regression_to_json(const RegressionReport& r, const Provenance& prov) {
  json doc;
  doc["provenance"] = prov.to_json();
  doc["features"] = r.features;
  doc["nested"] = r.nested;
  doc["metrics"] = {{"r", r.metrics.r}, {"mae", r.metrics.mae}, {"rmse", r.metrics.rmse}};
  doc["predictions"] = json::array();
  for (std::size_t i = 0; i < r.subject_ids.size(); ++i) {
    const auto k = static_cast<Eigen::Index>(i);
    doc["predictions"].push_back({{"subject_id", r.subject_ids[i]}, {"actual", r.actual(k)}, {"predicted", r.predicted(k)}});
  }
  return doc;
}

RegressionReport regression_from_json(const json& doc, const std::string& source) {
  RegressionReport r;
  r.features = field<std::vector<std::string>>(doc, "features", source);
  r.nested = field<bool>(doc, "nested", source);
  const json m = field<json>(doc, "metrics", source);
  r.metrics = {field<double>(m, "r", source), field<double>(m, "mae", source), field<double>(m, "rmse", source)};
  const json preds = field<json>(doc, "predictions", source);
  r.actual.resize(static_cast<Eigen::Index>(preds.size()));
  r.predicted.resize(static_cast<Eigen::Index>(preds.size()));
  for (std::size_t i = 0; i < preds.size(); ++i) {
    r.subject_ids.push_back(field<std::string>(preds[i], "subject_id", source));
    r.actual(static_cast<Eigen::Index>(i)) = field<double>(preds[i], "actual", source);
    r.predicted(static_cast<Eigen::Index>(i)) = field<double>(preds[i], "predicted", source);
  }
  return r;
}

json classification_to_json(const ClassificationReport& r, const Provenance& prov) {
  json doc;
  doc["provenance"] = prov.to_json();
  doc["task"] = r.task;
  doc["model"] = r.model;
  doc["positive_class"] = r.positive_class;
  doc["top"] = r.top;
  doc["nested"] = r.nested;
  doc["features"] = r.features;
  const auto& c = r.confusion.counts;
  doc["confusion"] = {{"true_positive", c[1][1]},
                      {"false_negative", c[1][0]},
                      {"false_positive", c[0][1]},
                      {"true_negative", c[0][0]},
                      {"n", r.confusion.total()}};
  doc["auc"] = r.roc.auc;
  doc["roc"] = json::array();
  for (const auto& p : r.roc.points) {
    doc["roc"].push_back({{"fpr", p.fpr}, {"tpr", p.tpr}, {"threshold", p.threshold ? json(*p.threshold) : json(nullptr)}});
  }
  doc["predictions"] = json::array();
  for (std::size_t i = 0; i < r.subject_ids.size(); ++i) {
    doc["predictions"].push_back({{"subject_id", r.subject_ids[i]},
                                  {"label", r.labels[i]},
                                  {"score", r.result.scores[i]},
                                  {"predicted", r.result.predicted[i]}});
  }
  doc["warnings"] = r.result.warnings;
  return doc;
}

ClassificationReport classification_from_json(const json& doc, const std::string& source) {
  ClassificationReport r;
  r.task = field<std::string>(doc, "task", source);
  r.model = field<std::string>(doc, "model", source);
  r.positive_class = field<std::string>(doc, "positive_class", source);
  r.top = field<std::size_t>(doc, "top", source);
  r.nested = field<bool>(doc, "nested", source);
  r.features = field<std::vector<std::string>>(doc, "features", source);
  const json c = field<json>(doc, "confusion", source);
  r.confusion.counts[1][1] = field<std::size_t>(c, "true_positive", source);
  r.confusion.counts[1][0] = field<std::size_t>(c, "false_negative", source);
  r.confusion.counts[0][1] = field<std::size_t>(c, "false_positive", source);
  r.confusion.counts[0][0] = field<std::size_t>(c, "true_negative", source);
  r.roc.auc = field<double>(doc, "auc", source);
  for (const auto& p : field<json>(doc, "roc", source)) {
    RocPoint pt{field<double>(p, "fpr", source), field<double>(p, "tpr", source), std::nullopt};
    if (!p.at("threshold").is_null()) pt.threshold = p.at("threshold").get<double>();
    r.roc.points.push_back(pt);
  }
  for (const auto& p : field<json>(doc, "predictions", source)) {
    r.subject_ids.push_back(field<std::string>(p, "subject_id", source));
    r.labels.push_back(field<int>(p, "label", source));
    r.result.scores.push_back(field<double>(p, "score", source));
    r.result.predicted.push_back(field<int>(p, "predicted", source));
  }
  r.result.warnings = field<std::vector<std::string>>(doc, "warnings", source);
  return r;
}

}  // namespace speechpanel
