#include <algorithm>
#include <cmath>
#include <numeric>

#include "speechpanel/errors.hpp"
#include "speechpanel/learn.hpp"

namespace speechpanel {

RegressionMetrics metrics_regress(const Vector& y, const Vector& predicted) {
  if (y.size() != predicted.size()) throw ParameterError("target and prediction lengths differ");
  if (y.size() < 2) throw DegenerateInputError("regression metrics need at least 2 points");
  const double n = static_cast<double>(y.size());
  const Vector dy = y.array() - y.mean();
  const Vector dp = predicted.array() - predicted.mean();
  const double syy = dy.squaredNorm();
  const double spp = dp.squaredNorm();
  if (!(syy > 0.0) || !(spp > 0.0)) throw DegenerateInputError("Pearson r is undefined for a constant series");
  RegressionMetrics m;
  m.r = dy.dot(dp) / std::sqrt(syy * spp);
  const Vector err = predicted - y;
  m.mae = err.cwiseAbs().sum() / n;
  m.rmse = std::sqrt(err.squaredNorm() / n);
  return m;
}

namespace {

void check_scored(const Labels& labels, const std::vector<double>& scores) {
  if (labels.size() != scores.size()) throw ParameterError("label and score counts differ");
  std::size_t pos = 0;
  for (int l : labels) {
    if (l != 0 && l != 1) throw ParameterError("labels must be 0 or 1");
    pos += static_cast<std::size_t>(l);
  }
  if (pos == 0 || pos == labels.size()) throw DegenerateInputError("ROC needs both classes present");
}

}  // namespace

double auc_rank(const Labels& labels, const std::vector<double>& scores) {
  check_scored(labels, scores);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  // Midranks (1-based) over tied groups.
  double pos_rank_sum = 0.0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && scores[order[j]] == scores[order[i]]) ++j;
    const double midrank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        pos_rank_sum += midrank;
        ++pos;
      }
    }
    i = j;
  }
  const double np = static_cast<double>(pos);
  const double nn = static_cast<double>(n - pos);
  return (pos_rank_sum - np * (np + 1.0) / 2.0) / (np * nn);
}

double auc_trapezoid(const std::vector<RocPoint>& points) {
  double area = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    area += (points[i].fpr - points[i - 1].fpr) * (points[i].tpr + points[i - 1].tpr) / 2.0;
  }
  return area;
}

RocCurve roc_auc(const Labels& labels, const std::vector<double>& scores) {
  check_scored(labels, scores);
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
  std::size_t npos = 0;
  for (int l : labels) npos += static_cast<std::size_t>(l);
  const double P = static_cast<double>(npos);
  const double N = static_cast<double>(n - npos);

  RocCurve roc;
  roc.points.push_back({0.0, 0.0, std::nullopt});
  std::size_t tp = 0, fp = 0;
  for (std::size_t i = 0; i < n;) {
    const double threshold = scores[order[i]];
    while (i < n && scores[order[i]] == threshold) {
      if (labels[order[i]] == 1) {
        ++tp;
      } else {
        ++fp;
      }
      ++i;
    }
    roc.points.push_back({static_cast<double>(fp) / N, static_cast<double>(tp) / P, threshold});
  }
  roc.auc = auc_rank(labels, scores);
  return roc;
}

Confusion confusion(const Labels& truth, const Labels& predicted) {
  if (truth.size() != predicted.size()) throw ParameterError("truth and prediction counts differ");
  Confusion c;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if ((truth[i] != 0 && truth[i] != 1) || (predicted[i] != 0 && predicted[i] != 1)) {
      throw ParameterError("labels must be 0 or 1");
    }
    ++c.counts[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  }
  return c;
}

}  // namespace speechpanel
