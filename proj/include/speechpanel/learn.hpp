#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "speechpanel/parallel.hpp"
#include "speechpanel/pipeline.hpp"

namespace speechpanel {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Labels = std::vector<int>;  // 0 or 1

// Subjects x features, in canonical feature order.
struct Dataset {
  Matrix X;
  Vector y;  // regression target, or 0/1 labels stored as reals
  std::vector<std::string> feature_names;
  std::vector<std::string> subject_ids;
};

// Rows with an sspa_overall value. Subjects without it are listed in
// `excluded` (when given) and left out.
Dataset regression_dataset(const std::vector<FeaturePanel>& panels, std::vector<std::string>* excluded = nullptr);

// Keeps only `columns`, in the order given. Throws Error naming every
// column absent from the dataset.
Dataset select_columns(const Dataset& data, const std::vector<std::string>& columns);

// ----- linear regression ---------------------------------------------------

struct LinearModel {
  Vector weights;
  double intercept = 0;

  double predict(const Eigen::Ref<const Vector>& row) const { return intercept + weights.dot(row); }
};

// Minimizes |y - Xw - b|^2 + ridge |w|^2 (intercept unpenalized) with a
// column-pivoted QR of the augmented design. ridge = 0 on a rank-deficient
// design throws FitError.
LinearModel ols_fit(const Matrix& X, const Vector& y, double ridge = 0.0);

// Leave-one-out predictions by refitting n times.
Vector loocv_regress(const Matrix& X, const Vector& y, double ridge = 0.0, Execution exec = Execution::Parallel);

// Same predictions from one fit: y_i - e_i / (1 - h_ii) with h the hat
// matrix of the penalized least-squares smoother.
Vector loocv_press(const Matrix& X, const Vector& y, double ridge = 0.0);

// ----- stepwise selection --------------------------------------------------

inline constexpr double kDefaultMinImprovement = 1e-4;

struct SelectionStep {
  std::string feature;
  std::size_t column = 0;
  std::size_t rank = 0;  // 1-based insertion rank
  double loocv_rmse = 0;
};

struct SelectionResult {
  double baseline_rmse = 0;  // intercept-only model
  std::vector<SelectionStep> steps;

  std::vector<std::string> top(std::size_t k) const;
};

// Greedy forward selection scored by LOOCV RMSE of OLS. Stops when the best
// candidate improves RMSE by less than `min_improvement` or after
// `max_features`. Ties go to the earlier column.
SelectionResult stepwise_select(const Matrix& X, const Vector& y, const std::vector<std::string>& names,
                                std::size_t max_features, double min_improvement = kDefaultMinImprovement,
                                Execution exec = Execution::Parallel);

// ----- classifiers ---------------------------------------------------------

inline constexpr double kDefaultLogisticRidge = 1e-8;

struct Standardizer {
  Vector mean;
  Vector scale;  // sample stdev, 1 for constant columns

  static Standardizer fit(const Matrix& X);
  Matrix apply(const Matrix& X) const;
  Vector apply_row(const Eigen::Ref<const Vector>& row) const;
};

struct LogisticModel {
  Standardizer standardizer;
  Vector weights;  // on standardized features
  double intercept = 0;
  int iterations = 0;
  bool converged = false;

  double probability(const Eigen::Ref<const Vector>& row) const;
};

// Sum of log-likelihood minus ridge/2 |w|^2 on already standardized Z.
double logistic_objective(const Matrix& Z, const Labels& labels, double intercept, const Vector& weights,
                          double ridge);

// Ridge-penalized maximum likelihood by IRLS (Newton with step halving).
// Converged when the largest parameter change is below 1e-8; otherwise stops
// after 100 iterations with converged = false.
LogisticModel logistic_fit(const Matrix& X, const Labels& labels, double ridge = kDefaultLogisticRidge);

struct NaiveBayesModel {
  std::array<double, 2> log_prior{};
  std::array<Vector, 2> mean;
  std::array<Vector, 2> variance;

  double probability(const Eigen::Ref<const Vector>& row) const;  // P(class 1 | row)
};

// Per-class Gaussian with sample (n-1) variances, floored at
// 1e-9 * (column variance + 1e-12). Each class needs at least 2 rows.
NaiveBayesModel nb_fit(const Matrix& X, const Labels& labels);

enum class ModelKind { Logistic, NaiveBayes };

struct ClassificationResult {
  std::vector<double> scores;  // P(positive) from the fold that held the subject out
  Labels predicted;            // score >= 0.5
  std::vector<std::string> warnings;
};

ClassificationResult loocv_classify(const Matrix& X, const Labels& labels, ModelKind kind,
                                    double ridge = kDefaultLogisticRidge, Execution exec = Execution::Parallel);

// Selection repeated inside every fold on that fold's training rows.
Vector loocv_nested_regress(const Matrix& X, const Vector& y, std::size_t max_features, double min_improvement,
                            Execution exec = Execution::Parallel);
ClassificationResult loocv_nested_classify(const Matrix& X, const Vector& target, const Labels& labels,
                                           ModelKind kind, std::size_t max_features, double min_improvement,
                                           double ridge = kDefaultLogisticRidge, Execution exec = Execution::Parallel);

// ----- metrics -------------------------------------------------------------

struct RegressionMetrics {
  double r = 0;
  double mae = 0;
  double rmse = 0;
};

RegressionMetrics metrics_regress(const Vector& y, const Vector& predicted);

struct RocPoint {
  double fpr = 0;
  double tpr = 0;
  std::optional<double> threshold;  // empty for the (0, 0) start
};

struct RocCurve {
  std::vector<RocPoint> points;
  double auc = 0;
};

// Mann-Whitney AUC with ties counted one half.
double auc_rank(const Labels& labels, const std::vector<double>& scores);
double auc_trapezoid(const std::vector<RocPoint>& points);

// Points swept over each distinct score (predict positive when score >=
// threshold), from (0, 0) to (1, 1). AUC by the rank statistic.
RocCurve roc_auc(const Labels& labels, const std::vector<double>& scores);

// counts[true][predicted]
struct Confusion {
  std::array<std::array<std::size_t, 2>, 2> counts{};

  std::size_t total() const { return counts[0][0] + counts[0][1] + counts[1][0] + counts[1][1]; }
};

Confusion confusion(const Labels& truth, const Labels& predicted);

}  // namespace speechpanel
