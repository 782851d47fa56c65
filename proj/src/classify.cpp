#include <cmath>
#include <numbers>

#include "lsq.hpp"
#include "speechpanel/errors.hpp"

namespace speechpanel {

Standardizer Standardizer::fit(const Matrix& X) {
  Standardizer s;
  const auto n = static_cast<double>(X.rows());
  s.mean = X.colwise().mean().transpose();
  s.scale.resize(X.cols());
  for (Eigen::Index j = 0; j < X.cols(); ++j) {
    const double ss = (X.col(j).array() - s.mean(j)).square().sum();
    const double sd = n > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    s.scale(j) = sd > 1e-12 * (std::abs(s.mean(j)) + 1.0) ? sd : 1.0;
  }
  return s;
}

Matrix Standardizer::apply(const Matrix& X) const {
  return (X.rowwise() - mean.transpose()).array().rowwise() / scale.transpose().array();
}

Vector Standardizer::apply_row(const Eigen::Ref<const Vector>& row) const {
  return (row - mean).cwiseQuotient(scale);
}

namespace {

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void check_binary(const Labels& labels, Eigen::Index rows) {
  if (static_cast<Eigen::Index>(labels.size()) != rows) throw ParameterError("label count does not match X");
  for (int l : labels) {
    if (l != 0 && l != 1) throw ParameterError("labels must be 0 or 1");
  }
}

std::array<std::size_t, 2> class_counts(const Labels& labels) {
  std::array<std::size_t, 2> c{0, 0};
  for (int l : labels) ++c[static_cast<std::size_t>(l)];
  return c;
}

Labels drop_label(const Labels& labels, std::size_t i) {
  Labels out;
  out.reserve(labels.size() - 1);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    if (k != i) out.push_back(labels[k]);
  }
  return out;
}

}  // namespace

double logistic_objective(const Matrix& Z, const Labels& labels, double intercept, const Vector& weights,
                          double ridge) {
  const Vector eta = (Z * weights).array() + intercept;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    ll += labels[static_cast<std::size_t>(i)] * eta(i) - softplus(eta(i));
  }
  return ll - 0.5 * ridge * weights.squaredNorm();
}

double LogisticModel::probability(const Eigen::Ref<const Vector>& row) const {
  return sigmoid(intercept + weights.dot(standardizer.apply_row(row)));
}

LogisticModel logistic_fit(const Matrix& X, const Labels& labels, double ridge) {
  check_binary(labels, X.rows());
  const auto counts = class_counts(labels);
  if (counts[0] == 0 || counts[1] == 0) throw FitError("logistic regression needs both classes present");
  if (ridge < 0) throw ParameterError("ridge must be non-negative");

  LogisticModel m;
  m.standardizer = Standardizer::fit(X);
  const Matrix Z = m.standardizer.apply(X);
  const Eigen::Index n = Z.rows();
  const Eigen::Index p = Z.cols();

  // Design with a leading ones column; theta = [intercept, w].
  Matrix D(n, p + 1);
  D.col(0).setOnes();
  D.rightCols(p) = Z;
  Vector theta = Vector::Zero(p + 1);
  Vector yv(n);
  for (Eigen::Index i = 0; i < n; ++i) yv(i) = labels[static_cast<std::size_t>(i)];

  auto objective = [&](const Vector& t) { return logistic_objective(Z, labels, t(0), t.tail(p), ridge); };
  double current = objective(theta);

  for (int iter = 1; iter <= 100; ++iter) {
    m.iterations = iter;
    const Vector eta = D * theta;
    Vector prob(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      prob(i) = sigmoid(eta(i));
      w(i) = prob(i) * (1.0 - prob(i));
    }
    Vector grad = D.transpose() * (yv - prob);
    grad.tail(p) -= ridge * theta.tail(p);
    Matrix H = D.transpose() * w.asDiagonal() * D;
    H.diagonal().tail(p).array() += ridge;
    Vector delta = H.ldlt().solve(grad);
    if (!delta.allFinite()) break;

    double step = 1.0;
    Vector next = theta + delta;
    double value = objective(next);
    while (!(value >= current) && step > 1e-10) {
      step *= 0.5;
      next = theta + step * delta;
      value = objective(next);
    }
    if (!(value >= current)) {
      // No ascent along the Newton direction: already at the optimum to
      // working precision.
      m.converged = true;
      break;
    }
    const double change = (step * delta).cwiseAbs().maxCoeff();
    theta = next;
    current = value;
    if (change < 1e-8) {
      m.converged = true;
      break;
    }
  }
  m.intercept = theta(0);
  m.weights = theta.tail(p);
  return m;
}

double NaiveBayesModel::probability(const Eigen::Ref<const Vector>& row) const {
  std::array<double, 2> lp{};
  for (std::size_t c = 0; c < 2; ++c) {
    double acc = log_prior[c];
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      const double v = variance[c](j);
      const double d = row(j) - mean[c](j);
      acc += -0.5 * std::log(2.0 * std::numbers::pi * v) - d * d / (2.0 * v);
    }
    lp[c] = acc;
  }
  return sigmoid(lp[1] - lp[0]);
}

NaiveBayesModel nb_fit(const Matrix& X, const Labels& labels) {
  check_binary(labels, X.rows());
  const auto counts = class_counts(labels);
  if (counts[0] < 2 || counts[1] < 2) {
    throw FitError("naive Bayes needs at least 2 samples per class (have " + std::to_string(counts[0]) + " and " +
                   std::to_string(counts[1]) + ")");
  }
  const Eigen::Index p = X.cols();
  const auto n = static_cast<double>(X.rows());
  NaiveBayesModel m;
  Vector floor(p);
  const Vector global_mean = X.colwise().mean().transpose();
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var = (X.col(j).array() - global_mean(j)).square().sum() / (n - 1.0);
    floor(j) = 1e-9 * (var + 1e-12);
  }
  for (std::size_t c = 0; c < 2; ++c) {
    const auto nc = static_cast<double>(counts[c]);
    m.log_prior[c] = std::log(nc / n);
    m.mean[c] = Vector::Zero(p);
    m.variance[c] = Vector::Zero(p);
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == static_cast<int>(c)) m.mean[c] += X.row(i).transpose();
    }
    m.mean[c] /= nc;
    for (Eigen::Index i = 0; i < X.rows(); ++i) {
      if (labels[static_cast<std::size_t>(i)] == static_cast<int>(c)) {
        m.variance[c] += (X.row(i).transpose() - m.mean[c]).cwiseAbs2();
      }
    }
    m.variance[c] /= (nc - 1.0);
    m.variance[c] = m.variance[c].cwiseMax(floor);
  }
  return m;
}

namespace {

// Fits `kind` on the training rows and scores the held-out row.
double fold_score(const Matrix& train, const Labels& train_labels, const Eigen::Ref<const Vector>& held_out,
                  ModelKind kind, double ridge, std::string* warning) {
  if (kind == ModelKind::Logistic) {
    const auto model = logistic_fit(train, train_labels, ridge);
    if (!model.converged && warning) *warning = "logistic regression did not converge in 100 iterations";
    return model.probability(held_out);
  }
  return nb_fit(train, train_labels).probability(held_out);
}

void check_folds(const Labels& labels) {
  const auto counts = class_counts(labels);
  for (std::size_t c = 0; c < 2; ++c) {
    if (counts[c] < 2) {
      // Holding out the only member of a class leaves a one-class fold.
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i] == static_cast<int>(c)) {
          throw FitError("fold " + std::to_string(i) + ": training set has no class " + std::to_string(c));
        }
      }
      throw FitError("class " + std::to_string(c) + " is absent from every training fold");
    }
  }
}

}  // namespace

ClassificationResult loocv_classify(const Matrix& X, const Labels& labels, ModelKind kind, double ridge,
                                    Execution exec) {
  check_binary(labels, X.rows());
  if (X.rows() < 4) throw FitError("leave-one-out classification needs at least 4 subjects");
  check_folds(labels);
  const auto n = static_cast<std::size_t>(X.rows());
  ClassificationResult r;
  r.scores.resize(n);
  std::vector<std::string> warnings(n);
  detail::for_each_index(
      static_cast<long>(n), exec,
      [&](long i) {
        const auto ui = static_cast<std::size_t>(i);
        r.scores[ui] = fold_score(detail::drop_row(X, i), drop_label(labels, ui), X.row(i).transpose(), kind, ridge,
                                  &warnings[ui]);
      },
      [](long i) { return "fold " + std::to_string(i); });
  for (std::size_t i = 0; i < n; ++i) {
    r.predicted.push_back(r.scores[i] >= 0.5 ? 1 : 0);
    if (!warnings[i].empty()) r.warnings.push_back("fold " + std::to_string(i) + ": " + warnings[i]);
  }
  return r;
}

namespace {

std::vector<std::string> column_names(Eigen::Index p) {
  std::vector<std::string> names;
  for (Eigen::Index j = 0; j < p; ++j) names.push_back(std::to_string(j));
  return names;
}

Matrix take_columns(const Matrix& X, const SelectionResult& sel) {
  Matrix out(X.rows(), static_cast<Eigen::Index>(sel.steps.size()));
  for (std::size_t k = 0; k < sel.steps.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = X.col(static_cast<Eigen::Index>(sel.steps[k].column));
  }
  return out;
}

}  // namespace

Vector loocv_nested_regress(const Matrix& X, const Vector& y, std::size_t max_features, double min_improvement,
                            Execution exec) {
  const Eigen::Index n = X.rows();
  if (n < 4) throw FitError("nested leave-one-out regression needs at least 4 subjects");
  const auto names = column_names(X.cols());
  Vector pred(n);
  detail::for_each_index(
      static_cast<long>(n), exec,
      [&](long i) {
        const Matrix train = detail::drop_row(X, i);
        const Vector ty = detail::drop_row(y, i);
        const auto sel = stepwise_select(train, ty, names, max_features, min_improvement, Execution::Serial);
        const Matrix held = take_columns(X.row(i), sel);
        const auto model = ols_fit(take_columns(train, sel), ty, 0.0);
        pred(i) = model.predict(held.row(0).transpose());
      },
      [](long i) { return "fold " + std::to_string(i); });
  return pred;
}

ClassificationResult loocv_nested_classify(const Matrix& X, const Vector& target, const Labels& labels,
                                           ModelKind kind, std::size_t max_features, double min_improvement,
                                           double ridge, Execution exec) {
  check_binary(labels, X.rows());
  if (X.rows() < 4) throw FitError("leave-one-out classification needs at least 4 subjects");
  if (target.size() != X.rows()) throw ParameterError("target length does not match X");
  check_folds(labels);
  const auto n = static_cast<std::size_t>(X.rows());
  const auto names = column_names(X.cols());
  ClassificationResult r;
  r.scores.resize(n);
  std::vector<std::string> warnings(n);
  detail::for_each_index(
      static_cast<long>(n), exec,
      [&](long i) {
        const auto ui = static_cast<std::size_t>(i);
        const Matrix train = detail::drop_row(X, i);
        const Labels train_labels = drop_label(labels, ui);
        const auto sel =
            stepwise_select(train, detail::drop_row(target, i), names, max_features, min_improvement, Execution::Serial);
        if (sel.steps.empty()) {
          const auto c = class_counts(train_labels);
          r.scores[ui] = static_cast<double>(c[1]) / static_cast<double>(c[0] + c[1]);
          warnings[ui] = "no features selected; scored by class prior";
          return;
        }
        const Matrix held = take_columns(X.row(i), sel);
        r.scores[ui] =
            fold_score(take_columns(train, sel), train_labels, held.row(0).transpose(), kind, ridge, &warnings[ui]);
      },
      [](long i) { return "fold " + std::to_string(i); });
  for (std::size_t i = 0; i < n; ++i) {
    r.predicted.push_back(r.scores[i] >= 0.5 ? 1 : 0);
    if (!warnings[i].empty()) r.warnings.push_back("fold " + std::to_string(i) + ": " + warnings[i]);
  }
  return r;
}

}  // namespace speechpanel
