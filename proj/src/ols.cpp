#include <algorithm>
#include <cmath>

#include "lsq.hpp"
#include "speechpanel/errors.hpp"

namespace speechpanel {

Dataset regression_dataset(const std::vector<FeaturePanel>& panels, std::vector<std::string>* excluded) {
  Dataset d;
  if (!panels.empty()) d.feature_names = panels.front().names;
  std::vector<const FeaturePanel*> rows;
  for (const auto& p : panels) {
    if (p.names != d.feature_names) throw FormatError("subject " + p.subject_id + ": inconsistent feature columns");
    if (p.sspa_overall) {
      rows.push_back(&p);
    } else if (excluded) {
      excluded->push_back(p.subject_id);
    }
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(d.feature_names.size());
  d.X.resize(n, p);
  d.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const FeaturePanel& panel = *rows[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < p; ++j) d.X(i, j) = panel.values[static_cast<std::size_t>(j)];
    d.y(i) = *panel.sspa_overall;
    d.subject_ids.push_back(panel.subject_id);
  }
  return d;
}

Dataset select_columns(const Dataset& data, const std::vector<std::string>& columns) {
  std::vector<Eigen::Index> idx;
  std::string missing;
  for (const auto& c : columns) {
    auto it = std::find(data.feature_names.begin(), data.feature_names.end(), c);
    if (it == data.feature_names.end()) {
      missing += (missing.empty() ? "" : ", ") + c;
    } else {
      idx.push_back(it - data.feature_names.begin());
    }
  }
  if (!missing.empty()) throw Error("features not in table: " + missing);
  Dataset out;
  out.X.resize(data.X.rows(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t j = 0; j < idx.size(); ++j) out.X.col(static_cast<Eigen::Index>(j)) = data.X.col(idx[j]);
  out.y = data.y;
  out.feature_names = columns;
  out.subject_ids = data.subject_ids;
  return out;
}

namespace detail {

PenalizedSolution solve_penalized(const Matrix& X, const Vector& y, double ridge, bool want_leverage) {
  if (ridge < 0) throw ParameterError("ridge must be non-negative");
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (y.size() != n) throw ParameterError("X and y have different row counts");
  const bool penalized = ridge > 0 && p > 0;
  const Eigen::Index m = penalized ? n + p : n;

  Matrix A = Matrix::Zero(m, p + 1);
  A.block(0, 0, n, 1).setOnes();
  A.block(0, 1, n, p) = X;
  if (penalized) A.block(n, 1, p, p).diagonal().setConstant(std::sqrt(ridge));
  Vector b = Vector::Zero(m);
  b.head(n) = y;

  // Unit column norms make the rank threshold scale-free.
  Vector scale(p + 1);
  for (Eigen::Index j = 0; j <= p; ++j) {
    const double s = A.col(j).norm();
    scale(j) = s > 0 ? s : 1.0;
    A.col(j) /= scale(j);
  }

  Eigen::ColPivHouseholderQR<Matrix> qr;
  qr.setThreshold(1e-10);
  qr.compute(A);

  PenalizedSolution sol;
  sol.full_rank = qr.rank() == p + 1;
  sol.beta = qr.solve(b).cwiseQuotient(scale);
  if (want_leverage) {
    const Eigen::Index k = qr.rank();
    Matrix Q = qr.householderQ() * Matrix::Identity(m, k);
    sol.leverage = Q.topRows(n).rowwise().squaredNorm();
  }
  return sol;
}

std::optional<double> press_rmse(const Matrix& X, const Vector& y, double ridge) {
  const auto sol = solve_penalized(X, y, ridge, true);
  if (!sol.full_rank) return std::nullopt;
  double ss = 0.0;
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    const double fitted = sol.beta(0) + X.row(i).dot(sol.beta.tail(X.cols()));
    const double denom = 1.0 - sol.leverage(i);
    if (!(denom > 1e-12)) return std::nullopt;
    const double e = (y(i) - fitted) / denom;
    ss += e * e;
  }
  return std::sqrt(ss / static_cast<double>(X.rows()));
}

Matrix drop_row(const Matrix& X, Eigen::Index row) {
  Matrix out(X.rows() - 1, X.cols());
  out.topRows(row) = X.topRows(row);
  out.bottomRows(X.rows() - row - 1) = X.bottomRows(X.rows() - row - 1);
  return out;
}

Vector drop_row(const Vector& v, Eigen::Index row) {
  Vector out(v.size() - 1);
  out.head(row) = v.head(row);
  out.tail(v.size() - row - 1) = v.tail(v.size() - row - 1);
  return out;
}

}  // namespace detail

LinearModel ols_fit(const Matrix& X, const Vector& y, double ridge) {
  if (X.rows() == 0) throw FitError("cannot fit a model on zero rows");
  const auto sol = detail::solve_penalized(X, y, ridge, false);
  if (!sol.full_rank) {
    throw FitError("singular least-squares system (" + std::to_string(X.rows()) + " rows, " +
                   std::to_string(X.cols()) + " features); use a positive ridge");
  }
  return {sol.beta.tail(X.cols()), sol.beta(0)};
}

Vector loocv_regress(const Matrix& X, const Vector& y, double ridge, Execution exec) {
  const Eigen::Index n = X.rows();
  if (n < 3) throw FitError("leave-one-out regression needs at least 3 subjects");
  Vector pred(n);
  detail::for_each_index(
      static_cast<long>(n), exec,
      [&](long i) {
        const auto model = ols_fit(detail::drop_row(X, i), detail::drop_row(y, i), ridge);
        pred(i) = model.predict(X.row(i).transpose());
      },
      [](long i) { return "fold " + std::to_string(i); });
  return pred;
}

Vector loocv_press(const Matrix& X, const Vector& y, double ridge) {
  const Eigen::Index n = X.rows();
  if (n < 3) throw FitError("leave-one-out regression needs at least 3 subjects");
  const auto sol = detail::solve_penalized(X, y, ridge, true);
  if (!sol.full_rank) throw FitError("singular least-squares system; use a positive ridge");
  Vector pred(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double fitted = sol.beta(0) + X.row(i).dot(sol.beta.tail(X.cols()));
    const double denom = 1.0 - sol.leverage(i);
    if (!(denom > 1e-12)) throw FitError("subject " + std::to_string(i) + " has leverage 1; LOOCV undefined");
    pred(i) = y(i) - (y(i) - fitted) / denom;
  }
  return pred;
}

}  // namespace speechpanel
