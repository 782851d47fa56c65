#include <limits>

#include "lsq.hpp"
#include "speechpanel/errors.hpp"

namespace speechpanel {

std::vector<std::string> SelectionResult::top(std::size_t k) const {
  std::vector<std::string> out;
  for (const auto& s : steps) {
    if (out.size() == k) break;
    out.push_back(s.feature);
  }
  return out;
}

SelectionResult stepwise_select(const Matrix& X, const Vector& y, const std::vector<std::string>& names,
                                std::size_t max_features, double min_improvement, Execution exec) {
  const Eigen::Index n = X.rows();
  const Eigen::Index p = X.cols();
  if (p < 1) throw ParameterError("stepwise selection needs at least one feature");
  if (static_cast<Eigen::Index>(names.size()) != p) throw ParameterError("feature name count does not match X");
  if (n < 3) throw FitError("stepwise selection needs at least 3 subjects");

  SelectionResult result;
  const auto baseline = detail::press_rmse(Matrix(n, 0), y, 0.0);
  if (!baseline) throw FitError("intercept-only model has undefined LOOCV error");
  result.baseline_rmse = *baseline;

  std::vector<bool> used(static_cast<std::size_t>(p), false);
  Matrix current(n, 0);
  double current_rmse = result.baseline_rmse;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  while (result.steps.size() < max_features && current.cols() < p) {
    std::vector<double> score(static_cast<std::size_t>(p), kInf);
    auto evaluate = [&](long j) {
      if (used[static_cast<std::size_t>(j)]) return;
      Matrix trial(n, current.cols() + 1);
      trial.leftCols(current.cols()) = current;
      trial.col(current.cols()) = X.col(j);
      if (auto r = detail::press_rmse(trial, y, 0.0)) score[static_cast<std::size_t>(j)] = *r;
    };
    if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(active_thread_count())
      for (long j = 0; j < static_cast<long>(p); ++j) evaluate(j);
    } else {
      for (long j = 0; j < static_cast<long>(p); ++j) evaluate(j);
    }

    std::size_t best = 0;
    for (std::size_t j = 1; j < score.size(); ++j) {
      if (score[j] < score[best]) best = j;
    }
    if (score[best] == kInf || current_rmse - score[best] < min_improvement) break;

    used[best] = true;
    current.conservativeResize(Eigen::NoChange, current.cols() + 1);
    current.col(current.cols() - 1) = X.col(static_cast<Eigen::Index>(best));
    current_rmse = score[best];
    result.steps.push_back({names[best], best, result.steps.size() + 1, current_rmse});
  }
  return result;
}

}  // namespace speechpanel
