#pragma once

#include <optional>

#include "speechpanel/errors.hpp"
#include "speechpanel/learn.hpp"

namespace speechpanel::detail {

// Solution of min |y - b - Xw|^2 + ridge |w|^2. `leverage` holds the hat
// matrix diagonal when requested. full_rank = false means beta is not unique.
struct PenalizedSolution {
  Vector beta;  // [intercept, w...]
  Vector leverage;
  bool full_rank = false;
};

PenalizedSolution solve_penalized(const Matrix& X, const Vector& y, double ridge, bool want_leverage);

// sqrt(mean squared LOOCV residual) from the PRESS identity, or nullopt when
// the design is rank deficient or some point has leverage ~1.
std::optional<double> press_rmse(const Matrix& X, const Vector& y, double ridge);

Matrix drop_row(const Matrix& X, Eigen::Index row);
Vector drop_row(const Vector& v, Eigen::Index row);

// Runs body(i) for i in [0, n); the first exception (lowest i) is rethrown
// after the loop with `what(i)` prefixed.
template <typename Body, typename Describe>
void for_each_index(long n, Execution exec, Body&& body, Describe&& describe) {
  std::vector<std::string> errors(static_cast<std::size_t>(n));
  auto guarded = [&](long i) {
    try {
      body(i);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = describe(i) + ": " + e.what();
    }
  };
  if (exec == Execution::Parallel) {
#pragma omp parallel for schedule(dynamic) num_threads(active_thread_count())
    for (long i = 0; i < n; ++i) guarded(i);
  } else {
    for (long i = 0; i < n; ++i) guarded(i);
  }
  for (const auto& e : errors) {
    if (!e.empty()) throw FitError(e);
  }
}

}  // namespace speechpanel::detail
