#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace t1track {

/// Box-constrained nonlinear least squares, minimizing 0.5 * sum r_i(x)^2.
struct LmProblem {
  std::size_t n_params = 0;
  std::size_t n_residuals = 0;
  std::function<void(std::span<const double> x, std::span<double> r)> residuals;
  /// Row-major n_residuals x n_params. Forward differences are used when empty.
  std::function<void(std::span<const double> x, std::span<double> jac)> jacobian;
  std::vector<double> lower;  // empty = unbounded
  std::vector<double> upper;
};

struct LmOptions {
  int max_iterations = 200;
  double ftol = 1e-14;  // relative cost decrease
  double xtol = 1e-12;  // relative step
  double gtol = 1e-14;  // gradient infinity norm
  double lambda0 = 1e-3;
};

struct LmResult {
  std::vector<double> x;
  double cost = 0.0;  // 0.5 * |r|^2
  int iterations = 0;
  bool converged = false;
  /// (J^T J)^-1 at the solution, row-major; empty when J^T J is singular.
  std::vector<double> covariance;
  std::vector<double> residuals;
};

/// Throws FitDiverged when residuals are not finite at the start point.
LmResult levenberg_marquardt(const LmProblem& problem, std::vector<double> x0,
                             const LmOptions& opts = {});

}  // namespace t1track
