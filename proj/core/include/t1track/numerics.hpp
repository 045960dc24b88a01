#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace t1track {

struct QuadratureResult {
  double value = 0.0;
  double abs_error = 0.0;
  std::size_t intervals = 0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
  std::size_t max_intervals = 2000;
};

/// Globally adaptive 7/15-point Gauss-Kronrod quadrature over [a, b].
/// `breakpoints` (optional, inside (a, b)) seed the initial partition.
/// Throws QuadratureFailure when the tolerance is not met within max_intervals.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& opts = {},
                           std::span<const double> breakpoints = {});

struct MinimizeResult {
  double x = 0.0;
  double value = 0.0;
  int iterations = 0;
};

/// Brent's method (golden section + parabolic steps) on [lo, hi].
MinimizeResult minimize_bounded(const std::function<double(double)>& f, double lo, double hi,
                                double x_rel_tol = 1e-10, int max_iter = 500);

/// Brent root finder on a sign-changing bracket [lo, hi].
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double x_tol = 1e-14, int max_iter = 300);

/// n points geometrically spaced over [lo, hi], endpoints included.
std::vector<double> log_space(double lo, double hi, std::size_t n);

}  // namespace t1track
