#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "t1track/gamma_posterior.hpp"

namespace t1track {

/// Cost model of a fixed-tau experiment: per-cycle idle time plus either a total
/// time budget T (N = T / (tau + t)) or a fixed shot count N.
struct ExperimentBudget {
  enum class Regime { kTimeLimited, kShotLimited };

  Regime regime = Regime::kTimeLimited;
  double idle_s = 0.0;
  double total_time_s = 1.0;  // used when time-limited
  double n_shots = 1.0;       // used when shot-limited

  static ExperimentBudget time_limited(double idle_s, double total_time_s = 1.0);
  static ExperimentBudget shot_limited(double n_shots);
};

struct TauOptimum {
  double tau_opt_s = 0.0;
  double c_opt = 0.0;  // tau_opt * Gamma1
  double objective_value = 0.0;
  bool degenerate = false;  // optimum sits at tau = 0 (Lambert branch point)
};

/// Expected standard deviation of the rate estimate from binomial statistics at fixed tau.
/// Throws DomainError when the outcome probability is 0 or 1 (no information).
double expected_sigma(double tau_s, double gamma1, const ExperimentBudget& budget,
                      const SpamModel& spam);

enum class ClosedFormCase {
  kShotLimitedNoSpam,  // tau = (2 + W(-2 e^-2)) / Gamma1
  kShotLimitedBeta0,   // tau = (2 + W(2 (alpha - 1) e^-2)) / Gamma1
  kZeroIdleBeta0,      // tau = (1 + W((alpha - 1) / e)) / Gamma1
};

/// Throws DomainError if alpha >= 1 or alpha < 0.
TauOptimum tau_opt_closed_form(ClosedFormCase which, double gamma1, double alpha = 0.0);

struct TauSearchOptions {
  double lo_factor = 1e-3;  // bracket [lo_factor, hi_factor] / Gamma1
  double hi_factor = 20.0;
  std::size_t grid_points = 400;
};

/// Minimizes expected_sigma over tau. Throws NoMinimum when the best grid point is a bracket end.
TauOptimum tau_opt_numeric(double gamma1, const ExperimentBudget& budget, const SpamModel& spam,
                           const TauSearchOptions& opts = {});

struct CTableRow {
  double gamma1_per_s;
  double idle_s;
  std::optional<double> c_opt;  // empty when the objective has no interior minimum
};

/// Time-limited c_opt over the Cartesian product of the grids (Gamma1-major order).
std::vector<CTableRow> export_c_table(std::span<const double> gamma1_grid,
                                      std::span<const double> idle_grid, const SpamModel& spam);

}  // namespace t1track
