#include "t1track/wait_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "t1track/error.hpp"
#include "t1track/numerics.hpp"
#include "t1track/special_functions.hpp"

namespace t1track {

ExperimentBudget ExperimentBudget::time_limited(double idle_s, double total_time_s) {
  if (!(idle_s >= 0.0) || !(total_time_s > 0.0)) {
    throw ConfigError("ExperimentBudget: need idle >= 0 and total time > 0");
  }
  return {Regime::kTimeLimited, idle_s, total_time_s, 1.0};
}

ExperimentBudget ExperimentBudget::shot_limited(double n_shots) {
  if (!(n_shots >= 1.0)) throw ConfigError("ExperimentBudget: need N >= 1");
  return {Regime::kShotLimited, 0.0, 1.0, n_shots};
}

namespace {

struct Probabilities {
  double p;          // P(m = 1)
  double q;          // 1 - p
  double survival;   // e^{-Gamma tau}
};

Probabilities outcome_probabilities(double tau, double gamma1, const SpamModel& spam) {
  const double x = gamma1 * tau;
  const double survival = std::exp(-x);
  return {spam.beta() + spam.contrast() * survival,
          spam.alpha() + spam.contrast() * (-std::expm1(-x)), survival};
}

double log_objective(double tau, double gamma1, const ExperimentBudget& budget,
                     const SpamModel& spam) {
  const Probabilities pr = outcome_probabilities(tau, gamma1, spam);
  double v = 0.5 * std::log(pr.p) + 0.5 * std::log(pr.q) - std::log(spam.contrast() * tau) + gamma1 * tau;
  if (budget.regime == ExperimentBudget::Regime::kTimeLimited) {
    v += 0.5 * std::log(tau + budget.idle_s) - 0.5 * std::log(budget.total_time_s);
  } else {
    v -= 0.5 * std::log(budget.n_shots);
  }
  return v;
}

double log_objective_derivative(double tau, double gamma1, const ExperimentBudget& budget,
                                const SpamModel& spam) {
  const Probabilities pr = outcome_probabilities(tau, gamma1, spam);
  const double dp = -spam.contrast() * gamma1 * pr.survival;
  double d = -1.0 / tau + gamma1 + 0.5 * dp * (1.0 / pr.p - 1.0 / pr.q);
  if (budget.regime == ExperimentBudget::Regime::kTimeLimited) d += 0.5 / (tau + budget.idle_s);
  return d;
}

}  // namespace

double expected_sigma(double tau_s, double gamma1, const ExperimentBudget& budget,
                      const SpamModel& spam) {
  if (!(tau_s > 0.0)) throw DomainError("expected_sigma: tau must be positive");
  const Probabilities pr = outcome_probabilities(tau_s, gamma1, spam);
  const double slope = spam.contrast() * tau_s * pr.survival;
  if (!(pr.p > 0.0) || !(pr.q > 0.0) || !(slope > 0.0)) {
    throw DomainError("expected_sigma: outcome probability is 0 or 1 at this tau");
  }
  double sigma = std::sqrt(pr.p * pr.q) / slope;
  if (budget.regime == ExperimentBudget::Regime::kTimeLimited) {
    sigma *= std::sqrt((tau_s + budget.idle_s) / budget.total_time_s);
  } else {
    sigma /= std::sqrt(budget.n_shots);
  }
  return sigma;
}

TauOptimum tau_opt_closed_form(ClosedFormCase which, double gamma1, double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw DomainError("tau_opt_closed_form: need 0 <= alpha < 1");
  if (!(gamma1 > 0.0)) throw DomainError("tau_opt_closed_form: gamma1 must be positive");
  double c = 0.0;
  switch (which) {
    case ClosedFormCase::kShotLimitedNoSpam:
      c = 2.0 + lambert_w0(-2.0 * std::exp(-2.0));
      break;
    case ClosedFormCase::kShotLimitedBeta0:
      c = 2.0 + lambert_w0(2.0 * (alpha - 1.0) * std::exp(-2.0));
      break;
    case ClosedFormCase::kZeroIdleBeta0:
      c = 1.0 + lambert_w0((alpha - 1.0) / std::numbers::e);
      break;
  }
  TauOptimum out;
  out.c_opt = std::max(c, 0.0);
  out.tau_opt_s = out.c_opt / gamma1;
  out.degenerate = out.c_opt <= 1e-7;
  if (out.degenerate) {
    out.c_opt = 0.0;
    out.tau_opt_s = 0.0;
    out.objective_value = 0.0;
    return out;
  }
  const SpamModel spam = which == ClosedFormCase::kShotLimitedNoSpam ? SpamModel{} : SpamModel{alpha, 0.0};
  const ExperimentBudget budget = which == ClosedFormCase::kZeroIdleBeta0
                                      ? ExperimentBudget::time_limited(0.0)
                                      : ExperimentBudget::shot_limited(1.0);
  out.objective_value = expected_sigma(out.tau_opt_s, gamma1, budget, spam);
  return out;
}

TauOptimum tau_opt_numeric(double gamma1, const ExperimentBudget& budget, const SpamModel& spam,
                           const TauSearchOptions& opts) {
  if (!(gamma1 > 0.0)) throw DomainError("tau_opt_numeric: gamma1 must be positive");
  if (opts.grid_points < 3 || !(opts.lo_factor > 0.0 && opts.lo_factor < opts.hi_factor)) {
    throw ConfigError("tau_opt_numeric: invalid search bracket");
  }
  const std::vector<double> grid =
      log_space(opts.lo_factor / gamma1, opts.hi_factor / gamma1, opts.grid_points);
  std::size_t best = 0;
  double best_value = INFINITY;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = log_objective(grid[i], gamma1, budget, spam);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  if (!std::isfinite(best_value)) throw DomainError("tau_opt_numeric: objective undefined on bracket");
  if (best == 0 || best + 1 == grid.size()) {
    throw NoMinimum("tau_opt_numeric: objective is monotone on the bracket", grid[best],
                    std::exp(best_value));
  }

  const double lo = grid[best - 1];
  const double hi = grid[best + 1];
  auto deriv = [&](double tau) { return log_objective_derivative(tau, gamma1, budget, spam); };
  double tau;
  if (deriv(lo) < 0.0 && deriv(hi) > 0.0) {
    tau = find_root(deriv, lo, hi, 1e-13 * grid[best]);
  } else {
    auto f = [&](double t) { return log_objective(t, gamma1, budget, spam); };
    tau = minimize_bounded(f, lo, hi, 1e-12).x;
  }
  TauOptimum out;
  out.tau_opt_s = tau;
  out.c_opt = tau * gamma1;
  out.objective_value = expected_sigma(tau, gamma1, budget, spam);
  return out;
}

std::vector<CTableRow> export_c_table(std::span<const double> gamma1_grid,
                                      std::span<const double> idle_grid, const SpamModel& spam) {
  if (gamma1_grid.empty() || idle_grid.empty()) throw ConfigError("export_c_table: empty grid");
  if (!std::is_sorted(gamma1_grid.begin(), gamma1_grid.end()) ||
      !std::is_sorted(idle_grid.begin(), idle_grid.end())) {
    throw ConfigError("export_c_table: grids must be sorted");
  }
  std::vector<CTableRow> rows;
  rows.reserve(gamma1_grid.size() * idle_grid.size());
  for (double g : gamma1_grid) {
    for (double t : idle_grid) {
      CTableRow row{g, t, std::nullopt};
      try {
        row.c_opt = tau_opt_numeric(g, ExperimentBudget::time_limited(t), spam).c_opt;
      } catch (const NoMinimum&) {
      }
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace t1track
