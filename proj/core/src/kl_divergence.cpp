#include "t1track/kl_divergence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "t1track/error.hpp"
#include "t1track/numerics.hpp"
#include "t1track/special_functions.hpp"

namespace t1track {

namespace {

// Inverse Mills ratio phi(a) / (1 - Phi(a)).
double mills(double a) { return standard_normal_pdf(a) / standard_normal_sf(a); }

}  // namespace

TruncatedNormal::TruncatedNormal(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!(sigma > 0.0) || !std::isfinite(mu)) throw DomainError("TruncatedNormal: invalid parameters");
}

double TruncatedNormal::mean() const { return mu_ + sigma_ * mills(-mu_ / sigma_); }

double TruncatedNormal::variance() const {
  const double a = -mu_ / sigma_;
  const double l = mills(a);
  return sigma_ * sigma_ * (1.0 + a * l - l * l);
}

double TruncatedNormal::log_pdf(double x) const {
  if (x < 0.0) return -INFINITY;
  const double z = (x - mu_) / sigma_;
  return -0.5 * z * z - std::log(sigma_) - 0.5 * std::log(2.0 * std::numbers::pi) -
         std::log(standard_normal_sf(-mu_ / sigma_));
}

TruncatedNormal TruncatedNormal::moment_matched(double mean, double variance, double tol) {
  if (!(mean > 0.0) || !(variance > 0.0)) throw DomainError("TruncatedNormal: need mean, variance > 0");
  const double sd = std::sqrt(variance);
  double m = mean;
  double s = sd;
  for (int it = 0; it < 20000; ++it) {
    const double a = -m / s;
    const double l = mills(a);
    const double shrink = 1.0 + a * l - l * l;
    if (!(shrink > 0.0)) throw NumericalError("TruncatedNormal: moment matching left the domain");
    const double s_new = sd / std::sqrt(shrink);
    const double m_new = mean - s_new * l;
    const double dm = m_new - m;
    const double ds = s_new - s;
    m += 0.5 * dm;
    s += 0.5 * ds;
    if (std::abs(dm) <= tol * sd && std::abs(ds) <= tol * sd) return {m, s};
  }
  throw NumericalError("TruncatedNormal: moment matching did not converge");
}

double kl_divergence(const GammaMixture& p, const std::function<double(double)>& log_q,
                     const KlOptions& opts) {
  const double hi = p.upper_rate_bound(opts.mass_tail);
  const double mu = p.mean_rate();
  const double sd = std::sqrt(std::max(p.rate_variance(), 0.0));
  std::vector<double> breaks;
  for (double z : {-2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
    const double x = mu + z * sd;
    if (x > 0.0 && x < hi) breaks.push_back(x);
  }
  auto integrand = [&](double x) {
    const double lp = p.log_pdf(x);
    if (!std::isfinite(lp)) return 0.0;
    return std::exp(lp) * (lp - log_q(x));
  };
  QuadratureOptions q;
  q.abs_tol = opts.abs_tol;
  q.rel_tol = 1e-10;
  q.max_intervals = 5000;
  return integrate(integrand, 0.0, hi, q, breaks).value;
}

double kl_divergence(const GammaMixture& p, const GammaPosterior& q, const KlOptions& opts) {
  return kl_divergence(p, [&](double x) { return log_gamma_density(x, q.k(), q.theta()); }, opts);
}

double kl_divergence(const GammaMixture& p, const TruncatedNormal& q, const KlOptions& opts) {
  return kl_divergence(p, [&](double x) { return q.log_pdf(x); }, opts);
}

double single_shot_kl(double k, double tau_over_theta, Outcome m, const SpamModel& spam,
                      Approximant approx) {
  const GammaPosterior prior(k, 1.0);
  const ShotObservation shot{tau_over_theta, m};
  const GammaMixture exact = exact_posterior(prior, {&shot, 1}, spam);
  if (approx == Approximant::kGamma) {
    return kl_divergence(exact, update(prior, m, tau_over_theta, spam));
  }
  return kl_divergence(exact, TruncatedNormal::moment_matched(exact.mean_rate(), exact.rate_variance()));
}

WorstCase worst_case_kl(double k, Outcome m, const SpamModel& spam, Approximant approx, double lo,
                        double hi, std::size_t grid) {
  const std::vector<double> taus = log_space(lo, hi, grid);
  std::size_t best = 0;
  double best_kl = -INFINITY;
  for (std::size_t i = 0; i < taus.size(); ++i) {
    const double v = single_shot_kl(k, taus[i], m, spam, approx);
    if (v > best_kl) {
      best_kl = v;
      best = i;
    }
  }
  const double a = std::log(taus[best == 0 ? 0 : best - 1]);
  const double b = std::log(taus[std::min(best + 1, taus.size() - 1)]);
  const MinimizeResult r = minimize_bounded(
      [&](double u) { return -single_shot_kl(k, std::exp(u), m, spam, approx); }, a, b, 1e-8);
  if (-r.value > best_kl) return {std::exp(r.x), -r.value};
  return {taus[best], best_kl};
}

std::vector<KlScanRow> kl_scan(std::span<const double> k_grid, std::span<const double> tau_grid,
                               std::span<const double> spam_grid, Outcome m) {
  for (auto g : {k_grid, tau_grid, spam_grid}) {
    if (g.empty() || !std::is_sorted(g.begin(), g.end())) {
      throw ConfigError("kl_scan: grids must be non-empty and sorted");
    }
  }
  std::vector<KlScanRow> rows;
  for (double k : k_grid) {
    for (double level : spam_grid) {
      const SpamModel spam(level, level);
      for (double t : tau_grid) {
        KlScanRow row{k, t, level, std::nullopt, std::nullopt};
        try {
          row.kl_gamma = single_shot_kl(k, t, m, spam, Approximant::kGamma);
        } catch (const NumericalError&) {
        }
        try {
          row.kl_truncated_normal = single_shot_kl(k, t, m, spam, Approximant::kTruncatedNormal);
        } catch (const NumericalError&) {
        }
        rows.push_back(row);
      }
    }
  }
  return rows;
}

}  // namespace t1track
