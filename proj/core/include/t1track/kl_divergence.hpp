#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "t1track/gamma_mixture.hpp"
#include "t1track/gamma_posterior.hpp"

namespace t1track {

/// Normal(mu, sigma) restricted to [0, inf).
class TruncatedNormal {
 public:
  /// mu and sigma are the parameters before truncation.
  TruncatedNormal(double mu, double sigma);

  /// Solves for the truncated normal with the given mean and variance (damped fixed point).
  /// Throws NumericalError when the iteration does not converge.
  static TruncatedNormal moment_matched(double mean, double variance, double tol = 1e-10);

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }
  double mean() const;
  double variance() const;
  double log_pdf(double x) const;

 private:
  double mu_;
  double sigma_;
};

struct KlOptions {
  double abs_tol = 1e-9;
  double mass_tail = 1e-10;
};

/// D(p || q) in nats by adaptive quadrature over (0, lambda_max).
/// Throws QuadratureFailure.
double kl_divergence(const GammaMixture& p, const std::function<double(double)>& log_q,
                     const KlOptions& opts = {});
double kl_divergence(const GammaMixture& p, const GammaPosterior& q, const KlOptions& opts = {});
double kl_divergence(const GammaMixture& p, const TruncatedNormal& q, const KlOptions& opts = {});

enum class Approximant { kGamma, kTruncatedNormal };

/// KL of the approximant after one shot from a Gamma(k, theta = 1) prior.
double single_shot_kl(double k, double tau_over_theta, Outcome m, const SpamModel& spam,
                      Approximant approx);

struct WorstCase {
  double tau_over_theta;
  double kl;
};

/// Maximum of single_shot_kl over tau/theta in [lo, hi]: log grid then Brent refinement.
WorstCase worst_case_kl(double k, Outcome m, const SpamModel& spam, Approximant approx,
                        double lo = 0.01, double hi = 10.0, std::size_t grid = 80);

struct KlScanRow {
  double k;
  double tau_over_theta;
  double spam_level;  // alpha = beta
  std::optional<double> kl_gamma;
  std::optional<double> kl_truncated_normal;
};

/// Cartesian scan; failed cells are left empty.
std::vector<KlScanRow> kl_scan(std::span<const double> k_grid, std::span<const double> tau_grid,
                               std::span<const double> spam_grid, Outcome m);

}  // namespace t1track
