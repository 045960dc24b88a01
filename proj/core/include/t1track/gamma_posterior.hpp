#pragma once

#include <cstdint>
#include <utility>

namespace t1track {

/// Single-shot readout outcome: 0 = ground, 1 = excited.
enum class Outcome : std::uint8_t { kGround = 0, kExcited = 1 };

constexpr int to_int(Outcome m) noexcept { return static_cast<int>(m); }
constexpr Outcome outcome_from_int(int m) noexcept {
  return m != 0 ? Outcome::kExcited : Outcome::kGround;
}

/// Misclassification probabilities of the readout.
/// alpha = P(read 0 | state 1), beta = P(read 1 | state 0).
class SpamModel {
 public:
  constexpr SpamModel() = default;
  /// Throws ConfigError unless 0 <= alpha, beta < 1 and alpha + beta < 1.
  SpamModel(double alpha, double beta);

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }
  /// Readout contrast 1 - alpha - beta.
  double contrast() const noexcept { return 1.0 - alpha_ - beta_; }

  /// Likelihood written as a_m - b_m e^{-Gamma tau}.
  double a(Outcome m) const noexcept;
  double b(Outcome m) const noexcept;

  bool operator==(const SpamModel&) const = default;

 private:
  double alpha_ = 0.0;
  double beta_ = 0.0;
};

/// P(m | Gamma1, tau) = a_m - b_m exp(-Gamma1 tau).
double likelihood(Outcome m, double gamma1, double tau, const SpamModel& spam);

/// Gamma belief over the decay rate, density theta^k / Gamma(k) * x^(k-1) * exp(-theta x).
///
/// theta multiplies the rate in the exponent, so it carries units of seconds and the mean
/// rate is k / theta. The two scalars are the whole estimator memory.
class GammaPosterior {
 public:
  /// Throws DomainError unless k > 0 and theta > 0 (both finite).
  GammaPosterior(double k, double theta_s);

  double k() const noexcept { return k_; }
  double theta() const noexcept { return theta_; }

  double mean_rate() const noexcept { return k_ / theta_; }
  double rate_variance() const noexcept { return k_ / (theta_ * theta_); }
  /// Point estimate T1_hat = 1 / <Gamma1> = theta / k.
  double t1_hat() const noexcept { return theta_ / k_; }
  /// Delta-method std of T1_hat: theta * k^(-3/2).
  double t1_std() const noexcept;

  double pdf(double gamma1) const;
  double cdf(double gamma1) const;
  /// Rate quantile; prob in [0, 1].
  double rate_quantile(double prob) const;

  bool operator==(const GammaPosterior&) const = default;

 private:
  double k_;
  double theta_;
};

/// Moment-matched Bayes update for one outcome observed after waiting tau.
/// Throws ZeroEvidence when the outcome has probability 0 under `prior`.
GammaPosterior update(const GammaPosterior& prior, Outcome m, double tau, const SpamModel& spam);

/// f_m(k, theta, tau): the posterior mean rate after outcome m from a Gamma(k, theta) prior.
double posterior_mean_factor(Outcome m, double k, double theta, double tau, const SpamModel& spam);

/// Prior predictive probability of outcome m, a_m - b_m (theta / (theta + tau))^k.
double evidence(const GammaPosterior& prior, Outcome m, double tau, const SpamModel& spam);

/// Equal-tailed credible interval for T1 = 1 / Gamma1 at the given level, in seconds.
/// Obtained from rate quantiles and inverted, so .first < .second.
std::pair<double, double> credible_interval(const GammaPosterior& posterior, double level);

}  // namespace t1track
