#include "t1track/gamma_posterior.hpp"

#include <cmath>

#include "t1track/error.hpp"
#include "t1track/special_functions.hpp"

namespace t1track {

SpamModel::SpamModel(double alpha, double beta) : alpha_(alpha), beta_(beta) {
  if (!(alpha >= 0.0 && alpha < 1.0) || !(beta >= 0.0 && beta < 1.0) || !(alpha + beta < 1.0)) {
    throw ConfigError("SpamModel: need 0 <= alpha, beta < 1 and alpha + beta < 1");
  }
}

double SpamModel::a(Outcome m) const noexcept {
  return m == Outcome::kExcited ? beta_ : 1.0 - beta_;
}

double SpamModel::b(Outcome m) const noexcept {
  return m == Outcome::kExcited ? -contrast() : contrast();
}

double likelihood(Outcome m, double gamma1, double tau, const SpamModel& spam) {
  const double survival = std::exp(-gamma1 * tau);
  if (m == Outcome::kExcited) return spam.beta() + spam.contrast() * survival;
  // 1 - beta - s e^{-x} = alpha + s (1 - e^{-x}), kept free of cancellation at small x.
  return spam.alpha() + spam.contrast() * (-std::expm1(-gamma1 * tau));
}

GammaPosterior::GammaPosterior(double k, double theta_s) : k_(k), theta_(theta_s) {
  if (!(k > 0.0) || !(theta_s > 0.0) || !std::isfinite(k) || !std::isfinite(theta_s)) {
    throw DomainError("GammaPosterior: need finite k > 0 and theta > 0");
  }
}

double GammaPosterior::t1_std() const noexcept { return theta_ * std::pow(k_, -1.5); }

double GammaPosterior::pdf(double gamma1) const {
  if (gamma1 < 0.0) return 0.0;
  if (gamma1 == 0.0) return k_ == 1.0 ? theta_ : (k_ < 1.0 ? INFINITY : 0.0);
  return std::exp(log_gamma_density(gamma1, k_, theta_));
}

double GammaPosterior::cdf(double gamma1) const {
  if (gamma1 <= 0.0) return 0.0;
  return regularized_gamma_p(k_, theta_ * gamma1);
}

double GammaPosterior::rate_quantile(double prob) const {
  return gamma_p_inverse(k_, prob) / theta_;
}

namespace {

// a_m - b_m r^n with r = theta / (theta + tau), written per outcome so that neither branch
// subtracts nearly equal numbers.
double evidence_term(Outcome m, double n, double log_r, const SpamModel& spam) {
  if (m == Outcome::kExcited) return spam.beta() + spam.contrast() * std::exp(n * log_r);
  return spam.alpha() + spam.contrast() * (-std::expm1(n * log_r));
}

}  // namespace

double evidence(const GammaPosterior& prior, Outcome m, double tau, const SpamModel& spam) {
  const double log_r = -std::log1p(tau / prior.theta());
  return evidence_term(m, prior.k(), log_r, spam);
}

double posterior_mean_factor(Outcome m, double k, double theta, double tau,
                             const SpamModel& spam) {
  const double log_r = -std::log1p(tau / theta);
  return (k / theta) * evidence_term(m, k + 1.0, log_r, spam) / evidence_term(m, k, log_r, spam);
}

GammaPosterior update(const GammaPosterior& prior, Outcome m, double tau, const SpamModel& spam) {
  if (!(tau >= 0.0)) throw DomainError("update: tau must be >= 0");
  const double k = prior.k();
  const double theta = prior.theta();

  // a_m = 0: the likelihood is a pure exponential and the family is conjugate.
  if (spam.a(m) == 0.0) return GammaPosterior(k, theta + tau);

  const double log_r = -std::log1p(tau / theta);
  const double e0 = evidence_term(m, k, log_r, spam);
  if (!(e0 > 0.0)) {
    throw ZeroEvidence("update: observed outcome has zero probability under the prior");
  }
  const double e1 = evidence_term(m, k + 1.0, log_r, spam);
  const double e2 = evidence_term(m, k + 2.0, log_r, spam);

  const double f_k = (k / theta) * e1 / e0;
  const double f_k1 = ((k + 1.0) / theta) * e2 / e1;
  const double inv_theta = f_k1 - f_k;
  if (!(inv_theta > 0.0) || !std::isfinite(inv_theta)) {
    throw NumericalError("update: moment matching produced a non-positive variance");
  }
  return GammaPosterior(f_k / inv_theta, 1.0 / inv_theta);
}

std::pair<double, double> credible_interval(const GammaPosterior& posterior, double level) {
  if (!(level > 0.0 && level < 1.0)) throw DomainError("credible_interval: level must be in (0, 1)");
  const double rate_lo = posterior.rate_quantile(0.5 * (1.0 - level));
  const double rate_hi = posterior.rate_quantile(0.5 * (1.0 + level));
  return {1.0 / rate_hi, 1.0 / rate_lo};
}

}  // namespace t1track
