#include "t1track/binomial_tests.hpp"

#include <cmath>

#include "t1track/error.hpp"

namespace t1track {

std::vector<double> binomial_pmf(std::size_t n, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("binomial_pmf: p outside [0, 1]");
  std::vector<double> pmf(n + 1, 0.0);
  if (p == 0.0 || p == 1.0) {
    pmf[p == 0.0 ? 0 : n] = 1.0;
    return pmf;
  }
  const double nn = static_cast<double>(n);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);
  for (std::size_t s = 0; s <= n; ++s) {
    const double ss = static_cast<double>(s);
    pmf[s] = std::exp(std::lgamma(nn + 1.0) - std::lgamma(ss + 1.0) - std::lgamma(nn - ss + 1.0) +
                      ss * lp + (nn - ss) * lq);
  }
  return pmf;
}

std::vector<double> poisson_binomial_pmf(std::span<const double> probs) {
  std::vector<double> pmf{1.0};
  pmf.reserve(probs.size() + 1);
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) throw DomainError("poisson_binomial_pmf: p outside [0, 1]");
    pmf.push_back(0.0);
    for (std::size_t s = pmf.size() - 1; s > 0; --s) pmf[s] = pmf[s] * (1.0 - p) + pmf[s - 1] * p;
    pmf[0] *= 1.0 - p;
  }
  return pmf;
}

std::size_t lower_critical(std::span<const double> pmf, double level) {
  // P(S >= s) is non-increasing in s; P(S >= 0) = 1.
  double upper_tail = 0.0;
  for (std::size_t s = pmf.size(); s-- > 0;) {
    upper_tail += pmf[s];
    if (upper_tail >= level) return s;
  }
  return 0;
}

std::size_t upper_critical(std::span<const double> pmf, double level) {
  double lower_tail = 0.0;
  for (std::size_t s = 0; s < pmf.size(); ++s) {
    lower_tail += pmf[s];
    if (lower_tail >= level) return s;
  }
  return pmf.empty() ? 0 : pmf.size() - 1;
}

Thresholds weak_strong_thresholds(const BinomialTest& test, const SpamModel& spam) {
  if (test.n_test == 0) throw ConfigError("weak_strong_thresholds: n_test must be >= 1");
  if (!(test.level > 0.0 && test.level < 1.0)) throw ConfigError("weak_strong_thresholds: level in (0, 1)");
  if (!(test.q > -1.0)) throw ConfigError("weak_strong_thresholds: q must exceed -1");
  const double p = spam.beta() + spam.contrast() * std::exp(-1.0 / (1.0 + test.q));
  const std::vector<double> pmf = binomial_pmf(test.n_test, p);
  // Guard the summation against rounding just below level for degenerate pmfs.
  const double level = test.level * (1.0 - 1e-14);
  return {lower_critical(pmf, level), upper_critical(pmf, level), p};
}

TestOutcome test_greater(std::size_t excited, const Thresholds& th) {
  return {excited >= th.s_weak, excited > th.s_strong};
}

TestOutcome test_less(std::size_t excited, const Thresholds& th) {
  return {excited <= th.s_strong, excited < th.s_weak};
}

double frequentist_limit(double t1_s, double total_time_s) {
  if (!(total_time_s > 0.0)) throw DomainError("frequentist_limit: T must be positive");
  return t1_s * std::sqrt(t1_s / total_time_s);
}

}  // namespace t1track
