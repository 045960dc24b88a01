#include "t1track/gamma_mixture.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "t1track/error.hpp"
#include "t1track/special_functions.hpp"

namespace t1track {

GammaMixture::GammaMixture(std::vector<MixtureComponent> components)
    : components_(std::move(components)) {
  if (components_.empty()) throw DomainError("GammaMixture: no components");
  double total = 0.0;
  for (const MixtureComponent& c : components_) {
    if (!(c.k > 0.0) || !(c.theta > 0.0)) throw DomainError("GammaMixture: invalid component");
    total += c.weight;
  }
  if (!(total > 0.0)) throw ZeroEvidence("GammaMixture: weights do not sum to a positive value");
  for (MixtureComponent& c : components_) c.weight /= total;
}

double GammaMixture::mean_rate() const noexcept {
  double m = 0.0;
  for (const MixtureComponent& c : components_) m += c.weight * c.k / c.theta;
  return m;
}

double GammaMixture::rate_variance() const noexcept {
  const double mu = mean_rate();
  double v = 0.0;
  for (const MixtureComponent& c : components_) {
    const double mi = c.k / c.theta;
    v += c.weight * (mi / c.theta + (mi - mu) * (mi - mu));
  }
  return v;
}

double GammaMixture::log_pdf(double gamma1) const {
  if (!(gamma1 > 0.0)) return -std::numeric_limits<double>::infinity();
  double lmax = -std::numeric_limits<double>::infinity();
  std::vector<double> l(components_.size());
  for (std::size_t i = 0; i < components_.size(); ++i) {
    l[i] = log_gamma_density(gamma1, components_[i].k, components_[i].theta);
    lmax = std::max(lmax, l[i]);
  }
  if (!std::isfinite(lmax)) return lmax;
  double s = 0.0;
  for (std::size_t i = 0; i < components_.size(); ++i) s += components_[i].weight * std::exp(l[i] - lmax);
  if (!(s > 0.0)) return -std::numeric_limits<double>::infinity();
  return lmax + std::log(s);
}

double GammaMixture::pdf(double gamma1) const {
  if (!(gamma1 > 0.0)) return 0.0;
  double s = 0.0;
  for (const MixtureComponent& c : components_) s += c.weight * std::exp(log_gamma_density(gamma1, c.k, c.theta));
  return std::max(s, 0.0);
}

double GammaMixture::cdf(double gamma1) const {
  if (!(gamma1 > 0.0)) return 0.0;
  double s = 0.0;
  for (const MixtureComponent& c : components_) s += c.weight * regularized_gamma_p(c.k, c.theta * gamma1);
  return std::clamp(s, 0.0, 1.0);
}

double GammaMixture::upper_rate_bound(double tail) const {
  auto bound = [&](double x) {
    double s = 0.0;
    for (const MixtureComponent& c : components_) s += std::abs(c.weight) * regularized_gamma_q(c.k, c.theta * x);
    return s;
  };
  double hi = 0.0;
  for (const MixtureComponent& c : components_) hi = std::max(hi, c.k / c.theta);
  hi = std::max(hi, 1e-300);
  while (bound(hi) > tail) hi *= 2.0;
  double lo = hi / 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (bound(mid) > tail ? lo : hi) = mid;
  }
  return hi;
}

GammaMixture exact_posterior(const GammaPosterior& prior, std::span<const ShotObservation> shots,
                             const SpamModel& spam) {
  if (shots.size() > kMaxExactShots) throw TooManyShots("exact_posterior: at most 20 shots");
  const double k = prior.k();
  std::vector<MixtureComponent> comps{{1.0, k, prior.theta()}};
  for (const ShotObservation& s : shots) {
    if (!(s.tau_s >= 0.0)) throw DomainError("exact_posterior: tau must be >= 0");
    const double a = spam.a(s.outcome);
    const double b = spam.b(s.outcome);
    std::vector<MixtureComponent> next;
    next.reserve(2 * comps.size());
    for (const MixtureComponent& c : comps) {
      if (a != 0.0) next.push_back({c.weight * a, k, c.theta});
      if (b != 0.0) {
        const double r = std::exp(-k * std::log1p(s.tau_s / c.theta));
        next.push_back({-c.weight * b * r, k, c.theta + s.tau_s});
      }
    }
    // Terms with equal theta come from different subsets with equal tau sums.
    std::sort(next.begin(), next.end(),
              [](const MixtureComponent& x, const MixtureComponent& y) { return x.theta < y.theta; });
    comps.clear();
    for (const MixtureComponent& c : next) {
      if (!comps.empty() && std::abs(c.theta - comps.back().theta) <= 1e-13 * c.theta) {
        comps.back().weight += c.weight;
      } else {
        comps.push_back(c);
      }
    }
    double total = 0.0;
    for (const MixtureComponent& c : comps) total += c.weight;
    if (!(total > 0.0)) throw ZeroEvidence("exact_posterior: observed outcomes have zero probability");
    for (MixtureComponent& c : comps) c.weight /= total;
  }
  return GammaMixture(std::move(comps));
}

}  // namespace t1track
