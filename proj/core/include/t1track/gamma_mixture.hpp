#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "t1track/gamma_posterior.hpp"

namespace t1track {

struct MixtureComponent {
  double weight;
  double k;
  double theta;
};

/// Signed-weight mixture of gamma densities in the rate; weights sum to one.
class GammaMixture {
 public:
  explicit GammaMixture(std::vector<MixtureComponent> components);

  const std::vector<MixtureComponent>& components() const noexcept { return components_; }
  double mean_rate() const noexcept;
  double rate_variance() const noexcept;
  double pdf(double gamma1) const;
  double log_pdf(double gamma1) const;
  double cdf(double gamma1) const;
  /// Rate beyond which at most `tail` of the mass lies (bound from |weights|).
  double upper_rate_bound(double tail) const;

 private:
  std::vector<MixtureComponent> components_;
};

struct ShotObservation {
  double tau_s;
  Outcome outcome;
};

inline constexpr std::size_t kMaxExactShots = 20;

/// Exact posterior after the given shots: the likelihood product expanded into gamma terms.
/// Throws TooManyShots beyond kMaxExactShots and ZeroEvidence if the evidence vanishes.
GammaMixture exact_posterior(const GammaPosterior& prior, std::span<const ShotObservation> shots,
                             const SpamModel& spam);

}  // namespace t1track
