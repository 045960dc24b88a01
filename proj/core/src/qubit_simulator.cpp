#include "t1track/qubit_simulator.hpp"

#include <cmath>

#include "t1track/error.hpp"

namespace t1track {

Outcome sample_outcome(double survival, const SpamModel& spam, CounterRng& rng) {
  const bool excited = rng.bernoulli(survival);
  const bool flip = rng.bernoulli(excited ? spam.alpha() : spam.beta());
  return outcome_from_int(excited != flip ? 1 : 0);
}

SimulatedQubit::SimulatedQubit(const RateProcessSpec& process, SpamModel spam, double idle_s,
                               std::uint64_t seed, bool record_trajectory)
    : process_(process, CounterRng::stream(seed, 0)),
      spam_(spam),
      clock_{0.0, idle_s},
      shot_rng_(CounterRng::stream(seed, 1)),
      record_(record_trajectory) {
  if (!(idle_s >= 0.0)) throw ConfigError("SimulatedQubit: idle time must be non-negative");
  last_mean_gamma_ = process_.gamma();
  if (record_) trajectory_.push_back({0.0, process_.gamma()});
}

void SimulatedQubit::advance(double duration_s, double* mean_gamma) {
  scratch_.clear();
  const double g = process_.evolve(duration_s, record_ ? &scratch_ : nullptr);
  if (mean_gamma) *mean_gamma = g;
  for (const SwitchEvent& e : scratch_) trajectory_.push_back({e.time_s, e.gamma_after});
  clock_.lab_time_s += duration_s;
}

MeasurementSource::Shot SimulatedQubit::measure(double tau_s) {
  if (!(tau_s > 0.0)) throw DomainError("SimulatedQubit::measure: tau must be positive");
  const double start = clock_.lab_time_s;
  advance(tau_s, &last_mean_gamma_);
  const Outcome m = sample_outcome(std::exp(-last_mean_gamma_ * tau_s), spam_, shot_rng_);
  if (clock_.idle_s > 0.0) advance(clock_.idle_s, nullptr);
  return {m, start};
}

void SimulatedQubit::idle(double duration_s) {
  if (duration_s > 0.0) advance(duration_s, nullptr);
}

}  // namespace t1track
