#pragma once

#include <cstddef>
#include <optional>
#include <queue>
#include <vector>

#include "t1track/rng.hpp"

namespace t1track {

/// Two-state telegraph fluctuator adding delta_gamma to the decay rate while on.
struct Fluctuator {
  double rate_up = 1.0;    // off -> on (1/s)
  double rate_down = 1.0;  // on -> off (1/s)
  double delta_gamma = 0.0;
  bool on = false;

  double switching_rate() const noexcept { return rate_up + rate_down; }
  double on_probability() const noexcept { return rate_up / (rate_up + rate_down); }
};

/// Symmetric fluctuators with switching rates log-uniform in [gamma_lo, gamma_hi].
struct EnsembleSpec {
  std::size_t count = 0;
  double gamma_lo = 1e-3;
  double gamma_hi = 1.0;
  double delta_gamma = 0.0;
};

struct RateProcessSpec {
  double gamma_base = 1.0 / 150e-6;
  std::vector<Fluctuator> fluctuators;
  std::optional<EnsembleSpec> ensemble;
};

/// Throws ConfigError on non-positive base rate, negative rates or amplitudes.
void validate(const RateProcessSpec& spec);

/// Draws the ensemble members from `rng` (switching rates only; initial states are set later).
std::vector<Fluctuator> make_ensemble(const EnsembleSpec& spec, CounterRng& rng);

struct SwitchEvent {
  double time_s;
  std::size_t fluctuator;
  bool on;             // state after the switch
  double gamma_after;  // total rate after the switch
};

/// Piecewise-constant Gamma1(t) driven by independent telegraph fluctuators.
///
/// Holding times are exponential; the per-fluctuator next-switch times are merged through a
/// priority queue so evolution is exact between events.
class RateProcess {
 public:
  /// If `stationary_start`, initial states are drawn from each fluctuator's stationary
  /// distribution; otherwise the states in the spec are used.
  RateProcess(const RateProcessSpec& spec, CounterRng rng, bool stationary_start = true);

  /// Advances by `duration` and returns the exact time average of Gamma1 over it.
  /// Switch events inside the interval are appended to `events` when given.
  double evolve(double duration_s, std::vector<SwitchEvent>* events = nullptr);

  double time() const noexcept { return time_; }
  double gamma() const noexcept { return gamma_; }
  double gamma_base() const noexcept { return gamma_base_; }
  const std::vector<Fluctuator>& fluctuators() const noexcept { return fluctuators_; }

 private:
  struct Pending {
    double time;
    std::size_t index;
    bool operator>(const Pending& o) const noexcept {
      return time > o.time || (time == o.time && index > o.index);
    }
  };

  void schedule(std::size_t i);
  double recompute_gamma() const noexcept;

  double gamma_base_;
  std::vector<Fluctuator> fluctuators_;
  CounterRng rng_;
  double time_ = 0.0;
  double gamma_ = 0.0;
  std::priority_queue<Pending, std::vector<Pending>, std::greater<>> queue_;
};

/// Bin-averaged samples of Gamma1(t): entry i is the mean over [i dt, (i + 1) dt).
std::vector<double> sample_binned(RateProcess& process, double dt_s, std::size_t n);

}  // namespace t1track
