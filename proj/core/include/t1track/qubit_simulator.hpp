#pragma once

#include <cstdint>
#include <vector>

#include "t1track/estimator.hpp"
#include "t1track/gamma_posterior.hpp"
#include "t1track/rate_process.hpp"
#include "t1track/rng.hpp"

namespace t1track {

/// Lab clock; each probe costs tau plus the fixed per-cycle overhead.
struct ShotClock {
  double lab_time_s = 0.0;
  double idle_s = 0.0;  // init + readout + update
};

struct TrajectoryPoint {
  double time_s;
  double gamma1_per_s;
};

/// Simulated qubit with a fluctuating decay rate and imperfect readout.
///
/// Decay over a wait uses the exact time-averaged rate over that wait; fluctuators keep
/// evolving during the idle part of each cycle.
class SimulatedQubit final : public MeasurementSource {
 public:
  SimulatedQubit(const RateProcessSpec& process, SpamModel spam, double idle_s, std::uint64_t seed,
                 bool record_trajectory = false);

  Shot measure(double tau_s) override;
  double lab_time() const override { return clock_.lab_time_s; }

  /// Lets the lab clock (and the fluctuators) run without probing.
  void idle(double duration_s);

  const SpamModel& spam() const noexcept { return spam_; }
  const ShotClock& clock() const noexcept { return clock_; }
  const RateProcess& process() const noexcept { return process_; }
  /// Time-averaged rate seen by the most recent wait.
  double last_mean_gamma() const noexcept { return last_mean_gamma_; }
  /// Ground-truth Gamma1(t): initial value followed by one point per switch.
  const std::vector<TrajectoryPoint>& trajectory() const noexcept { return trajectory_; }

 private:
  void advance(double duration_s, double* mean_gamma);

  RateProcess process_;
  SpamModel spam_;
  ShotClock clock_;
  CounterRng shot_rng_;
  bool record_;
  double last_mean_gamma_ = 0.0;
  std::vector<TrajectoryPoint> trajectory_;
  std::vector<SwitchEvent> scratch_;
};

/// Draws one outcome with P(m = 1) = beta + (1 - alpha - beta) * survival.
Outcome sample_outcome(double survival, const SpamModel& spam, CounterRng& rng);

}  // namespace t1track
