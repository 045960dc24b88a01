#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "t1track/estimator.hpp"

namespace t1track {

struct SwitchConfig {
  double interval_s = 0.2;
  double band_lo_s = 100e-6;
  double band_hi_s = 400e-6;
  double min_jump_s = 100e-6;
  double level = 0.975;
  SpamModel spam{0.11, 0.14};
};

struct DetectedSwitch {
  double time_s;      // boundary between the two intervals
  double t1_before_s;  // train means
  double t1_after_s;
};

struct SwitchReport {
  std::size_t intervals = 0;
  std::size_t filtered = 0;    // train mean outside the band
  std::size_t pairs = 0;       // adjacent retained intervals
  std::size_t candidates = 0;  // pairs with a large enough jump
  std::size_t verified = 0;    // both one-sided tests reject
  double duration_s = 0.0;
  double filtered_fraction = 0.0;
  double verified_fraction = 0.0;  // verified / candidates
  double event_rate_hz = 0.0;
  double mean_interevent_s = 0.0;  // inf when no event
  double false_positive_bound_hz = 0.0;  // (1 - level)^2 * pairs / duration
  std::vector<DetectedSwitch> events;
};

/// Splits repetitions into intervals of at least interval_s, uses alternate repetitions as
/// train / test sets, and confirms train-set jumps with Poisson-binomial tests on test shots.
/// Runs must carry their shot records.
SwitchReport detect_switches(std::span<const EstimationRun> runs, const SwitchConfig& cfg = {});

}  // namespace t1track
