#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "t1track/estimator.hpp"
#include "t1track/spectral.hpp"

namespace t1track {

/// Resamples by nearest-sample assignment onto the mean sampling period.
/// `stds` may be empty. Throws TraceTooShort for fewer than 2 samples.
UniformTrace resample_uniform(std::span<const double> times_s, std::span<const double> values,
                              std::span<const double> stds = {});

/// T1_hat and its std at the end of each non-aborted repetition, resampled uniformly.
UniformTrace trace_from_runs(std::span<const EstimationRun> runs);

struct MovingBand {
  std::vector<double> mean;
  std::vector<double> lo;  // mean - movmean(std) / sqrt(window)
  std::vector<double> hi;
};

/// Centered moving mean (window shrinks at the ends). Requires trace.stds.
MovingBand moving_mean_band(const UniformTrace& trace, std::size_t window);

}  // namespace t1track
