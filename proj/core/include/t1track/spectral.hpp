#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "t1track/rng.hpp"

namespace t1track {

/// Uniformly sampled series, e.g. T1_hat per repetition.
struct UniformTrace {
  std::vector<double> values;
  double dt_s = 1.0;
  std::vector<double> stds;  // optional per-sample posterior std, same length when present

  std::size_t size() const noexcept { return values.size(); }
  double duration() const noexcept { return static_cast<double>(values.size()) * dt_s; }
};

inline constexpr std::size_t kMinSpectralLength = 16;

struct WelchOptions {
  std::size_t segment_len = 0;  // 0 = length / 8
  double overlap = 0.5;
  enum class Window { kHann, kRectangular } window = Window::kHann;
};

/// One-sided spectrum; freqs[0] = 0.
struct Psd {
  std::vector<double> freqs_hz;
  std::vector<double> values;
};

/// Welch averaged periodogram with per-segment mean removal, normalized so that
/// sum(S) * df matches the variance. Throws TraceTooShort or ConfigError.
Psd welch_psd(const UniformTrace& trace, const WelchOptions& opts = {});

struct AllanPoint {
  double tau_s;
  double adev;
  std::size_t n_samples;  // number of overlapped differences
};

/// Overlapped Allan deviation. Each tau must be a multiple of dt with tau <= duration / 3.
/// Throws TraceTooShort or ConfigError.
std::vector<AllanPoint> allan_deviation(const UniformTrace& trace, std::span<const double> taus_s);

/// Log-spaced averaging times from dt to duration / 3, rounded to distinct multiples of dt.
std::vector<double> allan_taus(const UniformTrace& trace, std::size_t points_per_decade = 8);

/// Gaussian series whose one-sided PSD is `psd(f)` on the FFT grid (DC set to zero).
std::vector<double> synthesize_from_psd(const std::function<double(double)>& psd, std::size_t n,
                                        double dt_s, CounterRng& rng);

}  // namespace t1track
