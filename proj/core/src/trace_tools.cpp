#include "t1track/trace_tools.hpp"

#include <algorithm>
#include <cmath>

#include "t1track/error.hpp"

namespace t1track {

UniformTrace resample_uniform(std::span<const double> times_s, std::span<const double> values,
                              std::span<const double> stds) {
  const std::size_t n = times_s.size();
  if (values.size() != n || (!stds.empty() && stds.size() != n)) {
    throw ConfigError("resample_uniform: length mismatch");
  }
  if (n < 2) throw TraceTooShort("resample_uniform: need at least 2 samples");
  if (!std::is_sorted(times_s.begin(), times_s.end())) throw ConfigError("resample_uniform: times not sorted");
  const double t0 = times_s.front();
  const double dt = (times_s.back() - t0) / static_cast<double>(n - 1);
  if (!(dt > 0.0)) throw ConfigError("resample_uniform: zero time span");

  UniformTrace out;
  out.dt_s = dt;
  out.values.resize(n);
  if (!stds.empty()) out.stds.resize(n);
  std::size_t j = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double t = t0 + static_cast<double>(i) * dt;
    while (j + 1 < n && std::abs(times_s[j + 1] - t) <= std::abs(times_s[j] - t)) ++j;
    out.values[i] = values[j];
    if (!stds.empty()) out.stds[i] = stds[j];
  }
  return out;
}

UniformTrace trace_from_runs(std::span<const EstimationRun> runs) {
  std::vector<double> t, v, s;
  for (const EstimationRun& r : runs) {
    if (r.aborted) continue;
    t.push_back(r.end_lab_time_s);
    v.push_back(r.final_posterior.t1_hat());
    s.push_back(r.final_posterior.t1_std());
  }
  return resample_uniform(t, v, s);
}

MovingBand moving_mean_band(const UniformTrace& trace, std::size_t window) {
  if (window == 0) throw ConfigError("moving_mean_band: window must be >= 1");
  const std::size_t n = trace.size();
  if (trace.stds.size() != n) throw ConfigError("moving_mean_band: trace has no per-sample std");
  std::vector<double> cv(n + 1, 0.0), cs(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    cv[i + 1] = cv[i] + trace.values[i];
    cs[i + 1] = cs[i] + trace.stds[i];
  }
  MovingBand band;
  band.mean.resize(n);
  band.lo.resize(n);
  band.hi.resize(n);
  const std::size_t back = (window - 1) / 2;
  const std::size_t fwd = window - 1 - back;
  const double root = std::sqrt(static_cast<double>(window));
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t b = i >= back ? i - back : 0;
    const std::size_t e = std::min(n, i + fwd + 1);
    const double cnt = static_cast<double>(e - b);
    const double m = (cv[e] - cv[b]) / cnt;
    const double se = (cs[e] - cs[b]) / cnt / root;
    band.mean[i] = m;
    band.lo[i] = m - se;
    band.hi[i] = m + se;
  }
  return band;
}

}  // namespace t1track
