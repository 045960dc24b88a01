#include "t1track/exp_fit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "t1track/error.hpp"
#include "t1track/levenberg_marquardt.hpp"

namespace t1track {

void SweepConfig::validate() const {
  if (!(tau0_s > 0.0)) throw ConfigError("sweep: tau0 must be positive");
  if (n_points < 3) throw ConfigError("sweep: need at least 3 points");
}

namespace {

struct Initial {
  double offset, amplitude, rate;
};

Initial initial_guess(std::span<const double> t, std::span<const double> y) {
  const std::size_t n = t.size();
  const std::size_t tail = std::max<std::size_t>(1, n / 10);
  double offset = 0.0;
  for (std::size_t i = n - tail; i < n; ++i) offset += y[i];
  offset /= static_cast<double>(tail);
  double amplitude = y[0] - offset;

  // Log-linear regression of the de-offset curve over points still clearly above the tail.
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t m = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = y[i] - offset;
    if (d <= 0.05 * std::max(amplitude, 1e-3)) continue;
    const double ly = std::log(d);
    sx += t[i];
    sy += ly;
    sxx += t[i] * t[i];
    sxy += t[i] * ly;
    ++m;
  }
  double rate = 0.0;
  if (m >= 2) {
    const double denom = static_cast<double>(m) * sxx - sx * sx;
    if (denom > 0.0) rate = -(static_cast<double>(m) * sxy - sx * sy) / denom;
  }
  if (!(rate > 0.0)) rate = 3.0 / t[n - 1];
  amplitude = std::clamp(amplitude, 1e-3, 1.0);
  offset = std::clamp(offset, 0.0, 1.0);
  return {offset, amplitude, rate};
}

ExpFitResult fit_weighted(std::span<const double> t, std::span<const double> y,
                          std::span<const double> sigma) {
  const std::size_t n = t.size();
  if (n < 3) throw InsufficientData("exp fit: need at least 3 points");
  const Initial init = initial_guess(t, y);
  const double tscale = t[n - 1];

  // Parameters: offset, amplitude, rate * tscale.
  LmProblem prob;
  prob.n_params = 3;
  prob.n_residuals = n;
  prob.residuals = [&](std::span<const double> x, std::span<double> r) {
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = (x[0] + x[1] * std::exp(-x[2] * t[i] / tscale) - y[i]) / sigma[i];
    }
  };
  prob.jacobian = [&](std::span<const double> x, std::span<double> j) {
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::exp(-x[2] * t[i] / tscale);
      j[3 * i + 0] = 1.0 / sigma[i];
      j[3 * i + 1] = e / sigma[i];
      j[3 * i + 2] = -x[1] * e * t[i] / tscale / sigma[i];
    }
  };
  prob.lower = {0.0, 1e-9, 1e-9};
  prob.upper = {1.0, 1.0, 1e6};

  LmOptions opts;
  opts.max_iterations = 500;
  const LmResult res = levenberg_marquardt(prob, {init.offset, init.amplitude, init.rate * tscale}, opts);
  if (res.covariance.empty()) throw FitDiverged("exp fit: singular normal matrix");
  const double rate = res.x[2] / tscale;
  if (!(rate > 1e-9 / tscale) || !std::isfinite(rate)) throw FitDiverged("exp fit: non-positive rate");

  ExpFitResult out;
  out.offset = res.x[0];
  out.amplitude = res.x[1];
  out.gamma1_per_s = rate;
  out.offset_std = std::sqrt(std::max(res.covariance[0], 0.0));
  out.amplitude_std = std::sqrt(std::max(res.covariance[4], 0.0));
  out.gamma1_std = std::sqrt(std::max(res.covariance[8], 0.0)) / tscale;
  out.t1_s = 1.0 / rate;
  out.t1_std_s = out.gamma1_std / (rate * rate);
  out.beta = out.offset;
  out.alpha = 1.0 - out.offset - out.amplitude;
  double rn = 0.0;
  for (double r : res.residuals) rn += r * r;
  out.residual_norm = std::sqrt(rn);
  out.iterations = res.iterations;
  return out;
}

}  // namespace

ExpFitResult fit_fractions(const SweepData& data) {
  const std::size_t n = data.taus_s.size();
  if (data.excited.size() != n || data.shots.size() != n) {
    throw ConfigError("exp fit: inconsistent sweep data");
  }
  std::vector<double> t, y, s;
  for (std::size_t i = 0; i < n; ++i) {
    if (data.shots[i] == 0) continue;
    const double shots = static_cast<double>(data.shots[i]);
    const double k = static_cast<double>(data.excited[i]);
    // Shrunk estimate keeps the weight finite for all-0 or all-1 points.
    const double p = (k + 0.5) / (shots + 1.0);
    t.push_back(data.taus_s[i]);
    y.push_back(k / shots);
    s.push_back(std::sqrt(p * (1.0 - p) / shots));
  }
  if (t.size() < 3) throw InsufficientData("exp fit: fewer than 3 populated sweep points");
  return fit_weighted(t, y, s);
}

ExpFitResult fit_curve(std::span<const double> taus_s, std::span<const double> fractions) {
  if (taus_s.size() != fractions.size()) throw ConfigError("exp fit: size mismatch");
  const std::vector<double> ones(taus_s.size(), 1.0);
  return fit_weighted(taus_s, fractions, ones);
}

SweepData collect_sweep(MeasurementSource& source, const SweepConfig& cfg) {
  cfg.validate();
  SweepData data;
  data.taus_s.resize(cfg.n_points);
  data.excited.assign(cfg.n_points, 0);
  data.shots.assign(cfg.n_points, 0);
  for (std::size_t i = 0; i < cfg.n_points; ++i) data.taus_s[i] = cfg.tau(i);
  auto shoot = [&](std::size_t i) {
    data.excited[i] += static_cast<std::uint64_t>(to_int(source.measure(data.taus_s[i]).outcome));
    ++data.shots[i];
  };
  if (cfg.order == SweepConfig::Order::kSequential) {
    for (std::size_t i = 0; i < cfg.n_points; ++i) {
      for (std::size_t r = 0; r < cfg.reps_per_point; ++r) shoot(i);
    }
  } else {
    for (std::size_t r = 0; r < cfg.reps_per_point; ++r) {
      for (std::size_t i = 0; i < cfg.n_points; ++i) shoot(i);
    }
  }
  return data;
}

ExpFitResult sweep_and_fit(MeasurementSource& source, const SweepConfig& cfg) {
  return fit_fractions(collect_sweep(source, cfg));
}

}  // namespace t1track
