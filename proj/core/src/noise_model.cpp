#include "t1track/noise_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "t1track/error.hpp"
#include "t1track/levenberg_marquardt.hpp"

namespace t1track {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kLn2 = std::numbers::ln2;
// Peak of the telegraph Allan variance, at gamma * tau = x.
constexpr double kAllanPeak = 1.8926;

double lorentzian_allan_var(double a, double g, double tau) {
  const double x = g * tau;
  if (x < 0.5) {
    // 2x - 3 + 4e^-x - e^-2x = sum_{n>=3} (-1)^n (4 - 2^n) x^n / n!, free of cancellation.
    double term = 1.0, pow2 = 1.0, sum = 0.0;
    for (int n = 1; n <= 30; ++n) {
      term *= -x / n;
      pow2 *= 2.0;
      if (n >= 3) sum += (4.0 - pow2) * term;
    }
    return a * sum / (x * x);
  }
  return a / (x * x) * (2.0 * x - 3.0 + 4.0 * std::exp(-x) - std::exp(-2.0 * x));
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

struct Binned {
  std::vector<double> f, s;
};

Binned log_bin(const Psd& psd, std::size_t bins) {
  Binned out;
  double fmin = INFINITY, fmax = 0.0;
  for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i) {
    if (psd.freqs_hz[i] > 0.0) {
      fmin = std::min(fmin, psd.freqs_hz[i]);
      fmax = std::max(fmax, psd.freqs_hz[i]);
    }
  }
  if (!(fmax > fmin)) return out;
  const double lmin = std::log(fmin);
  const double width = (std::log(fmax) - lmin) / static_cast<double>(bins);
  std::vector<double> sum_lf(bins, 0.0), sum_s(bins, 0.0);
  std::vector<std::size_t> cnt(bins, 0);
  for (std::size_t i = 0; i < psd.freqs_hz.size(); ++i) {
    const double f = psd.freqs_hz[i];
    if (!(f > 0.0)) continue;
    auto b = static_cast<std::size_t>((std::log(f) - lmin) / width);
    b = std::min(b, bins - 1);
    sum_lf[b] += std::log(f);
    sum_s[b] += psd.values[i];
    ++cnt[b];
  }
  for (std::size_t b = 0; b < bins; ++b) {
    if (cnt[b] == 0) continue;
    const double s = sum_s[b] / static_cast<double>(cnt[b]);
    if (!(s > 0.0)) continue;
    out.f.push_back(std::exp(sum_lf[b] / static_cast<double>(cnt[b])));
    out.s.push_back(s);
  }
  return out;
}

NoiseFitModel unpack(const std::vector<double>& x, std::size_t nl) {
  NoiseFitModel m;
  m.a_w = std::exp(x[0]);
  m.a_1f = std::exp(x[1]);
  for (std::size_t i = 0; i < nl; ++i) m.lorentzians.push_back({std::exp(x[2 + 2 * i]), std::exp(x[3 + 2 * i])});
  return m;
}

struct FitData {
  Binned psd;
  std::vector<double> taus, adev;
  double weight;
};

struct Attempt {
  LmResult res;
  bool ok = false;
};

Attempt run_fit(const FitData& d, std::size_t nl, const std::vector<double>& x0,
                const std::vector<double>& lo, const std::vector<double>& hi) {
  LmProblem prob;
  prob.n_params = 2 + 2 * nl;
  prob.n_residuals = d.psd.f.size() + d.taus.size();
  const double sw = std::sqrt(d.weight);
  prob.residuals = [&d, nl, sw](std::span<const double> x, std::span<double> r) {
    const NoiseFitModel m = unpack({x.begin(), x.end()}, nl);
    std::size_t j = 0;
    for (std::size_t i = 0; i < d.psd.f.size(); ++i) r[j++] = std::log(model_psd(m, d.psd.f[i])) - std::log(d.psd.s[i]);
    for (std::size_t i = 0; i < d.taus.size(); ++i) r[j++] = sw * (std::log(model_allan(m, d.taus[i])) - std::log(d.adev[i]));
  };
  prob.lower = lo;
  prob.upper = hi;
  LmOptions opts;
  opts.max_iterations = 300;
  Attempt a;
  try {
    a.res = levenberg_marquardt(prob, x0, opts);
    a.ok = std::isfinite(a.res.cost);
  } catch (const NumericalError&) {
    a.ok = false;
  }
  return a;
}

NoiseFitModel fit_impl(const FitData& d, std::size_t nl) {
  const double f_lo = d.psd.f.front();
  const double f_hi = d.psd.f.back();
  const std::size_t nb = d.psd.f.size();

  std::vector<double> high, low;
  for (std::size_t i = 0; i < nb; ++i) {
    if (i >= nb - std::max<std::size_t>(1, nb / 5)) high.push_back(d.psd.s[i]);
    if (i < std::max<std::size_t>(1, nb / 10)) low.push_back(d.psd.s[i] * d.psd.f[i]);
  }
  const double s_ref = median(d.psd.s);
  const double aw0 = std::max(median(high), 1e-6 * s_ref);
  const double a1f0 = std::max(0.5 * median(low), 1e-6 * s_ref * f_lo);
  double var_ref = 0.0;
  for (double a : d.adev) var_ref = std::max(var_ref, a * a);
  var_ref = std::max(var_ref, s_ref * f_hi);

  std::vector<double> lo{std::log(aw0 * 1e-8), std::log(a1f0 * 1e-8)};
  std::vector<double> hi{std::log(aw0 * 1e4), std::log(a1f0 * 1e6)};
  const double g_lo = kTwoPi * f_lo / 20.0;
  const double g_hi = kTwoPi * f_hi * 5.0;
  for (std::size_t i = 0; i < nl; ++i) {
    lo.insert(lo.end(), {std::log(var_ref * 1e-10), std::log(g_lo)});
    hi.insert(hi.end(), {std::log(var_ref * 1e3), std::log(g_hi)});
  }

  // Candidate switching rates: Allan local maxima and a log grid.
  std::vector<double> cand;
  for (std::size_t i = 1; i + 1 < d.adev.size(); ++i) {
    if (d.adev[i] > d.adev[i - 1] && d.adev[i] >= d.adev[i + 1]) cand.push_back(kAllanPeak / d.taus[i]);
  }
  for (int i = 0; i < 8; ++i) {
    cand.push_back(kTwoPi * f_lo * std::pow(f_hi / f_lo, (i + 0.5) / 8.0));
  }
  auto amp_guess = [&](double g) {
    const double f = g / kTwoPi;
    std::size_t best = 0;
    for (std::size_t i = 1; i < nb; ++i) {
      if (std::abs(std::log(d.psd.f[i] / f)) < std::abs(std::log(d.psd.f[best] / f))) best = i;
    }
    const double excess = d.psd.s[best] - aw0 - a1f0 / d.psd.f[best];
    return std::max(0.5 * g * excess, 1e-4 * var_ref);
  };
  auto clampv = [&](std::vector<double> x) {
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::clamp(x[i], lo[i], hi[i]);
    return x;
  };

  std::vector<std::vector<double>> starts;
  const std::vector<double> base{std::log(aw0), std::log(a1f0)};
  if (nl == 0) {
    starts.push_back(base);
    starts.push_back({std::log(aw0), std::log(a1f0 * 1e-4)});
  } else if (nl == 1) {
    for (double g : cand) {
      std::vector<double> x = base;
      x.insert(x.end(), {std::log(amp_guess(g)), std::log(g)});
      starts.push_back(x);
    }
  } else {
    for (std::size_t a = 0; a < cand.size(); ++a) {
      for (std::size_t b = a + 1; b < cand.size(); ++b) {
        if (std::abs(std::log(cand[a] / cand[b])) < 0.5) continue;
        std::vector<double> x = base;
        x.insert(x.end(), {std::log(amp_guess(cand[a])), std::log(cand[a])});
        x.insert(x.end(), {std::log(amp_guess(cand[b])), std::log(cand[b])});
        starts.push_back(x);
      }
    }
  }

  Attempt best;
  for (const auto& s : starts) {
    Attempt a = run_fit(d, nl, clampv(s), lo, hi);
    if (a.ok && (!best.ok || a.res.cost < best.res.cost)) best = std::move(a);
  }
  if (!best.ok) throw FitDiverged("fit_noise_model: no start converged");

  NoiseFitModel m = unpack(best.res.x, nl);
  std::sort(m.lorentzians.begin(), m.lorentzians.end(),
            [](const Lorentzian& a, const Lorentzian& b) { return a.gamma > b.gamma; });
  m.cost = best.res.cost;
  const std::size_t np = 2 + 2 * nl;
  const std::size_t nr = best.res.residuals.size();
  const double s2 = nr > np ? 2.0 * best.res.cost / static_cast<double>(nr - np) : 0.0;
  auto sd = [&](std::size_t i) {
    if (best.res.covariance.empty()) return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(std::max(best.res.covariance[i * np + i] * s2, 0.0));
  };
  m.a_w_std = m.a_w * sd(0);
  m.a_1f_std = m.a_1f * sd(1);
  std::vector<std::pair<Lorentzian, Lorentzian>> pairs;
  for (std::size_t i = 0; i < nl; ++i) {
    const Lorentzian v{std::exp(best.res.x[2 + 2 * i]), std::exp(best.res.x[3 + 2 * i])};
    pairs.push_back({v, {v.amplitude * sd(2 + 2 * i), v.gamma * sd(3 + 2 * i)}});
  }
  std::sort(pairs.begin(), pairs.end(), [](const auto& a, const auto& b) { return a.first.gamma > b.first.gamma; });
  for (const auto& p : pairs) m.lorentzian_std.push_back(p.second);

  double rp = 0.0, ra = 0.0;
  for (std::size_t i = 0; i < nb; ++i) rp += best.res.residuals[i] * best.res.residuals[i];
  for (std::size_t i = nb; i < nr; ++i) ra += best.res.residuals[i] * best.res.residuals[i] / d.weight;
  m.psd_residual = std::sqrt(rp / static_cast<double>(nb));
  m.allan_residual = d.taus.empty() ? 0.0 : std::sqrt(ra / static_cast<double>(d.taus.size()));
  return m;
}

}  // namespace

double lorentzian_allan(double amplitude, double gamma, double tau_s) {
  return std::sqrt(std::max(lorentzian_allan_var(amplitude, gamma, tau_s), 0.0));
}

double model_psd(const NoiseFitModel& m, double f_hz) {
  double s = m.a_w + m.a_1f / f_hz;
  const double w = kTwoPi * f_hz;
  for (const Lorentzian& l : m.lorentzians) s += 4.0 * l.amplitude * l.gamma / (l.gamma * l.gamma + w * w);
  return s;
}

double model_allan(const NoiseFitModel& m, double tau_s, bool as_printed) {
  if (as_printed) {
    double d = std::sqrt(m.a_w / tau_s) + std::sqrt(2.0 * m.a_1f * kLn2);
    for (const Lorentzian& l : m.lorentzians) {
      const double x = l.gamma * tau_s;
      const double e = std::exp(-x) - 2.0;
      d += std::sqrt(l.amplitude) * x * std::sqrt(std::max(2.0 * x + 1.0 - e * e, 0.0));
    }
    return d;
  }
  double v = m.a_w / (2.0 * tau_s) + 2.0 * kLn2 * m.a_1f;
  for (const Lorentzian& l : m.lorentzians) v += lorentzian_allan_var(l.amplitude, l.gamma, tau_s);
  return std::sqrt(std::max(v, 0.0));
}

NoiseFitModel fit_noise_model(const Psd& psd, const std::vector<AllanPoint>& allan, const NoiseFitOptions& opts) {
  if (opts.n_lorentzians > 2) throw ConfigError("fit_noise_model: at most two Lorentzians");
  if (psd.freqs_hz.size() != psd.values.size()) throw ConfigError("fit_noise_model: malformed PSD");
  if (!(opts.allan_weight >= 0.0) || opts.psd_bins < 2) throw ConfigError("fit_noise_model: invalid options");

  FitData d;
  d.psd = log_bin(psd, opts.psd_bins);
  d.weight = opts.allan_weight;
  for (const AllanPoint& a : allan) {
    if (a.adev > 0.0 && a.tau_s > 0.0) {
      d.taus.push_back(a.tau_s);
      d.adev.push_back(a.adev);
    }
  }
  const std::size_t np = 2 + 2 * opts.n_lorentzians;
  if (d.psd.f.empty() && d.taus.empty()) {
    NoiseFitModel m;
    m.degenerate = true;
    m.lorentzians.assign(opts.n_lorentzians, {0.0, 0.0});
    m.lorentzian_std.assign(opts.n_lorentzians, {0.0, 0.0});
    return m;
  }
  if (d.psd.f.size() < 2 || d.psd.f.size() + d.taus.size() <= np) {
    throw InsufficientData("fit_noise_model: too few usable PSD / Allan points");
  }

  NoiseFitModel m = fit_impl(d, opts.n_lorentzians);
  if (opts.check_model_selection && opts.n_lorentzians > 0) {
    try {
      const NoiseFitModel fewer = fit_impl(d, opts.n_lorentzians - 1);
      m.model_selection_ambiguous = m.cost > 0.95 * fewer.cost;
    } catch (const NumericalError&) {
    }
  }
  return m;
}

std::vector<WindowResult> windowed_analysis(const UniformTrace& trace, double window_s, double overlap,
                                            NoiseFitOptions opts) {
  if (!(overlap >= 0.0 && overlap < 1.0)) throw ConfigError("windowed_analysis: overlap in [0, 1)");
  if (!(window_s > 0.0) || window_s > trace.duration() * (1.0 + 1e-12)) {
    throw ConfigError("windowed_analysis: window must fit in the trace");
  }
  const auto len = static_cast<std::size_t>(std::llround(window_s / trace.dt_s));
  const std::size_t step = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(len * (1.0 - overlap))));
  std::vector<WindowResult> out;
  for (std::size_t start = 0; start + len <= trace.size(); start += step) {
    WindowResult w;
    w.start_s = static_cast<double>(start) * trace.dt_s;
    UniformTrace sub;
    sub.dt_s = trace.dt_s;
    sub.values.assign(trace.values.begin() + static_cast<std::ptrdiff_t>(start),
                      trace.values.begin() + static_cast<std::ptrdiff_t>(start + len));
    try {
      w.psd = welch_psd(sub);
      w.allan = allan_deviation(sub, allan_taus(sub));
      w.fit = fit_noise_model(w.psd, w.allan, opts);
    } catch (const NumericalError& e) {
      w.error = e.what();
    }
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace t1track
