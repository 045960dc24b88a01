#include "t1track/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <set>

#include <fftw3.h>

#include "t1track/error.hpp"

namespace t1track {

namespace {

// FFTW planning is not thread safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

class RealFft {
 public:
  explicit RealFft(std::size_t n) : n_(n) {
    in_ = fftw_alloc_real(n);
    out_ = fftw_alloc_complex(n / 2 + 1);
    std::lock_guard lock(plan_mutex());
    plan_ = fftw_plan_dft_r2c_1d(static_cast<int>(n), in_, out_, FFTW_ESTIMATE);
  }
  ~RealFft() {
    {
      std::lock_guard lock(plan_mutex());
      fftw_destroy_plan(plan_);
    }
    fftw_free(in_);
    fftw_free(out_);
  }
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  double* input() noexcept { return in_; }
  void execute() noexcept { fftw_execute(plan_); }
  double power(std::size_t k) const noexcept { return out_[k][0] * out_[k][0] + out_[k][1] * out_[k][1]; }

 private:
  std::size_t n_;
  double* in_;
  fftw_complex* out_;
  fftw_plan plan_;
};

}  // namespace

Psd welch_psd(const UniformTrace& trace, const WelchOptions& opts) {
  const std::size_t n = trace.size();
  if (n < kMinSpectralLength) throw TraceTooShort("welch_psd: trace shorter than 16 samples");
  if (!(trace.dt_s > 0.0)) throw ConfigError("welch_psd: dt must be positive");
  if (!(opts.overlap >= 0.0 && opts.overlap < 1.0)) throw ConfigError("welch_psd: overlap in [0, 1)");
  const std::size_t seg = opts.segment_len ? opts.segment_len : std::max<std::size_t>(n / 8, 2);
  if (seg > n || seg < 2) throw TraceTooShort("welch_psd: segment longer than trace");
  const std::size_t step = std::max<std::size_t>(1, static_cast<std::size_t>(std::floor(seg * (1.0 - opts.overlap))));

  std::vector<double> w(seg, 1.0);
  if (opts.window == WelchOptions::Window::kHann) {
    for (std::size_t i = 0; i < seg; ++i) {
      w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(seg));
    }
  }
  double u = 0.0;
  for (double v : w) u += v * v;

  const std::size_t nf = seg / 2 + 1;
  Psd out;
  out.values.assign(nf, 0.0);
  out.freqs_hz.resize(nf);
  for (std::size_t k = 0; k < nf; ++k) out.freqs_hz[k] = static_cast<double>(k) / (seg * trace.dt_s);

  RealFft fft(seg);
  std::size_t count = 0;
  for (std::size_t start = 0; start + seg <= n; start += step) {
    double mean = 0.0;
    for (std::size_t i = 0; i < seg; ++i) mean += trace.values[start + i];
    mean /= static_cast<double>(seg);
    for (std::size_t i = 0; i < seg; ++i) fft.input()[i] = (trace.values[start + i] - mean) * w[i];
    fft.execute();
    for (std::size_t k = 0; k < nf; ++k) out.values[k] += fft.power(k);
    ++count;
  }
  const double scale = trace.dt_s / (u * static_cast<double>(count));
  for (std::size_t k = 0; k < nf; ++k) {
    const bool edge = k == 0 || (seg % 2 == 0 && k == nf - 1);
    out.values[k] *= scale * (edge ? 1.0 : 2.0);
  }
  return out;
}

std::vector<AllanPoint> allan_deviation(const UniformTrace& trace, std::span<const double> taus_s) {
  const std::size_t n = trace.size();
  if (n < 3) throw TraceTooShort("allan_deviation: need at least 3 samples");
  if (!(trace.dt_s > 0.0)) throw ConfigError("allan_deviation: dt must be positive");
  std::vector<double> cum(n + 1, 0.0);
  // Offset by the first sample to limit round-off in the running sums.
  const double ref = trace.values[0];
  for (std::size_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + (trace.values[i] - ref);

  std::vector<AllanPoint> out;
  out.reserve(taus_s.size());
  for (double tau : taus_s) {
    const double mr = tau / trace.dt_s;
    const auto m = static_cast<std::size_t>(std::llround(mr));
    if (m < 1 || std::abs(mr - static_cast<double>(m)) > 1e-6 * mr) {
      throw ConfigError("allan_deviation: tau must be a multiple of dt");
    }
    if (3 * m > n) throw TraceTooShort("allan_deviation: tau exceeds a third of the trace");
    const double inv_m = 1.0 / static_cast<double>(m);
    const std::size_t terms = n - 2 * m + 1;
    double acc = 0.0;
    for (std::size_t j = 0; j < terms; ++j) {
      const double y0 = (cum[j + m] - cum[j]) * inv_m;
      const double y1 = (cum[j + 2 * m] - cum[j + m]) * inv_m;
      acc += (y1 - y0) * (y1 - y0);
    }
    out.push_back({static_cast<double>(m) * trace.dt_s, std::sqrt(acc / (2.0 * static_cast<double>(terms))), terms});
  }
  return out;
}

std::vector<double> allan_taus(const UniformTrace& trace, std::size_t points_per_decade) {
  const std::size_t mmax = trace.size() / 3;
  if (mmax < 1) throw TraceTooShort("allan_taus: trace too short");
  std::set<std::size_t> ms;
  const double decades = std::log10(static_cast<double>(mmax));
  const auto steps = static_cast<std::size_t>(std::ceil(decades * static_cast<double>(points_per_decade)));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double m = std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(std::max<std::size_t>(steps, 1)));
    ms.insert(std::clamp<std::size_t>(static_cast<std::size_t>(std::llround(m)), 1, mmax));
  }
  std::vector<double> taus;
  for (std::size_t m : ms) taus.push_back(static_cast<double>(m) * trace.dt_s);
  return taus;
}

std::vector<double> synthesize_from_psd(const std::function<double(double)>& psd, std::size_t n,
                                        double dt_s, CounterRng& rng) {
  if (n < 2 || !(dt_s > 0.0)) throw ConfigError("synthesize_from_psd: need n >= 2 and dt > 0");
  const std::size_t nf = n / 2 + 1;
  fftw_complex* spec = fftw_alloc_complex(nf);
  double* out = fftw_alloc_real(n);
  fftw_plan plan;
  {
    std::lock_guard lock(plan_mutex());
    plan = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec, out, FFTW_ESTIMATE);
  }
  const double nn = static_cast<double>(n);
  spec[0][0] = spec[0][1] = 0.0;
  for (std::size_t k = 1; k < nf; ++k) {
    const double f = static_cast<double>(k) / (nn * dt_s);
    const double s = std::max(psd(f), 0.0);
    if (n % 2 == 0 && k == nf - 1) {
      spec[k][0] = std::sqrt(s * nn / dt_s) * rng.normal();
      spec[k][1] = 0.0;
    } else {
      const double amp = std::sqrt(s * nn / (4.0 * dt_s));
      spec[k][0] = amp * rng.normal();
      spec[k][1] = amp * rng.normal();
    }
  }
  fftw_execute(plan);
  std::vector<double> x(out, out + n);
  for (double& v : x) v /= nn;
  {
    std::lock_guard lock(plan_mutex());
    fftw_destroy_plan(plan);
  }
  fftw_free(spec);
  fftw_free(out);
  return x;
}

}  // namespace t1track
