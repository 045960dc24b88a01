#include "t1track/special_functions.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "t1track/error.hpp"

namespace t1track {
namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();
constexpr int kMaxIter = 500;

double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < kMaxIter; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Modified Lentz evaluation of the continued fraction for Q(a, x).
double gamma_q_continued_fraction(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

}  // namespace

double lambert_w0(double x) {
  constexpr double branch = -1.0 / std::numbers::e;
  if (std::isnan(x)) throw DomainError("lambert_w0: NaN argument");
  // Allow a few ulps below -1/e so that a rounded branch-point argument still maps to -1.
  if (x < branch - 4.0 * kEps) throw DomainError("lambert_w0: argument below -1/e");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  double w;
  const double q = x - branch;
  if (q <= 0.0) return -1.0;
  if (q < 0.3) {
    // Branch-point series in p = sqrt(2(e x + 1)).
    const double p = std::sqrt(2.0 * std::numbers::e * q);
    w = -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0 + p * (-43.0 / 540.0))));
  } else if (x < 3.0) {
    w = std::log1p(x);
    w = w * (1.0 - std::log1p(w) / (2.0 + w));
  } else {
    const double l1 = std::log(x);
    const double l2 = std::log(l1);
    w = l1 - l2 + l2 / l1;
  }

  for (int i = 0; i < 64; ++i) {
    const double ew = std::exp(w);
    const double f = w * ew - x;
    const double wp1 = w + 1.0;
    if (wp1 == 0.0) break;
    const double denom = ew * wp1 - (w + 2.0) * f / (2.0 * wp1);
    const double step = f / denom;
    w -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(w))) break;
  }
  return w;
}

double regularized_gamma_p(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw DomainError("regularized_gamma_p: need a > 0, x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (x < a + 1.0) return gamma_p_series(a, x);
  return 1.0 - gamma_q_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
  if (!(a > 0.0) || x < 0.0 || std::isnan(x)) throw DomainError("regularized_gamma_q: need a > 0, x >= 0");
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_continued_fraction(a, x);
}

double log_gamma_density(double x, double shape, double rate) {
  return shape * std::log(rate) - std::lgamma(shape) + (shape - 1.0) * std::log(x) - rate * x;
}

double gamma_p_inverse(double a, double p, double prob_tol) {
  if (!(a > 0.0)) throw DomainError("gamma_p_inverse: shape must be positive");
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("gamma_p_inverse: probability outside [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return std::numeric_limits<double>::infinity();

  // Bracket the root.
  double lo = 0.0;
  double hi = std::max(1.0, a);
  while (regularized_gamma_p(a, hi) < p) {
    lo = hi;
    hi *= 2.0;
  }

  // Wilson-Hilferty starting point, clipped into the bracket.
  double x;
  {
    const double t = 1.0 / (9.0 * a);
    // Rational approximation of the normal quantile; only a starting value.
    const double pp = p < 0.5 ? p : 1.0 - p;
    const double s = std::sqrt(-2.0 * std::log(pp));
    double zq = s - (2.515517 + 0.802853 * s + 0.010328 * s * s) /
                        (1.0 + 1.432788 * s + 0.189269 * s * s + 0.001308 * s * s * s);
    if (p < 0.5) zq = -zq;
    const double base = 1.0 - t + zq * std::sqrt(t);
    x = base > 0.0 ? a * base * base * base : 0.5 * (lo + hi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
  }

  const double lga = std::lgamma(a);
  for (int i = 0; i < 200; ++i) {
    const double f = regularized_gamma_p(a, x) - p;
    if (std::abs(f) <= prob_tol * 1e-3 * std::min(p, 1.0 - p)) break;
    if (f > 0.0) hi = x; else lo = x;
    const double log_pdf = (a - 1.0) * std::log(x) - x - lga;
    const double pdf = std::exp(log_pdf);
    double next = x;
    if (pdf > 0.0 && std::isfinite(pdf)) {
      const double newton = f / pdf;
      // Halley correction: d(log pdf)/dx = (a - 1)/x - 1
      const double curv = (a - 1.0) / x - 1.0;
      const double denom = 1.0 - 0.5 * newton * curv;
      next = x - (std::abs(denom) > 0.1 ? newton / denom : newton);
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 1e-15 * x) {
      x = next;
      break;
    }
    x = next;
  }
  return x;
}

double standard_normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

double standard_normal_sf(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double standard_normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

}  // namespace t1track
