#pragma once

namespace t1track {

/// Principal branch W0 of the Lambert W function, x >= -1/e.
/// Throws DomainError below the branch point.
double lambert_w0(double x);

/// Regularized lower incomplete gamma P(a, x), a > 0, x >= 0.
double regularized_gamma_p(double a, double x);

/// Regularized upper incomplete gamma Q(a, x) = 1 - P(a, x), evaluated without cancellation.
double regularized_gamma_q(double a, double x);

/// Inverse of P(a, .): returns x with P(a, x) = p.
/// Halley steps inside a maintained bracket, bisection when a step leaves it.
double gamma_p_inverse(double a, double p, double prob_tol = 1e-10);

/// log of the gamma density with shape k and rate theta at x > 0.
double log_gamma_density(double x, double shape, double rate);

double standard_normal_pdf(double x);
/// Upper tail 1 - Phi(x), accurate for large positive x.
double standard_normal_sf(double x);
double standard_normal_cdf(double x);

}  // namespace t1track
