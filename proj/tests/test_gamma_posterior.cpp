#include <cmath>

#include <boost/math/special_functions/gamma.hpp>
#include <gtest/gtest.h>

#include "t1track/error.hpp"
#include "t1track/gamma_posterior.hpp"
#include "t1track/numerics.hpp"
#include "t1track/rng.hpp"
#include "t1track/special_functions.hpp"

using namespace t1track;

namespace {

constexpr double kUs = 1e-6;

struct Moments {
  double mean, var;
};

// Posterior mean / variance of the rate by direct quadrature of prior x likelihood.
Moments quadrature_moments(const GammaPosterior& prior, Outcome m, double tau, const SpamModel& spam) {
  const double hi = 60.0 / prior.theta() * std::max(1.0, prior.k() / 3.0);
  auto w = [&](double x) { return prior.pdf(x) * likelihood(m, x, tau, spam); };
  QuadratureOptions o{1e-14, 1e-13, 5000};
  const double z = integrate(w, 0.0, hi, o).value;
  const double m1 = integrate([&](double x) { return x * w(x); }, 0.0, hi, o).value / z;
  const double m2 = integrate([&](double x) { return (x - m1) * (x - m1) * w(x); }, 0.0, hi, o).value / z;
  return {m1, m2};
}

}  // namespace

TEST(Likelihood, Values) {
  const SpamModel none;
  EXPECT_DOUBLE_EQ(likelihood(Outcome::kExcited, 1e4, 0.0, none), 1.0);
  const SpamModel s1(0.105, 0.14);
  EXPECT_NEAR(likelihood(Outcome::kExcited, 1.0, 1.0, s1), 0.14 + (1 - 0.105 - 0.14) * std::exp(-1.0), 1e-15);
  EXPECT_NEAR(likelihood(Outcome::kExcited, 1.0, 1.0, s1), 0.418, 5e-4);
  const SpamModel s2(0.11, 0.14);
  EXPECT_NEAR(likelihood(Outcome::kGround, 1.0 / (100 * kUs), 100 * kUs, s2), 1.0 - (0.14 + 0.75 * std::exp(-1.0)), 1e-15);
}

TEST(Likelihood, Normalization) {
  CounterRng r(3);
  for (int i = 0; i < 5000; ++i) {
    const double a = 0.45 * r.uniform(), b = 0.45 * r.uniform();
    const SpamModel s(a, b);
    const double g = 1e5 * r.uniform(), t = 1e-3 * r.uniform();
    const double p0 = likelihood(Outcome::kGround, g, t, s);
    const double p1 = likelihood(Outcome::kExcited, g, t, s);
    EXPECT_NEAR(p0 + p1, 1.0, 1e-15);
    EXPECT_GE(p0, 0.0);
    EXPECT_GE(p1, 0.0);
  }
}

TEST(SpamModel, RejectsInvalid) {
  EXPECT_THROW(SpamModel(0.6, 0.5), ConfigError);
  EXPECT_THROW(SpamModel(-0.1, 0.0), ConfigError);
  EXPECT_THROW(SpamModel(1.0, 0.0), ConfigError);
}

TEST(GammaPosterior, Basics) {
  const GammaPosterior p(3.0, 450 * kUs);
  EXPECT_NEAR(p.t1_hat(), 150 * kUs, 1e-18);
  EXPECT_NEAR(p.t1_std(), 450 * kUs / std::pow(3.0, 1.5), 1e-18);
  EXPECT_NEAR(p.mean_rate(), 3.0 / (450 * kUs), 1e-9);
  EXPECT_THROW(GammaPosterior(0.0, 1.0), DomainError);
  EXPECT_THROW(GammaPosterior(1.0, -1.0), DomainError);
  EXPECT_THROW(GammaPosterior(NAN, 1.0), DomainError);
}

TEST(GammaPosterior, PdfIntegratesToOne) {
  for (double k : {1.0, 3.0, 12.5, 50.0}) {
    const GammaPosterior p(k, 300 * kUs);
    const double z = integrate([&](double x) { return p.pdf(x); }, 0.0, 200.0 * k / p.theta(), {1e-12, 1e-12, 4000}).value;
    EXPECT_NEAR(z, 1.0, 1e-8) << k;
  }
}

TEST(Update, ConjugateWhenNoSpam) {
  const GammaPosterior p(3.0, 450 * kUs);
  const GammaPosterior q = update(p, Outcome::kExcited, 100 * kUs, SpamModel{});
  EXPECT_EQ(q.k(), 3.0);
  EXPECT_NEAR(q.theta(), 550 * kUs, 1e-18);
}

TEST(Update, MatchesQuadratureMoments) {
  const GammaPosterior p(3.0, 450 * kUs);
  const SpamModel s(0.11, 0.14);
  for (Outcome m : {Outcome::kGround, Outcome::kExcited}) {
    const GammaPosterior q = update(p, m, 229 * kUs, s);
    const Moments ref = quadrature_moments(p, m, 229 * kUs, s);
    EXPECT_NEAR(q.mean_rate(), ref.mean, 1e-6 * ref.mean);
    EXPECT_NEAR(q.rate_variance(), ref.var, 1e-6 * ref.var);
  }
}

TEST(Update, RandomQuadratureOracle) {
  CounterRng r(21);
  for (int i = 0; i < 200; ++i) {
    const double k = 1.0 + 20.0 * r.uniform();
    const GammaPosterior p(k, 1e-4 + 1e-3 * r.uniform());
    const double tau = p.theta() * std::pow(10.0, -2.0 + 3.0 * r.uniform());
    const SpamModel s(0.2 * r.uniform(), 0.2 * r.uniform());
    const Outcome m = outcome_from_int(r.bernoulli(0.5));
    const GammaPosterior q = update(p, m, tau, s);
    const Moments ref = quadrature_moments(p, m, tau, s);
    EXPECT_NEAR(q.mean_rate(), ref.mean, 1e-6 * ref.mean);
    EXPECT_NEAR(q.rate_variance(), ref.var, 1e-6 * ref.var);
  }
}

TEST(Update, MonotoneMeanShift) {
  CounterRng r(8);
  for (int i = 0; i < 5000; ++i) {
    const GammaPosterior p(0.5 + 40.0 * r.uniform(), 1e-5 + 1e-3 * r.uniform());
    const double a = 0.45 * r.uniform(), b = 0.45 * r.uniform();
    const SpamModel s(a, b);
    // Around the prior mean T1; far beyond it the outcome is certain to machine precision.
    const double tau = p.t1_hat() * std::pow(10.0, -2.0 + 3.0 * r.uniform());
    EXPECT_LT(update(p, Outcome::kExcited, tau, s).mean_rate(), p.mean_rate());
    EXPECT_GT(update(p, Outcome::kGround, tau, s).mean_rate(), p.mean_rate());
  }
}

TEST(Update, ZeroEvidenceRejected) {
  const GammaPosterior p(3.0, 450 * kUs);
  EXPECT_THROW(update(p, Outcome::kGround, 0.0, SpamModel{}), ZeroEvidence);
}

TEST(Update, PosteriorMeanFactorIsMean) {
  const GammaPosterior p(4.0, 300 * kUs);
  const SpamModel s(0.1, 0.05);
  for (Outcome m : {Outcome::kGround, Outcome::kExcited}) {
    const Moments ref = quadrature_moments(p, m, 120 * kUs, s);
    EXPECT_NEAR(posterior_mean_factor(m, 4.0, 300 * kUs, 120 * kUs, s), ref.mean, 1e-7 * ref.mean);
  }
  EXPECT_NEAR(evidence(p, Outcome::kExcited, 120 * kUs, s),
              0.05 + 0.85 * std::pow(300.0 / 420.0, 4.0), 1e-14);
}

TEST(CredibleInterval, MatchesIndependentQuantiles) {
  const GammaPosterior p(3.0, 450 * kUs);
  const auto [lo, hi] = credible_interval(p, 0.9);
  // Independent route: Boost inverse of the regularized incomplete gamma.
  EXPECT_NEAR(lo, p.theta() / boost::math::gamma_p_inv(3.0, 0.95), 1e-9 * lo);
  EXPECT_NEAR(hi, p.theta() / boost::math::gamma_p_inv(3.0, 0.05), 1e-9 * hi);
  EXPECT_NEAR(lo / kUs, 71.5, 0.1);
  EXPECT_NEAR(hi / kUs, 550.1, 0.5);
}

TEST(CredibleInterval, CdfRoundTripAndMonotone) {
  const GammaPosterior p(7.3, 820 * kUs);
  double prev_lo = INFINITY, prev_hi = 0.0;
  for (double level : {1e-6, 0.1, 0.5, 0.68, 0.9, 0.99}) {
    const auto [lo, hi] = credible_interval(p, level);
    EXPECT_LE(lo, prev_lo);
    EXPECT_GE(hi, prev_hi);
    prev_lo = lo;
    prev_hi = hi;
    // P(T1 < lo) = P(rate > 1/lo) = (1 - level)/2, checked against quadrature of the pdf.
    const double tail = integrate([&](double x) { return p.pdf(x); }, 1.0 / lo, 100.0 / p.theta() * p.k(),
                                  {1e-13, 1e-12, 4000}).value;
    EXPECT_NEAR(tail, (1.0 - level) / 2.0, 1e-6);
  }
  const double median = p.theta() / gamma_p_inverse(p.k(), 0.5);
  const auto [l0, h0] = credible_interval(p, 1e-9);
  EXPECT_NEAR(l0, median, 1e-6 * median);
  EXPECT_NEAR(h0, median, 1e-6 * median);
}
