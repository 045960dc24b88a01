#include <cmath>

#include <boost/math/special_functions/lambert_w.hpp>
#include <gtest/gtest.h>

#include "t1track/error.hpp"
#include "t1track/numerics.hpp"
#include "t1track/wait_optimizer.hpp"

using namespace t1track;

namespace {

// Independent golden-section search on the objective itself.
double golden_argmin(const std::function<double(double)>& f, double a, double b) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > 1e-11 * (a + b)) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - g * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + g * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(ExpectedSigma, ShotLimitedNoSpamFormula) {
  const auto budget = ExperimentBudget::shot_limited(100.0);
  for (double x : {0.1, 1.0, 3.0}) {
    EXPECT_NEAR(expected_sigma(x, 1.0, budget, SpamModel{}), std::sqrt(std::exp(x) - 1.0) / (x * 10.0), 1e-14);
  }
  EXPECT_THROW(expected_sigma(0.0, 1.0, budget, SpamModel{}), DomainError);
}

TEST(ExpectedSigma, ZeroIdleNoSpamDecreasesTowardZeroTau) {
  const auto budget = ExperimentBudget::time_limited(0.0, 1.0);
  double prev = INFINITY;
  for (double x : {5.0, 2.0, 1.0, 0.3, 0.1, 0.01}) {
    const double v = expected_sigma(x, 1.0, budget, SpamModel{});
    EXPECT_NEAR(v, std::sqrt(std::expm1(x) / x), 1e-12 * v);
    EXPECT_LT(v, prev);
    prev = v;
  }
  EXPECT_THROW(tau_opt_numeric(1.0, budget, SpamModel{}), NoMinimum);
}

TEST(ClosedForm, NoSpamOptimumAndValue) {
  const TauOptimum t = tau_opt_closed_form(ClosedFormCase::kShotLimitedNoSpam, 1.0);
  EXPECT_NEAR(t.c_opt, 2.0 + boost::math::lambert_w0(-2.0 * std::exp(-2.0)), 1e-13);
  EXPECT_NEAR(t.c_opt, 1.5936, 1e-4);
  // Minimal uncertainty ~1.24 Gamma1 / sqrt(N).
  EXPECT_NEAR(expected_sigma(t.tau_opt_s, 1.0, ExperimentBudget::shot_limited(1.0), SpamModel{}), 1.2426, 1e-3);
  const TauOptimum n = tau_opt_numeric(1.0, ExperimentBudget::shot_limited(50.0), SpamModel{});
  EXPECT_NEAR(n.c_opt, t.c_opt, 1e-6 * t.c_opt);
}

TEST(ClosedForm, BranchPointIsDegenerate) {
  const TauOptimum t = tau_opt_closed_form(ClosedFormCase::kZeroIdleBeta0, 1.0, 0.0);
  EXPECT_TRUE(t.degenerate);
  EXPECT_EQ(t.tau_opt_s, 0.0);
  EXPECT_THROW(tau_opt_closed_form(ClosedFormCase::kShotLimitedBeta0, 1.0, 1.0), DomainError);
}

TEST(ClosedForm, AgreesWithNumericAndGoldenSection) {
  for (double alpha : {0.05, 0.11, 0.2}) {
    const SpamModel spam(alpha, 0.0);
    for (double g : {1.0, 1e4}) {
      const TauOptimum cn = tau_opt_closed_form(ClosedFormCase::kShotLimitedBeta0, g, alpha);
      const auto nb = ExperimentBudget::shot_limited(10.0);
      EXPECT_NEAR(tau_opt_numeric(g, nb, spam).tau_opt_s, cn.tau_opt_s, 1e-6 * cn.tau_opt_s);
      const double gs = golden_argmin([&](double t) { return expected_sigma(t, g, nb, spam); }, 0.1 / g, 5.0 / g);
      EXPECT_NEAR(gs, cn.tau_opt_s, 1e-6 * cn.tau_opt_s);

      const TauOptimum ct = tau_opt_closed_form(ClosedFormCase::kZeroIdleBeta0, g, alpha);
      EXPECT_FALSE(ct.degenerate);
      const auto tb = ExperimentBudget::time_limited(0.0);
      EXPECT_NEAR(tau_opt_numeric(g, tb, spam).tau_opt_s, ct.tau_opt_s, 1e-6 * ct.tau_opt_s);
    }
  }
}

TEST(Numeric, OptimumIsLocalMinimumAndScaleInvariant) {
  const SpamModel spam(0.11, 0.14);
  for (double t : {0.0, 5e-6, 23.2e-6, 345e-6, 1e-3}) {
    const auto b = ExperimentBudget::time_limited(t);
    const TauOptimum o = tau_opt_numeric(1e4, b, spam);
    EXPECT_GT(o.c_opt, 0.0);
    EXPECT_LE(o.c_opt, 1.59);
    EXPECT_LT(o.objective_value, expected_sigma(0.5 * o.tau_opt_s, 1e4, b, spam));
    EXPECT_LT(o.objective_value, expected_sigma(2.0 * o.tau_opt_s, 1e4, b, spam));
    const TauOptimum unit = tau_opt_numeric(1.0, ExperimentBudget::time_limited(1e4 * t), spam);
    EXPECT_NEAR(o.tau_opt_s, unit.tau_opt_s / 1e4, 1e-7 * o.tau_opt_s);
  }
}

TEST(Numeric, IncreasesWithIdleAndStaysPositiveAtZeroIdle) {
  const SpamModel spam(0.11, 0.14);
  double prev = 0.0;
  for (double t : {0.0, 1e-3, 0.01, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const double c = tau_opt_numeric(1.0, ExperimentBudget::time_limited(t), spam).c_opt;
    EXPECT_GT(c, prev);
    prev = c;
  }
  EXPECT_GT(tau_opt_numeric(1.0, ExperimentBudget::time_limited(0.0), spam).c_opt, 0.1);
}

TEST(CTable, ConsistencyAndBounds) {
  const double gammas[] = {2e3, 1e4, 2e4};
  const double idles[] = {0.0, 10e-6, 23.2e-6, 100e-6, 345e-6, 1e-3};
  const SpamModel spam(0.11, 0.14);
  const auto rows = export_c_table(gammas, idles, spam);
  ASSERT_EQ(rows.size(), 18u);
  for (std::size_t g = 0; g < 3; ++g) {
    double prev = 0.0;
    for (std::size_t t = 0; t < 6; ++t) {
      const CTableRow& r = rows[g * 6 + t];
      ASSERT_TRUE(r.c_opt.has_value());
      EXPECT_GT(*r.c_opt, prev);
      EXPECT_LE(*r.c_opt, 1.59);
      prev = *r.c_opt;
    }
  }
  EXPECT_EQ(*rows[7].c_opt, tau_opt_numeric(1e4, ExperimentBudget::time_limited(10e-6), spam).c_opt);
  // No SPAM and no idle has no interior optimum: the cell is left empty.
  const double zero[] = {0.0};
  const auto empty = export_c_table(gammas, zero, SpamModel{});
  EXPECT_FALSE(empty[0].c_opt.has_value());
  EXPECT_THROW(export_c_table({}, idles, spam), ConfigError);
}
