#include <cmath>

#include <boost/math/distributions/binomial.hpp>
#include <gtest/gtest.h>

#include "t1track/binomial_tests.hpp"
#include "t1track/error.hpp"
#include "t1track/qubit_simulator.hpp"
#include "t1track/validation.hpp"

using namespace t1track;

namespace {

constexpr double kUs = 1e-6;

// P(m = 1) fixed regardless of tau.
class CoinSource final : public MeasurementSource {
 public:
  CoinSource(double p, std::uint64_t seed) : p_(p), rng_(CounterRng::stream(seed, 0)) {}
  Shot measure(double tau) override {
    const double t = now_;
    now_ += tau;
    return {outcome_from_int(rng_.bernoulli(p_)), t};
  }
  double lab_time() const override { return now_; }

 private:
  double p_;
  CounterRng rng_;
  double now_ = 0.0;
};

}  // namespace

TEST(Binomial, PmfAgainstBoost) {
  const auto pmf = binomial_pmf(200, 0.418);
  boost::math::binomial_distribution<double> d(200, 0.418);
  double total = 0.0;
  for (std::size_t s = 0; s <= 200; ++s) {
    const double ref = boost::math::pdf(d, static_cast<double>(s));
    EXPECT_NEAR(pmf[s], ref, 1e-12 * ref + 1e-300);
    total += pmf[s];
  }
  EXPECT_NEAR(total, 1.0, 1e-13);
}

TEST(Binomial, PoissonBinomialOracles) {
  const std::vector<double> same(30, 0.3);
  const auto a = poisson_binomial_pmf(same);
  const auto b = binomial_pmf(30, 0.3);
  for (std::size_t s = 0; s <= 30; ++s) EXPECT_NEAR(a[s], b[s], 1e-13 * b[s] + 1e-300);
  // Brute-force enumeration over all outcome patterns.
  const std::vector<double> p{0.1, 0.5, 0.9, 0.33, 0.72, 0.05, 0.61, 0.2};
  std::vector<double> brute(p.size() + 1, 0.0);
  for (unsigned mask = 0; mask < (1u << p.size()); ++mask) {
    double w = 1.0;
    int ones = 0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const bool on = mask >> i & 1u;
      w *= on ? p[i] : 1.0 - p[i];
      ones += on;
    }
    brute[ones] += w;
  }
  const auto pb = poisson_binomial_pmf(p);
  for (std::size_t s = 0; s < brute.size(); ++s) EXPECT_NEAR(pb[s], brute[s], 1e-15);
}

TEST(Thresholds, MatchBruteForceDefinitions) {
  const SpamModel spam(0.105, 0.14);
  for (double q : {-0.2, 0.0, 0.2}) {
    const BinomialTest test{200, q, 0.95};
    const Thresholds th = weak_strong_thresholds(test, spam);
    boost::math::binomial_distribution<double> d(200, th.p);
    std::size_t weak = 0, strong = 200;
    for (std::size_t s = 0; s <= 200; ++s) {
      const double ge = s == 0 ? 1.0 : boost::math::cdf(boost::math::complement(d, static_cast<double>(s) - 1.0));
      if (ge >= 0.95) weak = s;
    }
    for (std::size_t s = 201; s-- > 0;) {
      if (boost::math::cdf(d, static_cast<double>(s)) >= 0.95) strong = s;
    }
    EXPECT_EQ(th.s_weak, weak) << q;
    EXPECT_EQ(th.s_strong, strong) << q;
    EXPECT_LE(th.s_weak, th.s_strong);
  }
  const Thresholds z = weak_strong_thresholds({200, 0.0, 0.95}, spam);
  EXPECT_NEAR(z.p, 0.418, 5e-4);
  EXPECT_LT(z.s_weak, 84u);
  EXPECT_GT(z.s_strong, 83u);
}

TEST(Thresholds, LimitAndTestSemantics) {
  const Thresholds th = weak_strong_thresholds({50, 0.0, 1.0 - 1e-15}, SpamModel(0.1, 0.1));
  EXPECT_EQ(th.s_weak, 0u);
  EXPECT_EQ(th.s_strong, 50u);
  for (std::size_t s = 0; s <= 50; ++s) {
    EXPECT_TRUE(test_greater(s, th).weak);
    EXPECT_FALSE(test_greater(s, th).strong);
  }
  EXPECT_THROW(weak_strong_thresholds({0, 0.0, 0.95}, SpamModel{}), ConfigError);
}

TEST(FrequentistLimit, Formula) {
  EXPECT_DOUBLE_EQ(frequentist_limit(150e-6, 150e-6), 150e-6);
  EXPECT_NEAR(frequentist_limit(100e-6, 0.01), 100e-6 * 0.1, 1e-18);
  EXPECT_THROW(frequentist_limit(1.0, 0.0), DomainError);
}

TEST(ValidationProtocol, FixedProbabilityCentersOutcomes) {
  CoinSource src(0.418, 4);
  ValidationConfig cfg;
  cfg.adaptive.spam = SpamModel(0.105, 0.14);
  cfg.n_test = 200;
  cfg.repetitions = 300;
  const ValidationReport r = run_validation_protocol(src, cfg);
  ASSERT_EQ(r.reps.size(), 300u);
  double mean = 0.0;
  for (const ValidationRep& v : r.reps) mean += v.mean_outcome;
  EXPECT_NEAR(mean / 300, 0.418, 0.005);
  // Validation shots see exactly T1 = T1_hat, so both weak tests hold at about the test level.
  EXPECT_GE(r.weak_greater_rate, 0.9);
  EXPECT_GE(r.weak_less_rate, 0.9);
}

TEST(ValidationProtocol, EmptyWhenNoTestShots) {
  CoinSource src(0.5, 1);
  ValidationConfig cfg;
  cfg.n_test = 0;
  const ValidationReport r = run_validation_protocol(src, cfg);
  EXPECT_TRUE(r.reps.empty());
  ASSERT_EQ(r.strata.size(), 5u);
  for (const auto& s : r.strata) EXPECT_EQ(s.count, 0u);
}

TEST(ValidationProtocol, StaticSourceReport) {
  const SpamModel spam(0.105, 0.14);
  SimulatedQubit q({1.0 / (200 * kUs), {}, std::nullopt}, spam, 23.2 * kUs, 6);
  ValidationConfig cfg;
  cfg.adaptive.spam = spam;
  cfg.adaptive.policy = AdaptivePolicy(0.51);
  cfg.adaptive.stop.max_shots = 50;
  cfg.n_test = 200;
  cfg.repetitions = 400;
  const ValidationReport r = run_validation_protocol(q, cfg);
  EXPECT_GE(r.weak_greater_rate, 0.7);
  EXPECT_GE(r.weak_less_rate, 0.7);
  EXPECT_LE(r.strong_greater_rate, r.weak_greater_rate);
  EXPECT_LE(r.strong_less_rate, r.weak_less_rate);
  std::size_t counted = 0;
  for (const auto& s : r.strata) counted += s.count;
  EXPECT_LE(counted, r.reps.size());
}
