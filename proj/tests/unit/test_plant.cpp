#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "ilcconv/error.hpp"
#include "ilcconv/plant.hpp"

using namespace ilcconv;

TEST(Plant, TransformAtLn2) {
  const ABPoint p = ab_from_plant({std::log(2.0), 1.0});
  EXPECT_NEAR(p.a_gain, 0.5, 1e-15);
  EXPECT_NEAR(p.b_pole, 0.0, 1e-15);
  const ABPoint q = ab_from_plant({std::log(2.0), 0.0});
  EXPECT_NEAR(q.a_gain, 0.5, 1e-15);
  EXPECT_NEAR(q.b_pole, 0.5, 1e-15);
}

TEST(Plant, TransformSmallU) {
  const ABPoint p = ab_from_plant({1e-9, 0.0});
  EXPECT_NEAR(p.a_gain, 1e-9, 1e-18);
  EXPECT_NEAR(p.b_pole, 1.0, 1e-9);
}

TEST(Plant, TransformRejectsIntegralGainAndBadU) {
  EXPECT_THROW((void)ab_from_plant({1.0, 0.0, 0.5}), InvalidArgument);
  EXPECT_THROW((void)ab_from_plant({0.0, 0.0}), InvalidArgument);
  EXPECT_THROW((void)ab_from_plant({-1.0, 0.0}), InvalidArgument);
}

TEST(Plant, InverseExamples) {
  const PlantParams p = plant_from_ab({0.5, 0.0});
  EXPECT_NEAR(p.u_product, std::log(2.0), 1e-15);
  EXPECT_NEAR(p.kp, 1.0, 1e-15);
  const PlantParams q = plant_from_ab({0.5, 0.5});
  EXPECT_NEAR(q.kp, 0.0, 1e-15);
  const PlantParams r = plant_from_ab({1.0 - 1e-12, 0.0});
  EXPECT_GT(r.u_product, 27.0);
  EXPECT_NEAR(r.kp, 0.0, 1e-11);
  EXPECT_THROW((void)plant_from_ab({0.0, 0.0}), InvalidArgument);
  EXPECT_THROW((void)plant_from_ab({1.0, 0.0}), InvalidArgument);
}

TEST(Plant, RoundTripProperty) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> uu(0.01, 5.0), t(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    const double u = uu(rng);
    const double kp_hi = 1.0 / std::expm1(u);
    const double kp = -1.0 + (kp_hi + 1.0) * (0.001 + 0.998 * t(rng));
    const PlantParams back = plant_from_ab(ab_from_plant({u, kp}));
    EXPECT_NEAR(back.u_product, u, 1e-12 * u);
    EXPECT_NEAR(back.kp, kp, 1e-12 * std::max(1.0, std::abs(kp))) << "U=" << u;
  }
}

TEST(Plant, GainLimitsAtLn2) {
  const GainLimits g = no_ilc_gain_limits(std::log(2.0));
  EXPECT_NEAR(g.kp_max_stable, 3.0, 1e-14);
  EXPECT_NEAR(g.kp_max_monotone, 1.0, 1e-14);
  EXPECT_EQ(g.kp_min, -1.0);
  EXPECT_TRUE(g.stable(2.0));
  EXPECT_FALSE(g.oscillation_free(2.0));
  EXPECT_FALSE(g.stable(4.0));
  EXPECT_THROW((void)no_ilc_gain_limits(0.0), InvalidArgument);
}

TEST(Plant, GainLimitsLargeUAndOrdering) {
  const GainLimits g = no_ilc_gain_limits(60.0);
  EXPECT_NEAR(g.kp_max_stable, 1.0, 1e-12);
  EXPECT_NEAR(g.kp_max_monotone, 0.0, 1e-12);
  for (double u : {1e-4, 0.1, 1.0, 3.0, 10.0}) {
    const GainLimits h = no_ilc_gain_limits(u);
    EXPECT_LT(h.kp_max_monotone, h.kp_max_stable);
    // the bounds are where B crosses -1 and 0
    EXPECT_NEAR(ab_from_plant({u, h.kp_max_stable}).b_pole, -1.0, 1e-9);
    EXPECT_NEAR(ab_from_plant({u, h.kp_max_monotone}).b_pole, 0.0, 1e-9);
    EXPECT_NEAR(ab_from_plant({u, h.kp_min}).b_pole, 1.0, 1e-12);
  }
}

TEST(Plant, SimulateExamples) {
  const TrialResponse a = simulate_trial({0.5, 0.0}, 1.0, 3);
  ASSERT_EQ(a.samples.size(), 4u);
  EXPECT_EQ(a.samples, (std::vector<double>{0.0, 0.5, 0.5, 0.5}));
  EXPECT_EQ(a.classification, TrialClass::Monotone);

  const TrialResponse b = simulate_trial({0.5, 0.5}, 1.0, 3);
  EXPECT_EQ(b.samples, (std::vector<double>{0.0, 0.5, 0.75, 0.875}));

  const TrialResponse c = simulate_trial({0.5, -1.2}, 1.0, 30);
  EXPECT_EQ(c.classification, TrialClass::GrowingOscillation);
  for (std::size_t k = 2; k < c.samples.size(); ++k) {
    EXPECT_LT((c.samples[k] - c.samples[k - 1]) * (c.samples[k - 1] - c.samples[k - 2]), 0.0);
  }
  EXPECT_GT(std::abs(c.samples.back()), 10.0);
  EXPECT_THROW((void)simulate_trial({0.5, 0.0}, 1.0, 0), InvalidArgument);
}

TEST(Plant, ClassifyPole) {
  EXPECT_EQ(classify_pole(0.0), TrialClass::Monotone);
  EXPECT_EQ(classify_pole(0.99), TrialClass::Monotone);
  EXPECT_EQ(classify_pole(-0.5), TrialClass::DampedOscillation);
  EXPECT_EQ(classify_pole(-1.0), TrialClass::Marginal);
  EXPECT_EQ(classify_pole(1.0), TrialClass::Marginal);
  EXPECT_EQ(classify_pole(-1.5), TrialClass::GrowingOscillation);
  EXPECT_EQ(classify_pole(1.5), TrialClass::MonotoneDivergent);
  EXPECT_EQ(to_string(TrialClass::DampedOscillation), "damped-oscillation");
}

TEST(Plant, GeometricClosedForm) {
  const ABPoint p{0.3, 0.7};
  const TrialResponse r = simulate_trial(p, 2.0, 25);
  for (int k = 0; k <= 25; ++k) {
    EXPECT_NEAR(r.samples[k], p.a_gain * 2.0 * (1.0 - std::pow(p.b_pole, k)) / (1.0 - p.b_pole), 1e-13);
  }
}

TEST(Plant, SteadyStateProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uu(0.05, 3.0), t(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double u = uu(rng);
    const GainLimits g = no_ilc_gain_limits(u);
    const double kp = -0.95 + (g.kp_max_stable - 0.05 + 0.95) * t(rng);
    const ABPoint p = ab_from_plant({u, kp});
    ASSERT_LT(std::abs(p.b_pole), 1.0);
    const int steps = 20000;
    const TrialResponse r = simulate_trial(p, 1.0, steps);
    EXPECT_NEAR(r.samples.back(), p.a_gain / (1.0 - p.b_pole), 1e-9);
    EXPECT_NEAR(r.samples.back(), 1.0 / (1.0 + kp), 1e-9);
  }
}

TEST(Plant, DivergenceExactlyOutsideUnitInterval) {
  for (double b : {-1.3, -1.0001, -0.9999, -0.2, 0.0, 0.4, 0.9999, 1.0001, 1.7}) {
    const TrialResponse r = simulate_trial({0.4, b}, 1.0, 10);
    const bool divergent = r.classification == TrialClass::GrowingOscillation ||
                           r.classification == TrialClass::MonotoneDivergent;
    EXPECT_EQ(divergent, std::abs(b) > 1.0) << b;
  }
}
