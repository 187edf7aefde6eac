#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "mosharp/checks.hpp"
#include "mosharp/errors.hpp"

using namespace mosharp;

namespace {

std::vector<Point> line_samples(double lo, double hi, int count) {
  std::vector<Point> out;
  for (int i = 0; i < count; ++i) out.push_back({lo + (hi - lo) * i / (count - 1), 0, 0});
  return out;
}

}  // namespace

TEST(Axioms, SquarePassesEverything) {
  const auto report = check_orlicz_axioms(MusielakOrliczFunction::power(2.0), line_samples(-1, 1, 5),
                                          log_grid(1e-3, 1e3, 40));
  EXPECT_TRUE(report.passed());
}

TEST(Axioms, SqrtFailsGrowthAtInfinity) {
  const auto report = check_orlicz_axioms(MusielakOrliczFunction::orlicz(OrliczShape::Sqrt), {Point{}},
                                          log_grid(1e-3, 1e3, 40));
  EXPECT_FALSE(report.check("ratio_to_infinity_at_infinity").passed);
  // sqrt(t_max)/t_max, evaluated directly.
  EXPECT_LT(std::sqrt(1e3) / 1e3, 1.0);
  EXPECT_FALSE(report.check("convex").passed);
}

TEST(Axioms, LinearFailsLimitAtZero) {
  const auto report = check_orlicz_axioms(MusielakOrliczFunction::orlicz(OrliczShape::Linear), {Point{}},
                                          log_grid(1e-3, 1e3, 40));
  EXPECT_FALSE(report.check("ratio_to_zero_at_zero").passed);
  EXPECT_TRUE(report.check("convex").passed);
  EXPECT_TRUE(report.check("nondecreasing").passed);
}

TEST(Axioms, LogPowerIsNotConvexNearOne) {
  // phi''(t) = 2|log t| + 3 - 2 sgn(log t) ... negative on (e^{-1/2}, 1).
  const auto report = check_orlicz_axioms(MusielakOrliczFunction::orlicz(OrliczShape::LogPower, 2.0), {Point{}},
                                          log_grid(1e-3, 1e3, 400));
  const auto& convex = report.check("convex");
  EXPECT_FALSE(convex.passed);
  EXPECT_GT(convex.worst_t[1], std::exp(-0.5) * 0.9);
  EXPECT_LT(convex.worst_t[1], 1.1);
  EXPECT_TRUE(report.check("nondecreasing").passed);
}

TEST(Axioms, RejectsDegenerateGrid) {
  const auto phi = MusielakOrliczFunction::power(2.0);
  EXPECT_THROW(check_orlicz_axioms(phi, {Point{}}, {1, 2, 2, 1e5}), InvalidArgument);
  EXPECT_THROW(check_orlicz_axioms(phi, {Point{}}, {1, 2, 3, 4}), InvalidArgument);
}

TEST(Delta2, SquareGivesFour) {
  const auto r = check_delta2(MusielakOrliczFunction::power(2.0), line_samples(-1, 1, 3), log_grid(1e-3, 1e3, 30));
  EXPECT_DOUBLE_EQ(r.kappa_hat, 4.0);
  EXPECT_TRUE(r.passed);
}

TEST(Delta2, DoublePhaseApproachesEight) {
  const auto phi = MusielakOrliczFunction::double_phase(2.0, 3.0, Weight::power_of_norm(1.0));
  const auto s_grid = log_grid(1e-3, 1e4, 60);
  const auto r = check_delta2(phi, line_samples(-2, 2, 9), s_grid);
  // Brute-force oracle over the same samples.
  double oracle = 0.0;
  for (const auto& x : line_samples(-2, 2, 9))
    for (double s : s_grid) {
      const double w = std::fabs(x[0]);
      oracle = std::max(oracle, (4 * s * s + 8 * w * s * s * s) / (s * s + w * s * s * s));
    }
  EXPECT_NEAR(r.kappa_hat, oracle, 1e-12);
  EXPECT_LT(r.kappa_hat, 8.0);
  EXPECT_GT(r.kappa_hat, 7.99);
}

TEST(Delta2, ExponentialExceedsCap) {
  const auto r = check_delta2(MusielakOrliczFunction::orlicz(OrliczShape::Exponential), {Point{}},
                              log_grid(1e-2, 50, 40));
  EXPECT_GT(r.kappa_hat, kDefaultKappaCap);
  EXPECT_FALSE(r.passed);
}

TEST(Delta2, AllZeroIsAnError) {
  const auto phi = MusielakOrliczFunction::tabulated({{Point{}}, {{1.0, 2.0}}, {{0.0, 0.0}}});
  EXPECT_THROW(check_delta2(phi, {Point{}}, {1.0, 2.0}), PreconditionError);
}

TEST(Growth, CubeGivesThree) {
  const auto r = estimate_gamma(MusielakOrliczFunction::power(3.0), {Point{}}, log_grid(1e-2, 1e2, 20),
                                {1.0, 1.5, 3.0, 10.0});
  EXPECT_NEAR(r.gamma_hat, 3.0, 1e-12);
  EXPECT_NEAR(r.kappa_hat, 8.0, 1e-12);
}

TEST(Growth, SumOfPowersGivesFour) {
  // t^2 + t^4 is the double phase form with unit weight.
  const auto phi = MusielakOrliczFunction::double_phase(2.0, 4.0, Weight::constant(1.0));
  const auto a_grid = log_grid(1e-2, 1e3, 30);
  const auto r = estimate_gamma(phi, {Point{}}, a_grid, {1.0, 1.5, 3.0, 10.0});
  double oracle = 0.0;
  for (double a : a_grid)
    for (double b : {1.1, 1.5, 2.0, 3.0, 10.0}) {
      const auto f = [](double t) { return t * t + t * t * t * t; };
      oracle = std::max(oracle, std::log(f(a * b) / f(a)) / std::log(b));
    }
  // The estimator also samples dyadic multiples of the a-grid, so it can only be larger.
  EXPECT_GE(r.gamma_hat, oracle - 1e-12);
  EXPECT_LE(r.gamma_hat, 4.0);
  EXPECT_GT(r.gamma_hat, 3.999);
  EXPECT_LE(r.kappa_hat, std::exp2(r.gamma_hat) * (1 + 1e-12));
}

TEST(Growth, LemmaPartsHoldForSquare) {
  const auto r = estimate_gamma(MusielakOrliczFunction::power(2.0), {Point{}}, log_grid(1e-2, 1e2, 20), {1.0});
  EXPECT_EQ(r.lemma_i.violations, 0u);
  EXPECT_GT(r.lemma_i.checked, 0u);
  // a = 1, b = 0.5: 0.25 <= 0.5.
  EXPECT_LE(std::pow(0.5, 2), 0.5 * 1.0);
  ASSERT_EQ(r.lemma_iii.size(), 3u);
  for (const auto& l3 : r.lemma_iii) EXPECT_EQ(l3.tally.violations, 0u);
  EXPECT_EQ(r.lemma_iii[0].m, 4);  // delta = 0.1: ceil(log2 11)
  EXPECT_EQ(r.lemma_iii[1].m, 2);  // delta = 0.5: ceil(log2 3)
  EXPECT_EQ(r.lemma_iii[2].m, 1);  // delta = 1: log2 2
  EXPECT_DOUBLE_EQ(r.lemma_iii[2].c_delta, 4.0);
}

TEST(Growth, RejectsBadGrids) {
  const auto phi = MusielakOrliczFunction::power(2.0);
  EXPECT_THROW(estimate_gamma(phi, {Point{}}, {1.0}, {0.5}), InvalidArgument);
  EXPECT_THROW(estimate_gamma(phi, {Point{}}, {-1.0}, {2.0}), InvalidArgument);
}

TEST(Young, SquareSamples) {
  const ComplementaryFunction conj(MusielakOrliczFunction::power(2.0), ConjugateMode::ClosedForm);
  auto r = check_young(conj, {{Point{}, 1.0, 1.0}});
  EXPECT_DOUBLE_EQ(r.worst_slack, 0.25);
  r = check_young(conj, {{Point{}, 0.0, 3.0}});
  EXPECT_DOUBLE_EQ(r.worst_slack, 9.0);
  for (double t : {0.1, 1.0, 7.0}) {
    r = check_young(conj, {{Point{}, 2.0 * t, t}});
    EXPECT_NEAR(r.worst_slack, 0.0, 1e-12 * (1 + 2 * t * t));
    EXPECT_EQ(r.violations, 0u);
  }
}

TEST(Young, RandomTriplesNumericMode) {
  const ComplementaryFunction conj(
      MusielakOrliczFunction::double_phase(2.0, 3.0, Weight::power_of_norm(1.0)), ConjugateMode::NumericLegendre);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ux(-2, 2), ulog(-3, 3);
  std::vector<YoungSample> samples;
  for (int i = 0; i < 200; ++i)
    samples.push_back({Point{ux(rng), 0, 0}, std::pow(10.0, ulog(rng)), std::pow(10.0, ulog(rng))});
  const auto r = check_young(conj, samples);
  EXPECT_EQ(r.violations, 0u);
  EXPECT_GE(r.worst_slack, -1e-12);
}

TEST(LogHolder, ConstantExponent) {
  const auto r = check_log_holder(ExponentField::constant(2.0), {{Point{0, 0, 0}, Point{0.1, 0, 0}}},
                                  {Point{100, 0, 0}});
  EXPECT_EQ(r.c_local, 0.0);
  EXPECT_EQ(r.c_decay, 0.0);
  EXPECT_TRUE(r.passed);
}

TEST(LogHolder, LogDecayConstantIsOne) {
  const auto p = ExponentField::log_decay(2.0, 1.0);
  std::vector<Point> far;
  for (double x : {10.0, 100.0, 1e3, 1e5}) far.push_back({x, 0, 0});
  const auto r = check_log_holder(p, {{Point{0, 0, 0}, Point{0.5, 0, 0}}}, far);
  EXPECT_DOUBLE_EQ(r.p_infinity, 2.0);
  EXPECT_LE(r.c_decay, 1.0 + 1e-12);
  EXPECT_GT(r.c_decay, 1.0 - 1e-12);
}

TEST(LogHolder, JumpDivergesUnderRefinement) {
  const auto p = ExponentField::jump(2.0, 1.0, 0.0, 1.0);
  double previous = 0.0;
  for (double d : {1e-2, 1e-4, 1e-8}) {
    const auto r = check_log_holder(p, {{Point{1.0 - d / 2, 0, 0}, Point{1.0 + d / 2, 0, 0}}}, {});
    EXPECT_GT(r.c_local, previous);
    previous = r.c_local;
  }
  EXPECT_GT(previous, 10.0);
  const auto r = check_log_holder(p, {{Point{1.0 - 5e-9, 0, 0}, Point{1.0 + 5e-9, 0, 0}}}, {});
  EXPECT_FALSE(r.passed);
}

TEST(A1, ConstantWeight) {
  const auto r = check_a1(MusielakOrliczFunction::power(2.0), {0, 0, 0}, {1, 0, 0}, {1.0});
  ASSERT_EQ(r.entries.size(), 1u);
  EXPECT_NEAR(r.entries[0].values.back(), 1.0, 1e-12);
  EXPECT_TRUE(r.passed());
}

TEST(A1, SqrtWeightIntegratesToTwoThirds) {
  const auto phi = MusielakOrliczFunction::weighted_power(Weight::power_of_norm(0.5), 2.0);
  const auto r = check_a1(phi, {0, 0, 0}, {1, 0, 0}, {1.0});
  EXPECT_NEAR(r.entries[0].values.back(), 2.0 / 3.0, 1e-3);
  EXPECT_EQ(r.entries[0].skipped_cells, 1u);
  EXPECT_TRUE(r.passed());
}

TEST(A1, InverseSquareDiverges) {
  const auto phi = MusielakOrliczFunction::weighted_power(Weight::power_of_norm(-2.0), 2.0);
  const auto r = check_a1(phi, {0, 0, 0}, {1, 0, 0}, {1.0});
  const auto& v = r.entries[0].values;
  ASSERT_GE(v.size(), 2u);
  EXPECT_NEAR(v.back() / v[v.size() - 2], 2.0, 0.05);
  EXPECT_FALSE(r.passed());
}

TEST(GrowthCondition, LogPowerSatisfiesDoublingHypothesis) {
  const auto phi = MusielakOrliczFunction::orlicz(OrliczShape::LogPower, 2.0);
  const auto r = check_conjugate_doubling_condition(phi, {1.5, 2.0, 4.0}, log_grid(1e-3, 1e6, 90));
  ASSERT_TRUE(r.found);
  for (double t : log_grid(r.t0, 1e6, 50))
    EXPECT_GE(phi({}, r.l * t), 2.0 * r.l * phi({}, t) * (1 - 1e-12));
}
