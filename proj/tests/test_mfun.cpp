#include <gtest/gtest.h>

#include <random>

#include "afn/mfun.hpp"
#include "oracles.hpp"

using namespace afn;

namespace {

Potential zeros_on(double b, BoundaryCondition bc, std::size_t n = 400) {
  return Potential(std::vector<double>(n + 1, 0.0), b / static_cast<double>(n), FiniteInterval{b, bc});
}

Potential smooth_halfline(double step = 0.005, double cutoff = 6.0) {
  const auto n = static_cast<std::size_t>(std::llround(cutoff / step));
  return Potential(oracle::sample([](double x) { return std::exp(-x) * (1.0 + std::sin(4.0 * x)); }, step, n), step,
                   HalfLine{cutoff});
}

}  // namespace

TEST(EvaluateM, FreeHalfLine) {
  const auto p = oracle::constant_halfline(0.0, 0.01, 5.0);
  EXPECT_NEAR(evaluate_m(p, 5.0), -5.0, 1e-12);
}

TEST(EvaluateM, ConstantNegativeHalfLine) {
  const auto p = oracle::constant_halfline(-1.0, 1.0 / 400, 15.0);
  EXPECT_NEAR(evaluate_m(p, 2.0), -std::sqrt(3.0), 1e-10);
}

TEST(EvaluateM, FreeDirichlet) {
  EXPECT_NEAR(evaluate_m(zeros_on(1.0, BoundaryCondition::dirichlet()), 1.0), -1.0 / std::tanh(1.0), 1e-9);
  EXPECT_NEAR(evaluate_m(zeros_on(1.0, BoundaryCondition::dirichlet()), 1.0), -1.3130353, 1e-7);
}

TEST(EvaluateM, FreeNeumann) {
  EXPECT_NEAR(evaluate_m(zeros_on(1.0, BoundaryCondition::finite(0.0)), 1.0), -0.7615942, 1e-7);
}

TEST(EvaluateM, FreeRobinMatchesHyperbolicForm) {
  for (double h : {-0.5, 1.0, 3.0})
    for (double k : {1.0, 4.0, 12.0})
      EXPECT_NEAR(evaluate_m(zeros_on(1.0, BoundaryCondition::finite(h)), k), oracle::m_free_robin(k, 1.0, h),
                  1e-8 * k);
}

TEST(EvaluateM, MarginViolationIsInputError) {
  const auto p = oracle::constant_halfline(-1.0, 0.01, 5.0);
  EXPECT_THROW(evaluate_m(p, 1.0), InputError);
  EXPECT_THROW(evaluate_m(p, -2.0), InputError);
  EXPECT_NO_THROW(evaluate_m(p, 1.1));
}

TEST(EvaluateM, OffGridPointRejected) {
  const auto p = oracle::constant_halfline(0.0, 0.1, 1.0);
  EXPECT_THROW(evaluate_m(p, 2.0, 0.05), InputError);
  EXPECT_THROW(evaluate_m(p, 2.0, 1.0), InputError);
}

TEST(EvaluateM, DegenerateSeedIsPole) {
  const auto p = oracle::constant_halfline(0.0, 0.1, 1.0);
  EXPECT_THROW(evaluate_m(p, 2.0, 0.0, 0.0), PoleError);
}

TEST(EvaluateM, SurvivesHugeGrowth) {
  // e^{kappa L} = e^{600} overflows without rescaling.
  const auto p = oracle::constant_halfline(0.0, 0.01, 20.0);
  EXPECT_NEAR(evaluate_m(p, 30.0), -30.0, 1e-9);
  const Potential d(std::vector<double>(2001, 0.0), 0.01, FiniteInterval{20.0, BoundaryCondition::dirichlet()});
  EXPECT_NEAR(evaluate_m(d, 30.0), -30.0, 1e-6);
}

TEST(MCurve, Examples) {
  const auto p0 = oracle::constant_halfline(0.0, 0.01, 5.0);
  const std::vector<double> ks{1.0, 2.0, 3.0};
  const auto m0 = m_curve(p0, ks);
  for (std::size_t i = 0; i < ks.size(); ++i) EXPECT_NEAR(m0[i], -ks[i], 1e-12);

  const auto p1 = oracle::constant_halfline(-1.0, 1.0 / 400, 15.0);
  const std::vector<double> k1{2.0, 3.0};
  const auto m1 = m_curve(p1, k1);
  EXPECT_NEAR(m1[0], -std::sqrt(3.0), 1e-10);
  EXPECT_NEAR(m1[1], -std::sqrt(8.0), 1e-10);

  EXPECT_TRUE(m_curve(p0, std::vector<double>{}).empty());
}

TEST(MCurve, FailureCarriesKappa) {
  const auto p = oracle::constant_halfline(-1.0, 0.01, 5.0);
  try {
    m_curve(p, std::vector<double>{2.0, 3.0, 0.5});
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("strictly increasing"), std::string::npos);
  }
  try {
    m_curve(p, std::vector<double>{0.5, 2.0});
    FAIL() << "expected an error";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("kappa = 0.5"), std::string::npos);
  }
}

TEST(Properties, SeedScaleInvariance) {
  const auto p = smooth_halfline();
  for (double k : {1.5, 5.0, 20.0}) {
    const double ref = evaluate_m(p, k);
    for (double s : {1e-30, 1e-3, 7.0, 1e40}) EXPECT_NEAR(evaluate_m(p, k, 0.0, s), ref, 1e-12 * std::abs(ref));
  }
}

TEST(Properties, CompactSupportAsymptote) {
  std::vector<double> v(501, 0.0);
  for (std::size_t i = 0; i <= 100; ++i) v[i] = 2.0 * std::sin(0.01 * static_cast<double>(i) * M_PI);
  const Potential p(v, 0.01, HalfLine{5.0});
  EXPECT_LT(std::abs(evaluate_m(p, 50.0) + 50.0), std::abs(evaluate_m(p, 10.0) + 10.0));
}

TEST(Properties, TranslationConsistency) {
  const auto p = smooth_halfline();
  for (double x0 : {0.5, 1.25, 3.0})
    for (double k : {1.5, 4.0, 10.0}) EXPECT_NEAR(evaluate_m(p, k, x0), evaluate_m(shift(p, x0), k), 1e-12 * k);
}

TEST(Properties, ShiftProfileMatchesLinearPotential) {
  const Potential p(oracle::sample([](double x) { return x; }, 0.01, 100), 0.01, HalfLine{1.0});
  EXPECT_NEAR(evaluate_m(p, 3.0, 0.5), evaluate_m(shift(p, 0.5), 3.0), 1e-12);
}

TEST(Properties, EnergyShift) {
  const auto p = smooth_halfline();
  for (double c : {-0.5, 0.3, 2.0}) {
    std::vector<double> v(p.samples().begin(), p.samples().end());
    for (auto& x : v) x += c;
    const Potential pc(v, p.step(), p.interval());
    for (double k : {2.0, 5.0, 9.0}) EXPECT_NEAR(evaluate_m(pc, k), evaluate_m(p, std::sqrt(k * k + c)), 1e-8 * k);
  }
}

TEST(Properties, DirichletEnergyShift) {
  // Far-end seeds of the Dirichlet case do not depend on kappa, so the identity is exact up to RK4 error.
  std::vector<double> v(401);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::cos(0.005 * static_cast<double>(i) * 6.0);
  const Potential p(v, 0.005, FiniteInterval{2.0, BoundaryCondition::dirichlet()});
  for (auto& x : v) x += 1.5;
  const Potential pc(v, 0.005, p.interval());
  EXPECT_NEAR(evaluate_m(pc, 3.0), evaluate_m(p, std::sqrt(9.0 + 1.5)), 1e-8);
}
