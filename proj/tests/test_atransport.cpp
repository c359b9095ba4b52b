#include <gtest/gtest.h>

#include <random>

#include "afn/atransport.hpp"
#include "oracles.hpp"

using namespace afn;

namespace {

Potential halfline_from(std::vector<double> v, double step) {
  const double len = static_cast<double>(v.size() - 1) * step;
  return Potential(std::move(v), step, HalfLine{len});
}

// Random piecewise-linear potential through `knots` random values on [0, len].
std::vector<double> random_pl(std::mt19937& rng, double step, double len, int knots, double amp) {
  std::uniform_real_distribution<double> u(-amp, amp);
  std::vector<double> kv(knots + 1);
  for (auto& k : kv) k = u(rng);
  const auto n = static_cast<std::size_t>(std::llround(len / step));
  std::vector<double> out(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = static_cast<double>(i) * step / len * knots;
    const auto j = std::min(static_cast<std::size_t>(s), static_cast<std::size_t>(knots - 1));
    out[i] = kv[j] + (s - static_cast<double>(j)) * (kv[j + 1] - kv[j]);
  }
  return out;
}

}  // namespace

TEST(ConvolutionTerm, Zero) {
  const auto b = convolution_term(AFunction(std::vector<double>(11, 0.0), 0.1));
  for (double v : b.samples()) EXPECT_EQ(v, 0.0);
}

TEST(ConvolutionTerm, ConstantGivesAlpha) {
  const auto b = convolution_term(AFunction(std::vector<double>(101, 1.0), 0.01));
  for (std::size_t i = 0; i < b.size(); ++i) EXPECT_NEAR(b[i], 0.01 * static_cast<double>(i), 1e-13);
}

TEST(ConvolutionTerm, LinearGivesCubic) {
  const double h = 0.01;
  const auto b = convolution_term(AFunction(oracle::sample([](double a) { return a; }, h, 100), h));
  EXPECT_EQ(b[0], 0.0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    const double a = h * static_cast<double>(i);
    EXPECT_NEAR(b[i], a * a * a / 6.0, a * h * h / 2.0 + 1e-15);
  }
}

TEST(AFromQ, ZeroPotential) {
  const auto r = a_from_q(oracle::constant_halfline(0.0, 0.01, 2.0), 1.0);
  for (double v : r.a.samples()) EXPECT_EQ(v, 0.0);
}

TEST(AFromQ, ConstantNegativeClosedForm) {
  const double h = 1.0 / 400;
  const auto r = a_from_q(oracle::constant_halfline(-1.0, h, 15.0), 2.0);
  ASSERT_EQ(r.a.size(), 801u);
  EXPECT_NEAR(r.a[400], -1.5906368, 5e-3);
  for (std::size_t i = 0; i < r.a.size(); ++i)
    EXPECT_NEAR(r.a[i], oracle::constant_negative_a(1.0, h * static_cast<double>(i)), 5e-3);
}

TEST(AFromQ, ConstantSmallAlpha) {
  const auto r = a_from_q(oracle::constant_halfline(1.0, 0.001, 1.0), 0.5);
  EXPECT_NEAR(r.a[100], 0.9950, 1e-4);
}

TEST(AFromQ, FieldDiagonalIsPotential) {
  const Potential p = halfline_from(oracle::sample([](double x) { return std::cos(2 * x); }, 0.01, 100), 0.01);
  const auto r = a_from_q(p, 1.0);
  for (std::size_t i = 0; i <= 100; ++i) EXPECT_EQ(r.field(i, i), p[i]);
  for (std::size_t i = 0; i <= 100; ++i) EXPECT_EQ(r.field(i, 0), r.a[i]);
}

TEST(AFromQ, BadRange) {
  const auto p = oracle::constant_halfline(1.0, 0.1, 1.0);
  EXPECT_THROW(a_from_q(p, 0.0), InputError);
  EXPECT_THROW(a_from_q(p, 1.5), InputError);
  EXPECT_THROW(a_from_q(p, 0.55), InputError);
}

TEST(AFromQ, OverflowReportsLocation) {
  const auto p = oracle::constant_halfline(1e200, 0.1, 2.0);
  try {
    a_from_q(p, 2.0);
    FAIL() << "expected a numerical failure";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("gamma ="), std::string::npos);
  }
}

TEST(QFromA, Zero) {
  const auto q = q_from_a(AFunction(std::vector<double>(51, 0.0), 0.02));
  for (double v : q.samples()) EXPECT_EQ(v, 0.0);
}

TEST(QFromA, InvertsConstantClosedForm) {
  const double h = 1.0 / 400;
  const auto q = q_from_a(AFunction(oracle::sample([](double a) { return oracle::constant_negative_a(1.0, a); }, h, 800), h));
  ASSERT_EQ(q.size(), 801u);
  for (double v : q.samples()) EXPECT_NEAR(v, -1.0, 5e-3);
}

TEST(QFromA, Roundtrip) {
  const double h = 1.0 / 200;
  const Potential p = halfline_from(oracle::sample([](double x) { return std::sin(3 * x) * std::exp(-x); }, h, 400), h);
  const auto back = q_from_a(a_from_q(p, 2.0).a);
  std::vector<double> d(301);
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = back[i] - p[i];
  EXPECT_LT(abs_prefix_integral(d, h).back(), 1e-2);
}

TEST(QFromA, BlowUpReported) {
  try {
    q_from_a(AFunction(std::vector<double>(201, 200.0), 0.01));
    FAIL() << "expected a numerical failure";
  } catch (const NumericalError& e) {
    EXPECT_NE(std::string(e.what()).find("blew up"), std::string::npos);
  }
}

TEST(QFromA, NeedsTwoSamples) { EXPECT_THROW(q_from_a(AFunction({1.0}, 0.1)), InputError); }

TEST(Properties, Locality) {
  std::mt19937 rng(5);
  const double h = 0.005;
  for (int trial = 0; trial < 5; ++trial) {
    auto v = random_pl(rng, h, 2.0, 8, 2.0);
    auto w = v;
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (std::size_t i = 201; i < w.size(); ++i) w[i] = u(rng);
    const auto a1 = a_from_q(halfline_from(v, h), 1.0).a;
    const auto a2 = a_from_q(halfline_from(w, h), 1.0).a;
    for (std::size_t i = 0; i < a1.size(); ++i) EXPECT_LT(std::abs(a1[i] - a2[i]), 1e-10);
  }
}

TEST(Properties, TranslationCovariance) {
  const double h = 0.005;
  const Potential p = halfline_from(oracle::sample([](double x) { return 1.0 - x * x + std::sin(5 * x); }, h, 400), h);
  const auto full = a_from_q(p, 2.0);
  for (std::size_t j : {40u, 100u, 250u}) {
    const auto sh = a_from_q(shift(p, static_cast<double>(j) * h), static_cast<double>(400 - j) * h);
    const auto slice = full.field.slice_at(j);
    ASSERT_EQ(slice.size(), sh.a.size());
    for (std::size_t k = 0; k < slice.size(); ++k) EXPECT_NEAR(sh.a[k], slice[k], 1e-12);
  }
}

TEST(Properties, AMinusQBound) {
  std::mt19937 rng(21);
  const double h = 0.005;
  for (int trial = 0; trial < 20; ++trial) {
    const Potential p = halfline_from(random_pl(rng, h, 1.0, 6, 1.5), h);
    const auto a = a_from_q(p, 1.0).a;
    const auto q = p.l1_prefix();
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double alpha = h * static_cast<double>(i);
      EXPECT_LE(std::abs(a[i] - p[i]), q[i] * q[i] * std::exp(alpha * q[i]) + 1e-3);
    }
  }
}

// |A - q - (A~ - q~)| against the Lipschitz estimate with the n = 1 term removed
// (A_1 - A~_1 = q - q~ is pointwise, not integral). Sum over n >= 2 of
// (Q + Q~)^{n-1} ||q - q~||_1 alpha^{n-2}/(n-2)! = (Q + Q~) ||q - q~||_1 e^{alpha (Q + Q~)}.
TEST(Properties, Lipschitz) {
  std::mt19937 rng(99);
  const double h = 0.005;
  for (int trial = 0; trial < 20; ++trial) {
    const Potential p1 = halfline_from(random_pl(rng, h, 1.0, 5, 1.0), h);
    const Potential p2 = halfline_from(random_pl(rng, h, 1.0, 5, 1.0), h);
    const auto a1 = a_from_q(p1, 1.0).a;
    const auto a2 = a_from_q(p2, 1.0).a;
    const auto q1 = p1.l1_prefix(), q2 = p2.l1_prefix();
    std::vector<double> diff(p1.size());
    for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = p1[i] - p2[i];
    const auto dl1 = abs_prefix_integral(diff, h);
    for (std::size_t i = 0; i < a1.size(); ++i) {
      const double alpha = h * static_cast<double>(i);
      const double s = q1[i] + q2[i];
      const double bound = s * dl1[i] * std::exp(alpha * s);
      EXPECT_LE(std::abs((a1[i] - p1[i]) - (a2[i] - p2[i])), 2.0 * bound + 1e-6);
    }
  }
}

TEST(Properties, SecondOrderConvergence) {
  auto err = [](double h) {
    const auto n = static_cast<std::size_t>(std::llround(2.0 / h));
    const Potential p = halfline_from(oracle::sample([](double x) { return std::sin(3 * x) * std::exp(-x); }, h, n), h);
    const auto back = q_from_a(a_from_q(p, 2.0).a);
    std::vector<double> d(back.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = back[i] - p[i];
    return abs_prefix_integral(d, h).back();
  };
  EXPECT_GE(err(1.0 / 50) / err(1.0 / 100), 3.0);
}

TEST(Properties, UniquenessIsDeterministic) {
  const double h = 0.01;
  const AFunction a(oracle::sample([](double x) { return std::cos(x) - 0.5 * x; }, h, 100), h);
  const AFunction b(std::vector<double>(a.samples().begin(), a.samples().end()), h);
  const auto qa = q_from_a(a), qb = q_from_a(b);
  for (std::size_t i = 0; i < qa.size(); ++i) EXPECT_EQ(qa[i], qb[i]);
}
