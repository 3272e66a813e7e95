#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "rateind/dissipation.hpp"

using namespace rateind;

namespace {

// Extended precision so that comparisons resolve the minimizer well below
// the square root of double rounding.
using Real = long double;

Real golden_min(const std::function<Real(Real)>& f, Real lo, Real hi) {
  const Real r = 0.5L * (std::sqrt(5.0L) - 1.0L);
  Real a = lo, b = hi;
  Real x1 = b - r * (b - a), x2 = a + r * (b - a);
  Real f1 = f(x1), f2 = f(x2);
  while (b - a > 1e-13L) {
    if (f1 < f2) {
      b = x2, x2 = x1, f2 = f1;
      x1 = b - r * (b - a), f1 = f(x1);
    } else {
      a = x1, x1 = x2, f1 = f2;
      x2 = a + r * (b - a), f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

TEST(Dissipation, Construction) {
  EXPECT_THROW(DissipationSpec::euclidean(0.0), std::invalid_argument);
  EXPECT_THROW(DissipationSpec::weighted_l1({1.0, -1.0}), std::invalid_argument);
  EXPECT_THROW(DissipationSpec::weighted_l1({}), std::invalid_argument);
  const auto w = DissipationSpec::weighted_l1({3.0, 4.0});
  EXPECT_DOUBLE_EQ(w.yield_radius(), 5.0);
  EXPECT_DOUBLE_EQ(w.yield_scale(), 3.0);
  EXPECT_EQ(w.required_components(), 2);
  EXPECT_EQ(DissipationSpec::euclidean(2.0).required_components(), 0);
}

TEST(Dissipation, EvaluationHomogeneousAndSubadditive) {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (const auto& d : {DissipationSpec::euclidean(1.7), DissipationSpec::weighted_l1({0.5, 2.0, 1.0})}) {
    for (int n = 0; n < 1000; ++n) {
      std::vector<double> a(3), b(3), s(3), l(3);
      const double lam = std::abs(u(rng));
      for (int c = 0; c < 3; ++c) a[c] = u(rng), b[c] = u(rng), s[c] = a[c] + b[c], l[c] = lam * a[c];
      EXPECT_NEAR(r1_eval(d, l), lam * r1_eval(d, a), 1e-12);
      EXPECT_LE(r1_eval(d, s), r1_eval(d, a) + r1_eval(d, b) + 1e-12);
      EXPECT_GE(r1_eval(d, a), 0.0);
    }
  }
}

TEST(Prox, MatchesGoldenSectionScalar) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(-3.0, 3.0), t(0.01, 2.0);
  const auto d = DissipationSpec::euclidean(1.3);
  for (int n = 0; n < 500; ++n) {
    const double z = u(rng), tau = t(rng);
    std::vector<double> p(1);
    prox_r1(d, std::vector<double>{z}, tau, p);
    const Real ref = golden_min(
        [&](Real x) { return tau * 1.3L * std::abs(x) + 0.5L * (x - z) * (x - z); }, -5.0L, 5.0L);
    EXPECT_LT(std::abs(p[0] - static_cast<double>(ref)), 1e-8);
  }
}

TEST(Prox, MatchesGoldenSectionVector) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-3.0, 3.0), t(0.01, 2.0);
  const auto eu = DissipationSpec::euclidean(0.8);
  const auto wl = DissipationSpec::weighted_l1({0.5, 1.5});
  for (int n = 0; n < 300; ++n) {
    const std::vector<double> z{u(rng), u(rng)};
    const double tau = t(rng);
    std::vector<double> p(2);

    // Euclidean: minimize over the plane by nested golden sections.
    prox_r1(eu, z, tau, p);
    auto phi = [&](Real x, Real y) {
      return tau * 0.8L * std::sqrt(x * x + y * y) +
             0.5L * ((x - z[0]) * (x - z[0]) + (y - z[1]) * (y - z[1]));
    };
    const Real bx = golden_min(
        [&](Real x) { return phi(x, golden_min([&](Real y) { return phi(x, y); }, -5.0L, 5.0L)); },
        -5.0L, 5.0L);
    const Real by = golden_min([&](Real y) { return phi(bx, y); }, -5.0L, 5.0L);
    EXPECT_LT(std::hypot(p[0] - static_cast<double>(bx), p[1] - static_cast<double>(by)), 1e-8);

    // Weighted l1: separable.
    prox_r1(wl, z, tau, p);
    for (int c = 0; c < 2; ++c) {
      const double w = wl.yield()[c];
      const Real ref = golden_min(
          [&](Real x) { return tau * w * std::abs(x) + 0.5L * (x - z[c]) * (x - z[c]); }, -5.0L, 5.0L);
      EXPECT_LT(std::abs(p[c] - static_cast<double>(ref)), 1e-8);
    }
  }
}

TEST(Prox, OptimalityInclusion) {
  std::mt19937_64 rng(14);
  std::uniform_real_distribution<double> u(-3.0, 3.0), t(0.01, 2.0);
  for (const auto& d : {DissipationSpec::euclidean(1.0), DissipationSpec::weighted_l1({0.3, 1.0, 2.0})}) {
    for (int n = 0; n < 1000; ++n) {
      std::vector<double> z(3), p(3), g(3);
      for (auto& x : z) x = u(rng);
      const double tau = t(rng);
      prox_r1(d, z, tau, p);
      // (z - p) / tau lies in dR(p).
      for (int c = 0; c < 3; ++c) g[c] = (z[c] - p[c]) / tau;
      EXPECT_LT(subdiff_residual(d, g, p), 1e-12 * (1.0 + 1.0 / tau));
    }
  }
}

TEST(Subdifferential, ResidualCases) {
  const auto d = DissipationSpec::euclidean(2.0);
  const std::vector<double> zero{0.0, 0.0};
  EXPECT_EQ(subdiff_residual(d, std::vector<double>{1.0, 1.0}, zero), 0.0);
  EXPECT_NEAR(subdiff_residual(d, std::vector<double>{3.0, 4.0}, zero), 3.0, 1e-15);
  EXPECT_NEAR(subdiff_residual(d, std::vector<double>{2.0, 0.0}, std::vector<double>{5.0, 0.0}), 0.0, 1e-15);
  EXPECT_NEAR(subdiff_residual(d, std::vector<double>{0.0, 2.0}, std::vector<double>{5.0, 0.0}),
              std::sqrt(8.0), 1e-15);
  const auto w = DissipationSpec::weighted_l1({1.0, 2.0});
  EXPECT_EQ(subdiff_residual(w, std::vector<double>{-1.0, 2.0}, zero), 0.0);
  EXPECT_NEAR(subdiff_residual(w, std::vector<double>{0.5, 3.0}, std::vector<double>{1.0, 0.0}),
              std::hypot(0.5, 1.0), 1e-15);
}

TEST(Subdifferential, ZeroExactlyOnTheSubdifferential) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const auto d = DissipationSpec::euclidean(1.5);
  for (int n = 0; n < 1000; ++n) {
    std::vector<double> delta{u(rng), u(rng)}, g(2);
    const double nd = std::hypot(delta[0], delta[1]);
    for (int c = 0; c < 2; ++c) g[c] = 1.5 * delta[c] / nd;
    EXPECT_LT(subdiff_residual(d, g, delta), 1e-14);
    // Inside the ball at delta = 0.
    std::vector<double> inner{0.5 * g[0], 0.5 * g[1]};
    EXPECT_EQ(subdiff_residual(d, inner, std::vector<double>{0.0, 0.0}), 0.0);
  }
}
