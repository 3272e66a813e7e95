#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <random>

#include "rateind/grid.hpp"
#include "support.hpp"

using namespace rateind;
using rateind::testing::random_field;

namespace {

double lambda1_closed_form(const Grid& g) {
  const double sx = std::sin(M_PI * g.hx() / (2.0 * g.lx()));
  const double sy = std::sin(M_PI * g.hy() / (2.0 * g.ly()));
  return 4.0 / (g.hx() * g.hx()) * sx * sx + 4.0 / (g.hy() * g.hy()) * sy * sy;
}

}  // namespace

TEST(Grid, RejectsTooFewNodes) {
  EXPECT_THROW(Grid(1, 1, 2, 5), std::invalid_argument);
  EXPECT_THROW(Grid(1, 1, 5, 2), std::invalid_argument);
  EXPECT_NO_THROW(Grid(1, 1, 3, 3));
}

TEST(Grid, SpacingAndCoordinates) {
  const Grid g(2.0, 1.0, 7, 3);
  EXPECT_DOUBLE_EQ(g.hx(), 0.25);
  EXPECT_DOUBLE_EQ(g.hy(), 0.25);
  EXPECT_DOUBLE_EQ(g.x(0), 0.25);
  EXPECT_DOUBLE_EQ(g.y(2), 0.75);
  EXPECT_DOUBLE_EQ(g.cell_area(), 0.0625);
  EXPECT_EQ(g.nodes(), 21u);
}

TEST(Field, ShapeAndFiniteness) {
  const Grid g(1, 1, 4, 5);
  Field f(g, 2);
  EXPECT_EQ(f.size(), 40u);
  EXPECT_THROW(Field(g, 2, std::vector<double>(39)), std::invalid_argument);
  std::vector<double> bad(40, 0.0);
  bad[7] = std::nan("");
  EXPECT_THROW(Field(g, 2, bad), std::domain_error);
  f(3, 4, 1) = 2.0;
  EXPECT_EQ(f.values()[(4 * 4 + 3) * 2 + 1], 2.0);
}

TEST(Field, Arithmetic) {
  std::mt19937_64 rng(3);
  const Grid g(1, 1, 6, 6);
  const Field a = random_field(g, 2, rng), b = random_field(g, 2, rng);
  const Field c = a + b;
  const Field d = c - b;
  for (std::size_t n = 0; n < a.size(); ++n) EXPECT_NEAR(d.values()[n], a.values()[n], 1e-15);
  const Field e = 2.0 * a;
  EXPECT_EQ(e.values()[5], 2.0 * a.values()[5]);
  EXPECT_THROW(Field(g, 1) += a, std::invalid_argument);
}

TEST(TimePartition, Validation) {
  const auto t = TimePartition::uniform(2.0, 4);
  EXPECT_EQ(t.n_steps(), 4);
  EXPECT_DOUBLE_EQ(t[2], 1.0);
  EXPECT_DOUBLE_EQ(t.step(3), 0.5);
  EXPECT_THROW(TimePartition::uniform(1.0, 0), std::invalid_argument);
  EXPECT_THROW(TimePartition::from_nodes({0.0, 0.5, 0.5, 1.0}), std::invalid_argument);
  EXPECT_THROW(TimePartition::from_nodes({0.0}), std::invalid_argument);
}

TEST(Gradient, ExactForBilinearAwayFromBoundary) {
  const Grid g(1, 1, 9, 9);
  const Field u = Field::sample(g, 1, [](double x, double y, auto v) { v[0] = x * y + 2 * x; });
  const NodalArray du = gradient(u);
  ASSERT_EQ(du.width, 2);
  for (int j = 1; j < 8; ++j) {
    for (int i = 1; i < 8; ++i) {
      EXPECT_NEAR(du.at(i, j)[0], g.y(j) + 2.0, 1e-12);
      EXPECT_NEAR(du.at(i, j)[1], g.x(i), 1e-12);
    }
  }
}

TEST(Hessian, ExactForQuadratics) {
  const Grid g(1, 1, 9, 7);
  const Field u = Field::sample(g, 2, [](double x, double y, auto v) {
    v[0] = x * x + 3 * x * y - y * y;
    v[1] = 0.5 * y * y;
  });
  const NodalArray h = hessian_interior(u);
  EXPECT_EQ(h.nx, 7);
  EXPECT_EQ(h.ny, 5);
  for (int j = 0; j < h.ny; ++j) {
    for (int i = 0; i < h.nx; ++i) {
      const auto v = h.at(i, j);
      EXPECT_NEAR(v[0], 2.0, 1e-9);
      EXPECT_NEAR(v[1], 3.0, 1e-9);
      EXPECT_NEAR(v[2], 3.0, 1e-9);
      EXPECT_NEAR(v[3], -2.0, 1e-9);
      EXPECT_NEAR(v[4], 0.0, 1e-9);
      EXPECT_NEAR(v[7], 1.0, 1e-9);
    }
  }
  EXPECT_THROW(hessian_interior(Field(Grid(1, 1, 4, 9), 1)), std::invalid_argument);
}

TEST(Norms, ConstantField) {
  const Grid g(1, 1, 7, 7);
  Field f(g, 1);
  for (auto& v : f.values()) v = 2.0;
  const double area = 49.0 * g.cell_area();
  EXPECT_NEAR(lp_norm(f, 2.0), 2.0 * std::sqrt(area), 1e-14);
  EXPECT_NEAR(lp_norm(f, 3.0), 2.0 * std::cbrt(area), 1e-14);
  EXPECT_EQ(lp_norm(f, std::numeric_limits<double>::infinity()), 2.0);
  EXPECT_THROW(lp_norm(f, 0.5), std::invalid_argument);
}

TEST(Norms, HomogeneityProperty) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> s(-5.0, 5.0), pd(1.0, 6.0);
  const Grid g(1, 1, 8, 6);
  for (int trial = 0; trial < 100; ++trial) {
    const Field u = random_field(g, 2, rng);
    const double lam = s(rng), p = pd(rng);
    EXPECT_NEAR(lp_norm(lam * u, p), std::abs(lam) * lp_norm(u, p), 1e-12 * (1 + std::abs(lam)));
    EXPECT_NEAR(edge_gradient_l2(lam * u), std::abs(lam) * edge_gradient_l2(u),
                1e-12 * (1 + std::abs(lam)) * edge_gradient_l2(u));
  }
}

TEST(Poincare, MatchesClosedFormEigenvalue) {
  for (const auto& g : {Grid(1, 1, 15, 15), Grid(2, 1, 21, 9), Grid(1, 1, 63, 63)}) {
    const double cp = poincare_constant(g);
    EXPECT_NEAR(cp, 1.0 / std::sqrt(lambda1_closed_form(g)), 1e-6) << g.nx() << "x" << g.ny();
  }
}

TEST(Poincare, SecondOrderConvergenceToContinuum) {
  const double exact = 1.0 / (M_PI * std::sqrt(2.0));
  std::vector<double> err;
  for (const int n : {7, 15, 31, 63}) err.push_back(std::abs(poincare_constant(Grid(1, 1, n, n)) - exact));
  for (std::size_t i = 0; i + 1 < err.size(); ++i) {
    const double order = std::log2(err[i] / err[i + 1]);
    EXPECT_GE(order, 1.8);
    EXPECT_LE(order, 2.2);
  }
}

TEST(Poincare, InequalityHoldsOnRandomFields) {
  std::mt19937_64 rng(5);
  const Grid g(1, 1, 15, 15);
  const double cp = poincare_constant(g);
  for (int trial = 0; trial < 200; ++trial) {
    const Field u = random_field(g, 1, rng);
    EXPECT_LE(lp_norm(u, 2.0), cp * edge_gradient_l2(u) * (1.0 + 1e-9));
  }
}

TEST(Dump, RoundTripIsBitExact) {
  std::mt19937_64 rng(9);
  const Grid g(1.5, 0.75, 11, 6);
  const Field u = random_field(g, 3, rng, 1e3);
  const auto path = (std::filesystem::temp_directory_path() / "rateind_dump_test.txt").string();
  write_dump(u, path);
  const Field back = read_dump(path, 1.5, 0.75);
  EXPECT_TRUE(back == u);
  const Field inferred = read_dump(path);
  EXPECT_TRUE(inferred.values().size() == u.values().size());
  for (std::size_t n = 0; n < u.size(); ++n) EXPECT_EQ(inferred.values()[n], u.values()[n]);
  EXPECT_THROW(read_dump(path, 1.0, 0.75), std::runtime_error);
  std::filesystem::remove(path);
}
