#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "rateind/diagnostics.hpp"
#include "support.hpp"

using namespace rateind;
using rateind::testing::constant_bump;
using rateind::testing::max_abs;
using rateind::testing::ramp_bump;
using rateind::testing::reference_problem;

namespace {

// Path that holds `u` at every node of a uniform partition.
RunResult frozen_path(const Field& u, int steps) {
  RunResult run(TimePartition::uniform(1.0, steps), u);
  for (int k = 1; k <= steps; ++k) {
    run.steps().push_back(StepResult{u, Field(u.grid(), u.components()),
                                     Field(u.grid(), u.components())});
  }
  return run;
}

RunResult scaled(const RunResult& run, double s) {
  RunResult out(run.time(), s * run.iterate(0));
  for (const auto& st : run.steps()) {
    out.steps().push_back(StepResult{s * st.u, s * st.delta, s * st.multiplier});
  }
  return out;
}

// Sup over all nodes and dyadic radii of the mean oscillation of a
// time-independent scalar field over Omega-cut lattice balls, / r^alpha.
double static_campanato(const Field& u, double alpha, double b) {
  const Grid& g = u.grid();
  double best = 0.0;
  for (double r = 2 * g.hx(); r <= 0.25 * std::min(g.lx(), g.ly()) * (1 + 1e-12); r *= 2) {
    if (std::pow(r, b) >= 1.0) continue;
    for (int aj = 0; aj < g.ny(); ++aj) {
      for (int ai = 0; ai < g.nx(); ++ai) {
        long double sum = 0;
        int cnt = 0;
        std::vector<double> vals;
        for (int j = 0; j < g.ny(); ++j) {
          for (int i = 0; i < g.nx(); ++i) {
            const double dx = (i - ai) * g.hx(), dy = (j - aj) * g.hy();
            if (dx * dx + dy * dy <= r * r * (1 + 1e-12)) {
              vals.push_back(u(i, j, 0));
              sum += u(i, j, 0);
              ++cnt;
            }
          }
        }
        const long double mean = sum / cnt;
        long double osc = 0;
        for (const double v : vals) osc += std::abs(v - mean);
        best = std::max(best, static_cast<double>(osc / cnt) / std::pow(r, alpha));
      }
    }
  }
  return best;
}

}  // namespace

TEST(Holder, ExponentsAndMetricConstant) {
  const HolderParams h = HolderParams::make(0.5, 2.0);
  EXPECT_DOUBLE_EQ(h.b, 3.0);
  EXPECT_DOUBLE_EQ(h.zeta, 0.5 / 3.0);
  const HolderParams h3 = HolderParams::make(0.25, 4.0, 3);
  EXPECT_NEAR(h3.b, (1.5 + 0.25) * 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(h.joint_metric_constant(1.0, std::sqrt(2.0)),
              2.0 * (1.0 + std::pow(1.0 + std::sqrt(2.0), 0.5 - 0.5 / 3.0)), 1e-14);
  EXPECT_THROW(HolderParams::make(1.0, 2.0), std::invalid_argument);
  EXPECT_THROW(HolderParams::make(0.5, 1.0), std::invalid_argument);
  EXPECT_DOUBLE_EQ(max_alpha_field(4.0), 1.0);
  EXPECT_DOUBLE_EQ(max_alpha_field(1.5), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(max_alpha_gradient(4.0), 0.5);
  EXPECT_LE(max_alpha_gradient(2.0), 0.0);
}

TEST(Holder, JointMetricProperty) {
  const Grid g(1, 1, 31, 31);
  for (const double alpha : {0.1, 0.5, 0.9}) {
    for (const double a : {1.5, 2.0, 8.0}) {
      const HolderParams h = HolderParams::make(alpha, a);
      const JointMetricReport rep = joint_metric_check(h, 1.0, g, 10000, 17);
      EXPECT_TRUE(rep.ok) << alpha << " " << a << " slack " << rep.min_slack;
    }
  }
}

TEST(Campanato, ConstantPathsVanish) {
  const Grid g(1, 1, 31, 31);
  const HolderParams h = HolderParams::make(0.5, 2.0);
  for (const double c : {0.0, 1.0, -3.7, 0.1}) {
    const Field u = Field::sample(g, 2, [&](double, double, std::span<double> v) {
      v[0] = c;
      v[1] = -2 * c;
    });
    const RunResult run = frozen_path(u, 8);
    EXPECT_EQ(campanato_seminorm(run, h, HolderTarget::field), 0.0);
  }
}

TEST(Campanato, LinearFieldMatchesDirectSummation) {
  const HolderParams h = HolderParams::make(0.5, 2.0);
  for (const int n : {15, 31}) {
    const Grid g(1, 1, n, n);
    const Field u = Field::sample(g, 1, [](double x, double, std::span<double> v) { v[0] = x; });
    const double ref = static_campanato(u, h.alpha, h.b);
    for (const int steps : {4, 16}) {
      const double got = campanato_seminorm(frozen_path(u, steps), h, HolderTarget::field);
      EXPECT_NEAR(got, ref, 1e-12 * ref) << "n=" << n << " N=" << steps;
    }
  }
}

TEST(Campanato, HomogeneityAndSerialEquivalence) {
  const Problem prob = reference_problem(15, 8, ramp_bump(3.0));
  const RunResult run = run_evolution(prob, {});
  const HolderParams h = HolderParams::make(0.5, 2.0);
  for (const auto which : {HolderTarget::field, HolderTarget::gradient}) {
    CampanatoOptions serial;
    serial.parallel = false;
    const CampanatoReport a = campanato_report(run, h, which);
    const CampanatoReport b = campanato_report(run, h, which, serial);
    EXPECT_EQ(a.seminorm, b.seminorm);
    EXPECT_GT(a.seminorm, 0.0);
    for (const double lam : {-2.5, 0.3, 7.0}) {
      const double s = campanato_seminorm(scaled(run, lam), h, which);
      EXPECT_NEAR(s, std::abs(lam) * a.seminorm, 1e-12 * std::abs(lam) * a.seminorm);
    }
  }
}

TEST(Campanato, EmptyFamilyThrows) {
  const Grid g(1, 1, 3, 3);
  const RunResult run = frozen_path(Field(g, 1), 2);
  EXPECT_THROW(campanato_seminorm(run, HolderParams::make(0.5, 2.0), HolderTarget::field),
               std::invalid_argument);
}

TEST(Apriori, ZeroLoadingGivesZeros) {
  const Problem prob = reference_problem(15, 4, Loading());
  const RunResult run = run_evolution(prob, {});
  const AprioriReport rep = apriori_track(run, prob);
  EXPECT_TRUE(rep.finite);
  EXPECT_EQ(rep.max_r_space, 0.0);
  EXPECT_EQ(rep.max_r_time, 0.0);
  EXPECT_EQ(rep.max_w_inf, 0.0);
  const EnergyReport e = energy_balance_report(run, prob);
  EXPECT_EQ(e.total_dissipated, 0.0);
  EXPECT_EQ(e.total_work, 0.0);
  EXPECT_TRUE(e.ok());
  const ConvergenceReport c = convergence_study(prob, {}, {2, 4, 8});
  EXPECT_TRUE(c.decreasing);
  for (const auto& row : c.rows) EXPECT_EQ(row.diff_l2, 0.0);
}

TEST(Apriori, MultiplierInsideYieldBall) {
  const Problem prob = reference_problem(15, 8, ramp_bump(3.0));
  const RunResult run = run_evolution(prob, {});
  const AprioriReport rep = apriori_track(run, prob);
  EXPECT_TRUE(rep.finite);
  EXPECT_LE(rep.max_w_inf, 1.0 + 1e-8);
  EXPECT_GT(rep.max_r_space, 0.0);
}

TEST(Apriori, SpreadOfMaxima) {
  std::vector<AprioriReport> reps(3);
  reps[0].max_r_space = 1.0;
  reps[1].max_r_space = 0.9;
  reps[2].max_r_space = 0.95;
  reps[0].max_r_time = reps[1].max_r_time = reps[2].max_r_time = 2.0;
  const BoundednessReport b = apriori_boundedness(reps, {16, 32, 64});
  EXPECT_NEAR(b.spread_space, 0.1, 1e-15);
  EXPECT_EQ(b.spread_time, 0.0);
  EXPECT_TRUE(b.bounded());
  EXPECT_THROW(apriori_boundedness(reps, {16, 32}), std::invalid_argument);
}

TEST(RateIndependence, IdentityIsBitwise) {
  const Problem prob = reference_problem(15, 4, ramp_bump(3.0));
  const auto rep = rate_independence_check(prob, prob.time().nodes(), {}, false);
  EXPECT_EQ(rep.max_iterate_diff, 0.0);
  EXPECT_GT(rep.scale, 0.0);
}

TEST(RateIndependence, SameSamplesOnOtherNodes) {
  const std::vector<double> nodes{0, 0.1, 0.5, 0.9, 1};
  const Problem constant = reference_problem(15, 4, constant_bump(1.5));
  const auto rep = rate_independence_check(constant, nodes, {}, false);
  EXPECT_TRUE(rep.ok()) << rep.max_iterate_diff;

  const Problem ramp = reference_problem(15, 4, ramp_bump(3.0));
  EXPECT_THROW(rate_independence_check(ramp, nodes, {}, false), SampleMismatch);
  const auto composed = rate_independence_check(ramp, nodes, {}, true);
  EXPECT_TRUE(composed.ok()) << composed.max_iterate_diff;
  EXPECT_GT(composed.scale, 0.0);
}

TEST(RateIndependence, RejectsIncompatiblePartitions) {
  const Problem prob = reference_problem(9, 4, ramp_bump(3.0));
  EXPECT_THROW(rate_independence_check(prob, {0, 0.5, 1}, {}, true), std::invalid_argument);
  EXPECT_THROW(rate_independence_check(prob, {0, 0.1, 0.5, 0.9, 1.2}, {}, true),
               std::invalid_argument);
}

TEST(RateIndependence, SpaceRatiosInvariantUnderRelabeling) {
  const Problem prob = reference_problem(15, 4, ramp_bump(3.0));
  const std::vector<double> nodes{0, 0.1, 0.5, 0.9, 1};
  const Problem relabeled =
      prob.with_partition(TimePartition::from_nodes(nodes), NodeMap(nodes, prob.time().nodes()));
  const AprioriReport a = apriori_track(run_evolution(prob, {}), prob);
  const AprioriReport b = apriori_track(run_evolution(relabeled, {}), relabeled);
  for (std::size_t k = 0; k < a.rows.size(); ++k) {
    EXPECT_EQ(a.rows[k].r_space, b.rows[k].r_space);
    EXPECT_EQ(a.rows[k].w_inf, b.rows[k].w_inf);
  }
}

TEST(Convergence, TableShapeChecks) {
  const Problem prob = reference_problem(9, 4, ramp_bump(3.0));
  const auto runs = refine_runs(prob, {}, {4, 6});
  EXPECT_THROW(convergence_table(runs), std::invalid_argument);
  const ConvergenceReport rep = convergence_study(prob, {}, {4, 8, 16});
  ASSERT_EQ(rep.rows.size(), 2u);
  EXPECT_EQ(rep.rows[0].n, 4);
  EXPECT_GT(rep.rows[0].diff_l2, 0.0);
  EXPECT_TRUE(rep.decreasing);
}

TEST(Energy, BalanceAndCertificate) {
  const Problem prob = reference_problem(15, 8, ramp_bump(3.0));
  const SolverConfig cfg;
  const RunResult run = run_evolution(prob, cfg);
  const EnergyReport e = energy_balance_report(run, prob);
  EXPECT_TRUE(e.ok());
  EXPECT_GE(e.min_step_slack, 0.0);
  EXPECT_GT(e.total_dissipated, 0.0);
  const CertificateReport c = el_certificate(run, prob, cfg, 30, 5);
  EXPECT_TRUE(c.ok()) << c.max_residual << " " << c.violations;
  EXPECT_EQ(c.tests, 240);
}
