#include "rateind/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include "rateind/kernels.hpp"

namespace rateind {

namespace {

double max_abs(const Field& u) {
  double s = 0.0;
  for (const double v : u.values()) s = std::max(s, std::abs(v));
  return s;
}

double spread(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
  return *hi > 0.0 ? (*hi - *lo) / *hi : 0.0;
}

Field difference(const Field& a, const Field& b) {
  Field d = a;
  d -= b;
  return d;
}

}  // namespace

AprioriReport apriori_track(const RunResult& run, const Problem& prob) {
  const Grid& grid = prob.grid();
  const double area = grid.cell_area();
  const double p = prob.loading().p();
  const double q = prob.energy().q();
  const double factor = std::max(0.0, 1.0 - prob.convexity().product);
  const bool interior = grid.nx() >= 5 && grid.ny() >= 5;

  AprioriReport rep;
  const int n = run.time().n_steps();
  rep.rows.reserve(n);
  for (int k = 1; k <= n; ++k) {
    const StepResult& s = run.steps()[k - 1];
    const Field f = prob.load(k);
    AprioriRow row;
    row.k = k;
    row.t = run.time()[k];
    row.hess_lp = interior ? lp_norm(hessian_interior(s.u), area, p) : 0.0;
    row.grad_delta_l2 = edge_gradient_l2(s.delta);
    row.grad_u_l2 = edge_gradient_l2(s.u);
    row.u_lq = lp_norm(s.u, q);
    row.w_inf = max_abs(s.multiplier);
    row.f_lp = lp_norm(f, p);
    row.f_l2 = lp_norm(f, 2.0);
    row.rate_l2 = prob.loading().mean_rate_l2(grid, prob.components(), prob.data_time(k - 1),
                                              prob.data_time(k));
    const double fq = std::pow(row.f_l2, q - 1.0);
    row.r_space = row.hess_lp / (1.0 + row.f_lp + fq);
    row.r_time = row.grad_delta_l2 * factor / (1.0 + row.rate_l2 + row.f_l2 + fq);

    for (const double v : {row.hess_lp, row.grad_delta_l2, row.grad_u_l2, row.u_lq, row.w_inf,
                           row.f_lp, row.f_l2, row.rate_l2, row.r_space, row.r_time}) {
      if (!std::isfinite(v)) rep.finite = false;
    }
    rep.max_r_space = std::max(rep.max_r_space, row.r_space);
    rep.max_r_time = std::max(rep.max_r_time, row.r_time);
    rep.max_w_inf = std::max(rep.max_w_inf, row.w_inf);
    rep.rows.push_back(row);
  }
  return rep;
}

BoundednessReport apriori_boundedness(const std::vector<AprioriReport>& reports,
                                      const std::vector<int>& n_steps, double limit) {
  if (reports.size() != n_steps.size()) {
    throw std::invalid_argument("one step count per a-priori report");
  }
  BoundednessReport b;
  b.n_steps = n_steps;
  b.limit = limit;
  for (const auto& r : reports) {
    b.max_r_space.push_back(r.max_r_space);
    b.max_r_time.push_back(r.max_r_time);
  }
  b.spread_space = spread(b.max_r_space);
  b.spread_time = spread(b.max_r_time);
  return b;
}

HolderParams HolderParams::make(double alpha, double a, int d) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0,1)");
  if (!(a > 1.0) || !std::isfinite(a)) throw std::invalid_argument("time exponent a must be > 1");
  if (d < 1) throw std::invalid_argument("dimension must be >= 1");
  HolderParams h;
  h.alpha = alpha;
  h.a = a;
  h.d = d;
  h.b = (0.5 * d + alpha) * a / (a - 1.0);
  h.zeta = alpha / h.b;
  return h;
}

double HolderParams::joint_metric_constant(double t_final, double diameter) const {
  return 2.0 * (1.0 + std::pow(t_final + diameter, alpha - zeta));
}

JointMetricReport joint_metric_check(const HolderParams& params, double t_final, const Grid& grid,
                                     int pairs, std::uint64_t seed) {
  JointMetricReport rep;
  rep.pairs = pairs;
  rep.constant = params.joint_metric_constant(t_final, grid.diameter());
  rep.min_slack = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, t_final), ux(0.0, grid.lx()),
      uy(0.0, grid.ly()), unit(0.0, 1.0);
  for (int n = 0; n < pairs; ++n) {
    const double t = ut(rng), x0 = ux(rng), y0 = uy(rng);
    double s, x1, y1;
    if (n % 2 == 0) {
      s = ut(rng);
      x1 = ux(rng);
      y1 = uy(rng);
    } else {
      // Nearby pairs probe the small-distance end.
      const double e = std::pow(10.0, -8.0 * unit(rng));
      s = std::clamp(t + e * (2.0 * unit(rng) - 1.0) * t_final, 0.0, t_final);
      x1 = std::clamp(x0 + e * (2.0 * unit(rng) - 1.0) * grid.lx(), 0.0, grid.lx());
      y1 = std::clamp(y0 + e * (2.0 * unit(rng) - 1.0) * grid.ly(), 0.0, grid.ly());
    }
    const double dt = std::abs(t - s);
    const double dx = std::hypot(x0 - x1, y0 - y1);
    const double lhs = std::pow(dt, params.zeta) + std::pow(dx, params.alpha);
    const double rhs = rep.constant * std::pow(dt + dx, params.zeta);
    rep.min_slack = std::min(rep.min_slack, rhs - lhs);
  }
  rep.ok = rep.min_slack >= 0.0;
  return rep;
}

double max_alpha_field(double p, int d) { return std::min(1.0, (2.0 * p - d) / p); }
double max_alpha_gradient(double p, int d) { return std::min(1.0, (p - d) / p); }

CampanatoReport campanato_report(const RunResult& run, const HolderParams& params,
                                 HolderTarget which, const CampanatoOptions& opts) {
  const Field& u0 = run.iterate(0);
  const Grid& grid = u0.grid();
  const int m = u0.components();
  const int width = which == HolderTarget::field ? m : 2 * m;
  const double t0 = run.time()[0];
  const double span = run.time().t_final() - t0;
  const double r_max = 0.25 * std::min(grid.lx(), grid.ly());

  std::vector<double> radii;
  for (double r = 2.0 * grid.hx(); r <= r_max * (1.0 + 1e-12); r *= 2.0) {
    if (std::pow(r, params.b) < span) radii.push_back(r);
  }
  if (radii.empty()) throw std::invalid_argument("cylinder family is empty for this grid and time span");
  if (opts.time_anchors < 1 || opts.time_samples < 1 || opts.max_anchors < opts.time_anchors) {
    throw std::invalid_argument("campanato options need positive anchor and sample counts");
  }

  // Stride the nodes so that space x time anchors stay under the cap.
  const int space_cap = opts.max_anchors / opts.time_anchors;
  int stride = 1;
  auto count = [&](int s) {
    return ((grid.nx() + s - 1) / s) * ((grid.ny() + s - 1) / s);
  };
  while (count(stride) > space_cap) ++stride;
  std::vector<int> anchors;
  for (int j = 0; j < grid.ny(); j += stride) {
    for (int i = 0; i < grid.nx(); i += stride) anchors.push_back(i + j * grid.nx());
  }

  CampanatoReport rep;
  rep.space_anchors = static_cast<int>(anchors.size());
  rep.time_anchors = opts.time_anchors;
  const std::size_t layer = grid.nodes() * width;
  std::vector<double> layers(layer * opts.time_samples);

  for (const double r : radii) {
    const double extent = std::pow(r, params.b);
    double sup = 0.0;
    for (int a = 0; a < opts.time_anchors; ++a) {
      const double ta = t0 + (a + 0.5) / opts.time_anchors * (span - extent);
      for (int q = 0; q < opts.time_samples; ++q) {
        const Field v = run.interpolate(ta + (q + 0.5) / opts.time_samples * extent);
        double* dst = layers.data() + q * layer;
        if (which == HolderTarget::field) {
          std::copy(v.values().begin(), v.values().end(), dst);
        } else {
          const NodalArray g = gradient(v);
          std::copy(g.data.begin(), g.data.end(), dst);
        }
      }
      const kernels::OscillationInput in{grid.nx(), grid.ny(), width,           grid.hx(),
                                         grid.hy(), r,         opts.time_samples, layers,
                                         anchors};
      const double osc =
          opts.parallel ? kernels::omp::oscillation_sup(in) : kernels::serial::oscillation_sup(in);
      sup = std::max(sup, osc);
    }
    sup /= std::pow(r, params.alpha);
    rep.radii.push_back({r, sup});
    rep.seminorm = std::max(rep.seminorm, sup);
  }
  return rep;
}

double campanato_seminorm(const RunResult& run, const HolderParams& params, HolderTarget which,
                          const CampanatoOptions& opts) {
  return campanato_report(run, params, which, opts).seminorm;
}

RateIndependenceReport rate_independence_check(const Problem& prob,
                                               const std::vector<double>& nodes,
                                               const SolverConfig& cfg, bool compose) {
  const TimePartition& ref_time = prob.time();
  if (static_cast<int>(nodes.size()) != ref_time.n_steps() + 1) {
    throw std::invalid_argument("reparametrized partition must have the same number of nodes");
  }
  TimePartition other = TimePartition::from_nodes(nodes);
  if (other[0] != ref_time[0] || other.t_final() != ref_time.t_final()) {
    throw std::invalid_argument("reparametrized partition must keep both endpoints");
  }
  const int n = ref_time.n_steps();

  std::optional<Problem> second;
  if (compose) {
    std::vector<double> data(n + 1);
    for (int k = 0; k <= n; ++k) data[k] = prob.data_time(k);
    second = prob.with_partition(other, NodeMap(nodes, data));
  } else {
    second = prob.with_partition(other, std::nullopt);
    for (int k = 1; k <= n; ++k) {
      const Field a = prob.load(k), b = second->load(k);
      if (!std::equal(a.values().begin(), a.values().end(), b.values().begin())) {
        throw SampleMismatch("loading samples differ at step " + std::to_string(k));
      }
      if (prob.op().time_dependent() && prob.data_time(k) != second->data_time(k)) {
        throw SampleMismatch("operator coefficients differ at step " + std::to_string(k));
      }
    }
  }

  const RunResult ref = run_evolution(prob, cfg);
  const RunResult alt = run_evolution(*second, cfg);
  RateIndependenceReport rep;
  for (int k = 1; k <= n; ++k) {
    rep.scale = std::max(rep.scale, max_abs(ref.iterate(k)));
    rep.max_iterate_diff =
        std::max(rep.max_iterate_diff, max_abs(difference(ref.iterate(k), alt.iterate(k))));
  }
  rep.tol = 1e-12 * rep.scale;
  return rep;
}

std::vector<RunResult> refine_runs(const Problem& prob, const SolverConfig& cfg,
                                   const std::vector<int>& n_list) {
  std::vector<RunResult> runs;
  runs.reserve(n_list.size());
  const double t_final = prob.time().t_final();
  for (const int n : n_list) {
    runs.push_back(run_evolution(prob.with_partition(TimePartition::uniform(t_final, n), std::nullopt), cfg));
  }
  return runs;
}

ConvergenceReport convergence_table(const std::vector<RunResult>& runs) {
  ConvergenceReport rep;
  for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
    const RunResult& coarse = runs[i];
    const RunResult& fine = runs[i + 1];
    if (fine.time().n_steps() != 2 * coarse.time().n_steps()) {
      throw std::invalid_argument("convergence study needs doubling step counts");
    }
    if (!fine.iterate(0).same_shape(coarse.iterate(0))) {
      throw std::invalid_argument("convergence study needs one grid");
    }
    ConvergenceRow row;
    row.n = coarse.time().n_steps();
    for (int k = 0; k <= fine.time().n_steps(); ++k) {
      const Field d = difference(fine.iterate(k), coarse.interpolate(fine.time()[k]));
      row.diff_l2 = std::max(row.diff_l2, lp_norm(d, 2.0));
      row.diff_grad_l2 = std::max(row.diff_grad_l2, edge_gradient_l2(d));
    }
    if (!rep.rows.empty()) {
      const double prev = rep.rows.back().diff_l2;
      if (!(row.diff_l2 < prev || (prev == 0.0 && row.diff_l2 == 0.0))) rep.decreasing = false;
    }
    rep.rows.push_back(row);
  }
  return rep;
}

ConvergenceReport convergence_study(const Problem& prob, const SolverConfig& cfg,
                                    const std::vector<int>& n_list) {
  return convergence_table(refine_runs(prob, cfg, n_list));
}

EnergyReport energy_balance_report(const RunResult& run, const Problem& prob) {
  const Grid& grid = prob.grid();
  const double area = grid.cell_area();
  auto stored = [&](double t, const Field& v) {
    double w = 0.0;
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) w += w0_eval(prob.energy(), v.node(i, j));
    }
    return 0.5 * bilinear_form(prob.op(), t, v, v) + area * w;
  };

  EnergyReport rep;
  rep.initial_energy = stored(prob.data_time(0), run.iterate(0));
  rep.scale = std::max(1.0, std::abs(rep.initial_energy));
  rep.min_step_slack = std::numeric_limits<double>::infinity();
  rep.min_cumulative_slack = std::numeric_limits<double>::infinity();
  double e_prev = rep.initial_energy;
  const int n = run.time().n_steps();
  for (int k = 1; k <= n; ++k) {
    const Field& u = run.iterate(k);
    const Field& u_prev = run.iterate(k - 1);
    const Field du = difference(u, u_prev);
    const Field f = prob.load(k);
    const double tk = prob.data_time(k);
    EnergyRow row;
    row.k = k;
    row.t = run.time()[k];
    double diss = 0.0, load = 0.0;
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        diss += r1_eval(prob.dissipation(), du.node(i, j));
        const auto fn = f.node(i, j);
        const auto dn = du.node(i, j);
        for (int c = 0; c < prob.components(); ++c) load += fn[c] * dn[c];
      }
    }
    row.dissipated = area * diss;
    row.stored = stored(tk, u);
    const double e_prev_now = prob.op().time_dependent() ? stored(tk, u_prev) : e_prev;
    row.work = area * load + (e_prev_now - e_prev);
    row.step_slack = run.steps()[k - 1].f_decrease;
    rep.total_dissipated += row.dissipated;
    rep.total_work += row.work;
    row.cumulative_slack =
        rep.initial_energy + rep.total_work - rep.total_dissipated - row.stored;
    rep.scale = std::max({rep.scale, std::abs(row.stored), std::abs(rep.total_work),
                          rep.total_dissipated});
    rep.min_step_slack = std::min(rep.min_step_slack, row.step_slack);
    rep.min_cumulative_slack = std::min(rep.min_cumulative_slack, row.cumulative_slack);
    e_prev = row.stored;
    rep.rows.push_back(row);
  }
  if (n == 0) rep.min_step_slack = rep.min_cumulative_slack = 0.0;
  return rep;
}

CertificateReport el_certificate(const RunResult& run, const Problem& prob,
                                 const SolverConfig& cfg, int tests_per_step, std::uint64_t seed) {
  CertificateReport rep;
  rep.tol = cfg.effective_tol(prob.dissipation());
  rep.min_slack = std::numeric_limits<double>::infinity();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const Grid& grid = prob.grid();
  const int m = prob.components();
  for (int k = 1; k <= run.time().n_steps(); ++k) {
    const StepResult& s = run.steps()[k - 1];
    rep.max_residual = std::max(rep.max_residual, s.residual);
    const double scale = std::max(1.0, max_abs(s.delta));
    for (int n = 0; n < tests_per_step; ++n) {
      Field xi(grid, m);
      auto xv = xi.values();
      const auto dv = s.delta.values();
      switch (n % 3) {
        case 0:  // global random field
          for (auto& v : xv) v = scale * unit(rng);
          break;
        case 1:  // small perturbation of delta
          for (std::size_t i = 0; i < xv.size(); ++i) xv[i] = dv[i] + 1e-3 * scale * unit(rng);
          break;
        default:  // rescaled delta plus noise
          for (std::size_t i = 0; i < xv.size(); ++i) {
            xv[i] = (1.0 + unit(rng)) * dv[i] + 0.1 * scale * unit(rng);
          }
      }
      const ELGap gap = euler_lagrange_gap(prob, k, s.u, s.delta, xi);
      const double slack = gap.slack(rep.tol);
      rep.min_slack = std::min(rep.min_slack, slack / std::max(gap.l1, 1e-300));
      ++rep.tests;
      if (slack < 0.0) ++rep.violations;
    }
  }
  if (rep.tests == 0) rep.min_slack = 0.0;
  return rep;
}

}  // namespace rateind
