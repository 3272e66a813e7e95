#include "rateind/rothe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rateind/kernels.hpp"

namespace rateind {

Problem::Problem(Grid grid, EnergySpec energy, DissipationSpec dissipation, CoeffField op,
                 Loading loading, Field initial, TimePartition time, bool allow_nonconvex)
    : grid_(std::move(grid)),
      energy_(std::move(energy)),
      dissipation_(std::move(dissipation)),
      op_(std::move(op)),
      loading_(std::move(loading)),
      initial_(std::move(initial)),
      time_(std::move(time)) {
  if (initial_.grid() != grid_) throw ProblemError("A6", "initial value lives on another grid");
  const int m = initial_.components();
  if (op_.components() != m) {
    throw ProblemError("A4", "operator component count differs from the field's");
  }
  const int need = dissipation_.required_components();
  if (need != 0 && need != m) {
    throw ProblemError("A2", "weighted_l1 needs one yield coefficient per component");
  }
  if (const auto* s = loading_.sampled_spec()) {
    if (s->samples.front().grid() != grid_ || s->samples.front().components() != m) {
      throw ProblemError("A5", "sampled loading lives on another grid");
    }
  }
  poincare_ = poincare_constant(grid_);
  convexity_ = validate_convexity(energy_, poincare_, std::min(1.0, op_.kappa()));
  if (!convexity_.ok && !allow_nonconvex) {
    std::ostringstream msg;
    msg << "mu*C_P^2 = " << convexity_.product << " violates mu*C_P^2 < "
        << convexity_.threshold;
    throw ProblemError("A3", msg.str());
  }
}

Problem Problem::with_partition(TimePartition time, std::optional<NodeMap> clock) const {
  Problem p = *this;
  p.time_ = std::move(time);
  p.clock_ = std::move(clock);
  return p;
}

double Problem::data_time(int k) const {
  const double t = time_[k];
  return clock_ ? (*clock_)(t) : t;
}

Field Problem::load(int k) const { return loading_.sample(grid_, components(), data_time(k)); }

void SolverConfig::validate() const {
  if (tol && !(*tol > 0.0)) throw std::invalid_argument("solver tol must be positive");
  if (!(tau0 > 0.0)) throw std::invalid_argument("solver tau0 must be positive");
  if (!(backtrack > 0.0 && backtrack < 1.0)) {
    throw std::invalid_argument("solver backtrack must lie in (0,1)");
  }
  if (max_iters < 1) throw std::invalid_argument("solver max_iters must be >= 1");
}

Field RunResult::interpolate(double t) const {
  const auto& nodes = time_.nodes();
  if (t <= nodes.front()) return initial_;
  if (t >= nodes.back()) return iterate(time_.n_steps());
  const auto it = std::lower_bound(nodes.begin(), nodes.end(), t);
  const int k = static_cast<int>(it - nodes.begin());
  if (*it == t) return iterate(k);
  const double h = nodes[k] - nodes[k - 1];
  const double th = (t - nodes[k - 1]) / h;
  Field out = iterate(k - 1);
  const auto b = iterate(k).values();
  auto o = out.values();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] = (1.0 - th) * o[n] + th * b[n];
  return out;
}

namespace {

struct StepData {
  DiscreteOperator op;
  Field load;
};

StepData step_data(const Problem& prob, int k) {
  const double t = prob.data_time(k);
  return {DiscreteOperator(prob.op(), prob.grid(), t), prob.load(k)};
}

double delta_sum(const Problem& prob, const StepData& d, const Field& x, const Field& z,
                 const Field& lx, const Field& lz, const Field& u_prev) {
  const kernels::FunctionalDelta in{&prob.energy(), &prob.dissipation(), prob.components(),
                                    x.values(), z.values(), lx.values(), lz.values(),
                                    d.load.values(), u_prev.values()};
  return prob.grid().cell_area() * kernels::omp::functional_delta(in, prob.grid().ny());
}

}  // namespace

double incremental_functional(const Problem& prob, int k, const Field& v, const Field& u_prev) {
  const StepData d = step_data(prob, k);
  const int m = prob.components();
  double local = 0.0;
  std::vector<double> w(m);
  for (int j = 0; j < prob.grid().ny(); ++j) {
    for (int i = 0; i < prob.grid().nx(); ++i) {
      const auto vn = v.node(i, j);
      const auto pn = u_prev.node(i, j);
      const auto fn = d.load.node(i, j);
      for (int c = 0; c < m; ++c) w[c] = vn[c] - pn[c];
      local += r1_eval(prob.dissipation(), w) + w0_eval(prob.energy(), vn);
      for (int c = 0; c < m; ++c) local -= fn[c] * vn[c];
    }
  }
  return prob.grid().cell_area() * local + 0.5 * d.op.bilinear(v, v);
}

double functional_difference(const Problem& prob, int k, const Field& x, const Field& z,
                             const Field& u_prev) {
  const StepData d = step_data(prob, k);
  return delta_sum(prob, d, x, z, d.op.apply(x), d.op.apply(z), u_prev);
}

StepResult step_minimize(const Problem& prob, int k, const Field& u_prev,
                         const SolverConfig& cfg) {
  cfg.validate();
  if (k < 1 || k > prob.time().n_steps()) throw std::out_of_range("step index out of range");
  const Grid& grid = prob.grid();
  const int m = prob.components();
  const int rows = grid.ny();
  const double tol = cfg.effective_tol(prob.dissipation());
  const StepData d = step_data(prob, k);

  Field x = u_prev;
  Field lx = d.op.apply(x);
  const Field lu_prev = lx;
  Field force(grid, m);
  auto residual_at = [&](const Field& v, const Field& lv) {
    const kernels::ResidualInput in{&prob.energy(), &prob.dissipation(), m,
                                    v.values(),     lv.values(),         d.load.values(),
                                    u_prev.values()};
    return kernels::omp::residual(in, force.values());
  };

  double r = residual_at(x, lx);
  double tau = cfg.tau0;
  double max_increase = -std::numeric_limits<double>::infinity();
  int it = 0;
  if (r > tol) {
    Field y = x, ly = lx, z(grid, m), lz(grid, m), x_prev = x, lx_prev = lx;
    double t = 1.0;
    bool from_x = true;  // y == x
    for (it = 1; it <= cfg.max_iters; ++it) {
      // Backtracking on the smooth part around y.
      for (;;) {
        const kernels::ProxSweep sweep{&prob.energy(), &prob.dissipation(), m,
                                       tau,            y.values(),          ly.values(),
                                       d.load.values(), u_prev.values()};
        kernels::omp::prox_sweep(sweep, z.values());
        d.op.apply(z, lz);
        double d2 = 0.0;
        const double curv = kernels::omp::curvature(
            {&prob.energy(), m, y.values(), z.values(), ly.values(), lz.values()}, rows, d2);
        if (curv <= d2 / (2.0 * tau) * (1.0 + 1e-12)) break;
        tau *= cfg.backtrack;
        if (tau < cfg.tau_min) {
          throw StepFailure(k, r, it, "step size underflow in backtracking");
        }
      }

      const double dF = delta_sum(prob, d, x, z, lx, lz, u_prev);
      if (dF > 0.0) {
        if (!from_x) {
          // Momentum step went uphill: retry as a plain step from x.
          y = x;
          ly = lx;
          t = 1.0;
          from_x = true;
          continue;
        }
        // A plain step that passed the backtracking test descends in exact
        // arithmetic; only a rise beyond rounding signals nonconvexity.
        if (dF > 1e-8 * (1.0 + std::abs(incremental_functional(prob, k, x, u_prev)))) {
          throw StepFailure(k, r, it, "incremental functional increased: convexity violated");
        }
      }

      // Gradient restart test (y - z).(z - x) > 0, before x moves.
      bool restart = false;
      if (cfg.accel) {
        double s = 0.0;
        const auto yv = y.values(), zv = z.values(), xv = x.values();
        for (std::size_t n = 0; n < yv.size(); ++n) s += (yv[n] - zv[n]) * (zv[n] - xv[n]);
        restart = s > 0.0;
      }
      std::swap(x_prev, x);
      std::swap(lx_prev, lx);
      std::swap(x, z);
      std::swap(lx, lz);
      max_increase = std::max(max_increase, dF);
      r = residual_at(x, lx);
      if (r <= tol) break;

      if (cfg.accel) {
        if (restart) t = 1.0;
        const double t_new = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        const double beta = (t - 1.0) / t_new;
        auto yv = y.values();
        auto lyv = ly.values();
        const auto xv = x.values(), xp = x_prev.values();
        const auto lxv = lx.values(), lxp = lx_prev.values();
        for (std::size_t n = 0; n < yv.size(); ++n) {
          yv[n] = xv[n] + beta * (xv[n] - xp[n]);
          lyv[n] = lxv[n] + beta * (lxv[n] - lxp[n]);
        }
        t = t_new;
        from_x = beta == 0.0;
      } else {
        y = x;
        ly = lx;
      }
    }
    if (r > tol) {
      std::ostringstream msg;
      msg << "step " << k << ": residual " << r << " above tolerance " << tol << " after "
          << cfg.max_iters << " inner iterations";
      throw StepFailure(k, r, cfg.max_iters, msg.str());
    }
  }

  StepResult res{x, x, force, r, it, 0.0, tau, std::min(max_increase, 0.0)};
  if (it == 0) res.max_accepted_increase = 0.0;
  res.delta -= u_prev;
  res.delta *= 1.0 / prob.time().step(k);
  res.f_decrease = it == 0 ? 0.0 : -delta_sum(prob, d, u_prev, x, lu_prev, lx, u_prev);
  return res;
}

RunResult run_evolution(const Problem& prob, const SolverConfig& cfg) {
  RunResult run(prob.time(), prob.initial());
  SolverConfig step_cfg = cfg;
  const int n = prob.time().n_steps();
  run.steps().reserve(n);
  for (int k = 1; k <= n; ++k) {
    StepResult s = step_minimize(prob, k, run.iterate(k - 1), step_cfg);
    step_cfg.tau0 = s.tau;
    run.steps().push_back(std::move(s));
  }
  return run;
}

ELGap euler_lagrange_gap(const Problem& prob, int k, const Field& u_k, const Field& delta_k,
                         const Field& xi) {
  const StepData d = step_data(prob, k);
  const int m = prob.components();
  Field diff = xi;
  diff -= delta_k;
  ELGap gap;
  // -B(u, xi - delta) is the regularizer term; the rest is local.
  gap.lhs = -d.op.bilinear(u_k, diff);
  double local_lhs = 0.0, local_rhs = 0.0, l1 = 0.0;
  std::vector<double> dw(m), e(m);
  for (int j = 0; j < prob.grid().ny(); ++j) {
    for (int i = 0; i < prob.grid().nx(); ++i) {
      dw0_eval(prob.energy(), u_k.node(i, j), dw);
      const auto dn = delta_k.node(i, j);
      const auto fn = d.load.node(i, j);
      double en = 0.0;
      for (int c = 0; c < m; ++c) {
        e[c] = diff(i, j, c);
        en += e[c] * e[c];
        local_lhs += (fn[c] - dw[c]) * e[c];
      }
      local_lhs += r1_eval(prob.dissipation(), dn);
      local_rhs += r1_eval(prob.dissipation(), xi.node(i, j));
      l1 += std::sqrt(en);
    }
  }
  const double area = prob.grid().cell_area();
  gap.lhs += area * local_lhs;
  gap.rhs = area * local_rhs;
  gap.l1 = area * l1;
  return gap;
}

}  // namespace rateind
