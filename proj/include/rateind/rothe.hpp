#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rateind/dissipation.hpp"
#include "rateind/elliptic.hpp"
#include "rateind/energy.hpp"
#include "rateind/grid.hpp"
#include "rateind/loading.hpp"

namespace rateind {

/// Raised when the problem data violate a standing assumption.
class ProblemError : public std::invalid_argument {
 public:
  ProblemError(std::string label, const std::string& what)
      : std::invalid_argument(what), label_(std::move(label)) {}
  const std::string& label() const { return label_; }

 private:
  std::string label_;
};

/// Raised when an incremental minimization does not certify.
class StepFailure : public std::runtime_error {
 public:
  StepFailure(int step, double best_residual, int iters, const std::string& what)
      : std::runtime_error(what), step_(step), best_residual_(best_residual), iters_(iters) {}
  int step() const { return step_; }
  double best_residual() const { return best_residual_; }
  int iters() const { return iters_; }

 private:
  int step_;
  double best_residual_;
  int iters_;
};

/// Full data of one rate-independent evolution problem.
class Problem {
 public:
  // Throws ProblemError when (A3)/(9) fails and allow_nonconvex is false, or
  // when shapes are inconsistent.
  Problem(Grid grid, EnergySpec energy, DissipationSpec dissipation, CoeffField op,
          Loading loading, Field initial, TimePartition time, bool allow_nonconvex = false);

  const Grid& grid() const { return grid_; }
  int components() const { return initial_.components(); }
  const EnergySpec& energy() const { return energy_; }
  const DissipationSpec& dissipation() const { return dissipation_; }
  const CoeffField& op() const { return op_; }
  const Loading& loading() const { return loading_; }
  const Field& initial() const { return initial_; }
  const TimePartition& time() const { return time_; }
  double poincare() const { return poincare_; }
  const ConvexityCheck& convexity() const { return convexity_; }

  // Reparametrized copy: data (loading and coefficients) at node k are
  // evaluated at clock(time[k]).
  Problem with_partition(TimePartition time, std::optional<NodeMap> clock) const;

  // Time at which the data of step k are sampled.
  double data_time(int k) const;
  Field load(int k) const;

 private:
  Grid grid_;
  EnergySpec energy_;
  DissipationSpec dissipation_;
  CoeffField op_;
  Loading loading_;
  Field initial_;
  TimePartition time_;
  std::optional<NodeMap> clock_;
  double poincare_ = 0.0;
  ConvexityCheck convexity_;
};

struct SolverConfig {
  std::optional<double> tol;  // residual tolerance; default 1e-8 * yield
  int max_iters = 50000;
  double tau0 = 1.0;
  double backtrack = 0.5;
  bool accel = true;
  double tau_min = 1e-14;

  double effective_tol(const DissipationSpec& d) const {
    return tol.value_or(1e-8 * d.yield_scale());
  }
  void validate() const;
};

struct StepResult {
  Field u;
  Field delta;       // (u_k - u_{k-1}) / h
  Field multiplier;  // w_k = f_k + L u_k - DW0(u_k)
  double residual = 0.0;
  int inner_iters = 0;
  double f_decrease = 0.0;  // F_k(u_{k-1}) - F_k(u_k)
  double tau = 0.0;         // step size in use at exit
  double max_accepted_increase = 0.0;  // over accepted inner iterates, <= 0
};

/// Rothe iterates and their piecewise-linear time interpolant.
class RunResult {
 public:
  RunResult(TimePartition time, Field initial) : time_(std::move(time)), initial_(std::move(initial)) {}

  const TimePartition& time() const { return time_; }
  const std::vector<StepResult>& steps() const { return steps_; }
  std::vector<StepResult>& steps() { return steps_; }
  // k = 0 gives the initial value.
  const Field& iterate(int k) const { return k == 0 ? initial_ : steps_[k - 1].u; }
  Field interpolate(double t) const;

 private:
  TimePartition time_;
  Field initial_;
  std::vector<StepResult> steps_;
};

// F_k(v) = sum h^2 [R(v - u_prev) + W0(v) - f_k.v] + B_k(v,v)/2.
double incremental_functional(const Problem& prob, int k, const Field& v, const Field& u_prev);

// F_k(z) - F_k(x), accumulated from local differences (no cancellation
// between the two totals).
double functional_difference(const Problem& prob, int k, const Field& x, const Field& z,
                             const Field& u_prev);

StepResult step_minimize(const Problem& prob, int k, const Field& u_prev,
                         const SolverConfig& cfg);

RunResult run_evolution(const Problem& prob, const SolverConfig& cfg);

struct ELGap {
  double lhs = 0.0;  // int R(delta) + (Lu - DW0(u) + f).(xi - delta)
  double rhs = 0.0;  // int R(xi)
  double l1 = 0.0;   // ||xi - delta||_1
  double slack(double tol) const { return rhs + tol * l1 - lhs; }
};

// Discrete form of the Euler-Lagrange inequality tested with xi, with the
// regularizer pairing evaluated through the bilinear form.
ELGap euler_lagrange_gap(const Problem& prob, int k, const Field& u_k, const Field& delta_k,
                         const Field& xi);

}  // namespace rateind
