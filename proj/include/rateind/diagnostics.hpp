#pragma once

#include <cstdint>
#include <vector>

#include "rateind/rothe.hpp"

namespace rateind {

struct AprioriRow {
  int k = 0;
  double t = 0.0;
  double hess_lp = 0.0;       // ||D^2 u_k||_{L^p}, interior nodes
  double grad_delta_l2 = 0.0; // ||grad delta_k||_{L^2}
  double grad_u_l2 = 0.0;
  double u_lq = 0.0;
  double w_inf = 0.0;         // ||multiplier||_inf
  double f_lp = 0.0;
  double f_l2 = 0.0;
  double rate_l2 = 0.0;       // mean ||d_t f||_{L^2} over (t_{k-1}, t_k]
  double r_space = 0.0;
  double r_time = 0.0;
};

struct AprioriReport {
  std::vector<AprioriRow> rows;
  double max_r_space = 0.0;
  double max_r_time = 0.0;
  double max_w_inf = 0.0;
  bool finite = true;
};

// r_space = ||D^2 u||_p / (1 + ||f||_p + ||f||_2^(q-1))
// r_time  = ||grad delta||_2 (1 - mu C_P^2) / (1 + rate + ||f||_2 + ||f||_2^(q-1))
AprioriReport apriori_track(const RunResult& run, const Problem& prob);

/// Spread (max - min) / max of the per-run maxima across a refinement family.
struct BoundednessReport {
  std::vector<int> n_steps;
  std::vector<double> max_r_space;
  std::vector<double> max_r_time;
  double spread_space = 0.0;
  double spread_time = 0.0;
  double limit = 0.2;
  bool bounded() const { return spread_space < limit && spread_time < limit; }
};

BoundednessReport apriori_boundedness(const std::vector<AprioriReport>& reports,
                                      const std::vector<int>& n_steps, double limit = 0.2);

/// Hoelder exponents in d space dimensions for a time exponent a > 1.
struct HolderParams {
  double alpha = 0.5;
  double a = 2.0;
  int d = 2;
  double b = 0.0;
  double zeta = 0.0;

  static HolderParams make(double alpha, double a, int d = 2);
  // K with |t-s|^zeta + |x-y|^alpha <= K (|t-s| + |x-y|)^zeta on
  // (0,T) x Omega.
  double joint_metric_constant(double t_final, double diameter) const;
};

struct JointMetricReport {
  int pairs = 0;
  double constant = 0.0;
  double min_slack = 0.0;  // min of K (...)^zeta - lhs
  bool ok = false;
};

JointMetricReport joint_metric_check(const HolderParams& params, double t_final, const Grid& grid,
                                     int pairs, std::uint64_t seed);

// Admissible alpha ranges: (0, min(1, (2p-d)/p)) for the field and
// (0, min(1, (p-d)/p)) for the gradient (empty when p <= d).
double max_alpha_field(double p, int d = 2);
double max_alpha_gradient(double p, int d = 2);

enum class HolderTarget { field, gradient };

struct CampanatoOptions {
  int max_anchors = 10000;
  int time_anchors = 8;  // fixed, independent of the partition
  int time_samples = 8;  // midpoint samples inside each cylinder
  bool parallel = true;
};

struct CampanatoRow {
  double radius = 0.0;
  double sup = 0.0;  // max over anchors of mean oscillation / r^alpha
};

struct CampanatoReport {
  double seminorm = 0.0;
  std::vector<CampanatoRow> radii;
  int space_anchors = 0;
  int time_anchors = 0;
};

// Sup over dyadic radii r = 2hx, 4hx, ... <= min(lx,ly)/4 and sampled
// cylinders (t, t + r^b) x B_r(x) of the mean oscillation of u (or of its
// central-difference gradient) divided by r^alpha. Balls are intersected
// with the interior lattice. Throws std::invalid_argument if no radius fits.
CampanatoReport campanato_report(const RunResult& run, const HolderParams& params,
                                 HolderTarget which, const CampanatoOptions& opts = {});
double campanato_seminorm(const RunResult& run, const HolderParams& params, HolderTarget which,
                          const CampanatoOptions& opts = {});

struct RateIndependenceReport {
  double max_iterate_diff = 0.0;
  double scale = 0.0;  // max_k ||u_k||_inf of the reference run
  double tol = 0.0;
  bool ok() const { return max_iterate_diff <= tol; }
};

/// Raised when the two partitions do not see the same data sequence.
class SampleMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Runs prob on its own partition and on `nodes` (same count and endpoints).
// With compose = true the data of the second run are evaluated through the
// node map nodes[k] -> time[k]; otherwise the sampled data must coincide and
// SampleMismatch is thrown when they do not.
RateIndependenceReport rate_independence_check(const Problem& prob,
                                               const std::vector<double>& nodes,
                                               const SolverConfig& cfg, bool compose);

// Uniform-partition runs of prob for each step count.
std::vector<RunResult> refine_runs(const Problem& prob, const SolverConfig& cfg,
                                   const std::vector<int>& n_list);

struct ConvergenceRow {
  int n = 0;            // coarse run N, compared against 2N
  double diff_l2 = 0.0; // max_t ||u^{2N} - u^N||_{L^2}
  double diff_grad_l2 = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  bool decreasing = true;  // diff_l2 strictly decreasing
};

// Consecutive runs must have doubling step counts on one grid.
ConvergenceReport convergence_table(const std::vector<RunResult>& runs);
ConvergenceReport convergence_study(const Problem& prob, const SolverConfig& cfg,
                                    const std::vector<int>& n_list);

struct EnergyRow {
  int k = 0;
  double t = 0.0;
  double dissipated = 0.0;  // int R(u_k - u_{k-1})
  double stored = 0.0;      // E_k(u_k) = B_k(u_k,u_k)/2 + int W0(u_k)
  double work = 0.0;        // <f_k, u_k - u_{k-1}> + E_k(u_{k-1}) - E_{k-1}(u_{k-1})
  double step_slack = 0.0;  // F_k(u_{k-1}) - F_k(u_k)
  double cumulative_slack = 0.0;
};

struct EnergyReport {
  std::vector<EnergyRow> rows;
  double initial_energy = 0.0;
  double total_dissipated = 0.0;
  double total_work = 0.0;
  double scale = 1.0;
  double min_step_slack = 0.0;
  double min_cumulative_slack = 0.0;
  bool ok(double rel = 1e-9) const { return min_cumulative_slack >= -rel * scale; }
};

EnergyReport energy_balance_report(const RunResult& run, const Problem& prob);

/// Euler-Lagrange certificate of every step: residual maximum and the
/// worst normalized slack of the discrete inequality over random test
/// fields.
struct CertificateReport {
  double max_residual = 0.0;
  double tol = 0.0;
  double min_slack = 0.0;  // min over steps and xi of slack / max(1, ||xi - delta||_1)
  int tests = 0;
  int violations = 0;
  bool ok() const { return max_residual <= tol && violations == 0; }
};

CertificateReport el_certificate(const RunResult& run, const Problem& prob,
                                 const SolverConfig& cfg, int tests_per_step, std::uint64_t seed);

}  // namespace rateind
