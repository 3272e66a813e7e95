#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "rateind/rothe.hpp"

namespace rateind {

/// Malformed config text: bad syntax, unknown key or a value of the wrong
/// type. line is 0 when the parser cannot attribute one.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0) : std::runtime_error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct ValidationIssue {
  std::string label;   // A1 .. A6, or "config" for solver and output keys
  std::string clause;  // sub-condition, e.g. "(8)"; may be empty
  std::string key;
  std::string observed;
  std::string required;
};

std::string format_issue(const ValidationIssue& issue);

class ValidationError : public std::runtime_error {
 public:
  explicit ValidationError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// All run settings. An empty config file gives these defaults, which form
/// a valid problem.
struct RunConfig {
  // [grid]
  double lx = 1.0;
  double ly = 1.0;
  int nx = 63;
  int ny = 63;
  int m = 1;
  // [energy]
  std::string energy_kind = "double_well";
  double gamma = 0.05;
  std::optional<double> q;           // must match the kind when given
  std::vector<double> coeffs;        // custom_polynomial
  double growth_c = 0.0;             // custom_polynomial
  double mu = 0.0;                   // custom_polynomial
  // [dissipation]
  std::string dissipation_kind = "euclidean";
  std::vector<double> c{1.0};
  // [operator]
  std::string operator_kind = "laplacian";
  std::vector<double> matrix;        // (2m)^2 entries, row index a*2 + i
  double epsilon = 0.0;
  double op_omega = 0.0;
  // [loading]
  std::string loading_kind = "analytic";
  std::string profile = "ramp";
  std::string shape = "sine_bump";
  double amplitude = 3.0;
  double load_omega = 1.0;
  double width = 0.15;
  std::vector<double> direction;
  std::vector<double> sample_times;
  std::vector<std::string> sample_files;
  double a = 2.0;
  double p = 4.0;
  // [initial]
  std::string initial_file;          // empty: zero field
  // [time]
  double t_final = 1.0;
  int steps = 16;
  std::vector<double> nodes;         // overrides t_final/steps when given
  // [solver]
  std::optional<double> tol;
  int max_iters = 50000;
  double tau0 = 1.0;
  double backtrack = 0.5;
  bool accel = true;
  bool allow_nonconvex = false;
  // [diagnostics]
  double alpha = 0.5;
  int el_tests = 50;
  std::uint64_t seed = 1;
  std::vector<int> refine{16, 32, 64};
  int time_anchors = 8;
  int max_anchors = 10000;
  int metric_pairs = 10000;
  // [output]
  std::string out_dir = "out";
  int snapshot_every = 0;

  std::string base_dir;  // directory relative file names resolve against
};

// Syntax and types only.
RunConfig parse_config(const std::string& text, const std::string& base_dir = ".");
// Parses and validates; throws ConfigError or ValidationError.
RunConfig load_config(const std::string& path);
std::vector<ValidationIssue> validate(const RunConfig& cfg);
// Canonical text form; parse_config(echo(c)) reproduces c.
std::string echo(const RunConfig& cfg);

Grid build_grid(const RunConfig& cfg);
EnergySpec build_energy(const RunConfig& cfg);
DissipationSpec build_dissipation(const RunConfig& cfg);
CoeffField build_operator(const RunConfig& cfg);
Loading build_loading(const RunConfig& cfg);
TimePartition build_time(const RunConfig& cfg);
Problem build_problem(const RunConfig& cfg);
SolverConfig build_solver(const RunConfig& cfg);

}  // namespace rateind
