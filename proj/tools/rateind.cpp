#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>

#include "rateind/config.hpp"
#include "rateind/diagnostics.hpp"
#include "rateind/kernels.hpp"
#include "rateind/output.hpp"

#ifndef RATEIND_VERSION
#define RATEIND_VERSION "dev"
#endif

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace rateind;

namespace {

constexpr int kPass = 0;
constexpr int kValidation = 1;
constexpr int kSolver = 2;

struct Manifest {
  json doc;
  bool passed = true;

  Manifest(const std::string& command, const RunConfig& cfg) {
    doc["tool"] = "rateind";
    doc["version"] = RATEIND_VERSION;
    doc["command"] = command;
    doc["threads"] = kernels::thread_count();
    doc["config"] = echo(cfg);
    doc["invariants"] = json::object();
    doc["metrics"] = json::object();
    doc["outputs"] = json::array();
  }
  void flag(const std::string& name, bool ok) {
    doc["invariants"][name] = ok;
    passed = passed && ok;
    std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
  }
  void metric(const std::string& name, const json& v) { doc["metrics"][name] = v; }
  void output(const std::string& path) { doc["outputs"].push_back(path); }
  void write(const std::string& dir) {
    doc["passed"] = passed;
    const std::string p = (fs::path(dir) / "manifest.json").string();
    write_text(p, doc.dump(2) + "\n");
  }
};

std::string prepare_out(const RunConfig& cfg, const std::string& override_dir) {
  const std::string dir = override_dir.empty() ? cfg.out_dir : override_dir;
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create " + dir + ": " + ec.message());
  return dir;
}

std::string in_dir(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

double max_abs(const Field& u) {
  double s = 0.0;
  for (const double v : u.values()) s = std::max(s, std::abs(v));
  return s;
}

// Per-run invariants shared by solve and check.
void run_invariants(Manifest& man, const RunResult& run, const Problem& prob,
                    const SolverConfig& solver) {
  const double tol = solver.effective_tol(prob.dissipation());
  double max_res = 0.0, min_dec = 0.0, max_w = 0.0;
  bool w_ok = true;
  for (const auto& s : run.steps()) {
    max_res = std::max(max_res, s.residual);
    min_dec = std::min(min_dec, s.f_decrease);
    const double w = max_abs(s.multiplier);
    max_w = std::max(max_w, w);
    if (w > prob.dissipation().yield_radius() + s.residual) w_ok = false;
  }
  man.metric("max_residual", max_res);
  man.metric("min_f_decrease", min_dec);
  man.metric("max_multiplier", max_w);
  man.flag("residual_within_tol", max_res <= tol);
  man.flag("functional_non_increasing", min_dec >= -1e-12);
  man.flag("multiplier_bound", w_ok);

  const EnergyReport en = energy_balance_report(run, prob);
  man.metric("energy_min_cumulative_slack", en.min_cumulative_slack);
  man.metric("energy_scale", en.scale);
  man.flag("energy_balance", en.ok());
}

std::vector<HolderRow> holder_rows(const RunResult& run, const RunConfig& cfg, int n_steps) {
  std::vector<HolderRow> rows;
  CampanatoOptions opts;
  opts.time_anchors = cfg.time_anchors;
  opts.max_anchors = cfg.max_anchors;
  const HolderParams hp = HolderParams::make(cfg.alpha, cfg.a);
  for (const auto target : {HolderTarget::field, HolderTarget::gradient}) {
    const bool field = target == HolderTarget::field;
    const CampanatoReport rep = campanato_report(run, hp, target, opts);
    const bool asserted = field || cfg.p > hp.d;
    for (const auto& r : rep.radii) {
      rows.push_back({n_steps, field ? "field" : "gradient", hp.alpha, hp.zeta, hp.b, r.radius,
                      r.sup, asserted});
    }
    rows.push_back({n_steps, field ? "field" : "gradient", hp.alpha, hp.zeta, hp.b, 0.0,
                    rep.seminorm, asserted});
  }
  return rows;
}

int cmd_validate(const RunConfig& cfg) {
  const Problem prob = build_problem(cfg);
  std::cout << "config ok\n"
            << "  C_P = " << prob.poincare() << "\n"
            << "  mu*C_P^2 = " << prob.convexity().product << " < " << prob.convexity().threshold
            << "\n";
  return kPass;
}

int cmd_solve(const RunConfig& cfg, const std::string& out_override) {
  const Problem prob = build_problem(cfg);
  const SolverConfig solver = build_solver(cfg);
  const std::string dir = prepare_out(cfg, out_override);
  Manifest man("solve", cfg);
  const RunResult run = run_evolution(prob, solver);
  run_invariants(man, run, prob, solver);

  write_steps_csv(run, in_dir(dir, "steps.csv"));
  man.output("steps.csv");
  write_energy_csv(energy_balance_report(run, prob), in_dir(dir, "energy.csv"));
  man.output("energy.csv");
  write_apriori_csv({run.time().n_steps()}, {apriori_track(run, prob)}, in_dir(dir, "apriori.csv"));
  man.output("apriori.csv");
  try {
    write_holder_csv(holder_rows(run, cfg, run.time().n_steps()), in_dir(dir, "holder.csv"));
    man.output("holder.csv");
  } catch (const std::invalid_argument& e) {
    std::cerr << "holder.csv skipped: " << e.what() << "\n";
  }
  for (const auto& p : write_snapshots(run, dir, cfg.snapshot_every)) {
    man.output(fs::relative(p, dir).string());
  }
  man.write(dir);
  return man.passed ? kPass : kValidation;
}

int cmd_check(const RunConfig& cfg, const std::string& out_override) {
  const Problem prob = build_problem(cfg);
  const SolverConfig solver = build_solver(cfg);
  const std::string dir = prepare_out(cfg, out_override);
  Manifest man("check", cfg);
  const RunResult run = run_evolution(prob, solver);
  run_invariants(man, run, prob, solver);

  const CertificateReport cert = el_certificate(run, prob, solver, cfg.el_tests, cfg.seed);
  man.metric("el_tests", cert.tests);
  man.metric("el_min_normalized_slack", cert.min_slack);
  man.flag("euler_lagrange_certificate", cert.ok());

  const RateIndependenceReport ident =
      rate_independence_check(prob, prob.time().nodes(), solver, false);
  man.metric("identity_reparam_diff", ident.max_iterate_diff);
  man.flag("identity_reparam_exact", ident.max_iterate_diff == 0.0);

  // Stick/yield: from a zero start nothing moves before the load leaves
  // the yield set, and the first such step moves.
  if (max_abs(prob.initial()) == 0.0) {
    const int n = prob.time().n_steps();
    int first_exceed = n + 1, first_move = n + 1;
    const Field zero(prob.grid(), prob.components());
    for (int k = 1; k <= n && first_exceed > n; ++k) {
      const Field f = prob.load(k);
      for (int j = 0; j < prob.grid().ny() && first_exceed > n; ++j) {
        for (int i = 0; i < prob.grid().nx(); ++i) {
          if (subdiff_residual(prob.dissipation(), f.node(i, j), zero.node(i, j)) > 0.0) {
            first_exceed = k;
            break;
          }
        }
      }
    }
    for (int k = 1; k <= n; ++k) {
      if (max_abs(run.iterate(k)) != 0.0) {
        first_move = k;
        break;
      }
    }
    man.metric("first_yield_step", first_exceed);
    man.metric("first_moving_step", first_move);
    man.flag("stick_yield", first_exceed == first_move);
  }

  const HolderParams hp = HolderParams::make(cfg.alpha, cfg.a);
  const JointMetricReport jm =
      joint_metric_check(hp, prob.time().t_final(), prob.grid(), cfg.metric_pairs, cfg.seed);
  man.metric("joint_metric_constant", jm.constant);
  man.metric("joint_metric_min_slack", jm.min_slack);
  man.flag("joint_metric", jm.ok);

  const AprioriReport ap = apriori_track(run, prob);
  man.flag("apriori_finite", ap.finite);

  write_steps_csv(run, in_dir(dir, "steps.csv"));
  man.output("steps.csv");
  man.write(dir);
  return man.passed ? kPass : kValidation;
}

int cmd_study(const RunConfig& cfg, std::vector<int> refine, const std::string& out_override) {
  if (refine.empty()) refine = cfg.refine;
  for (std::size_t i = 1; i < refine.size(); ++i) {
    if (refine[i] != 2 * refine[i - 1]) {
      std::cerr << "--refine must list doubling step counts\n";
      return kValidation;
    }
  }
  const Problem prob = build_problem(cfg);
  const SolverConfig solver = build_solver(cfg);
  const std::string dir = prepare_out(cfg, out_override);
  Manifest man("study", cfg);

  const std::vector<RunResult> runs = refine_runs(prob, solver, refine);
  const ConvergenceReport conv = convergence_table(runs);
  std::vector<AprioriReport> aps;
  std::vector<HolderRow> holder;
  std::vector<double> field_norms;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const Problem pi = prob.with_partition(runs[i].time(), std::nullopt);
    aps.push_back(apriori_track(runs[i], pi));
    const auto rows = holder_rows(runs[i], cfg, refine[i]);
    for (const auto& r : rows) {
      if (r.target == "field" && r.radius == 0.0) field_norms.push_back(r.value);
    }
    holder.insert(holder.end(), rows.begin(), rows.end());
  }
  const BoundednessReport bd = apriori_boundedness(aps, refine);

  write_convergence_csv(conv, in_dir(dir, "convergence.csv"));
  man.output("convergence.csv");
  write_apriori_csv(refine, aps, in_dir(dir, "apriori.csv"));
  man.output("apriori.csv");
  write_holder_csv(holder, in_dir(dir, "holder.csv"));
  man.output("holder.csv");

  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const double v : field_norms) hi = std::max(hi, v), lo = std::min(lo, v);
  const double holder_spread = hi > 0.0 ? (hi - lo) / hi : 0.0;
  man.metric("apriori_spread_space", bd.spread_space);
  man.metric("apriori_spread_time", bd.spread_time);
  man.metric("holder_field_spread", holder_spread);
  man.flag("convergence_decreasing", conv.decreasing);
  man.flag("apriori_bounded", bd.bounded());
  man.flag("holder_field_bounded", holder_spread < 0.2);
  man.write(dir);
  return man.passed ? kPass : kValidation;
}

std::vector<double> read_nodes(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open reparametrization file " + path);
  std::vector<double> nodes;
  std::string tok;
  while (in >> tok) {
    for (char& ch : tok) {
      if (ch == ',') ch = ' ';
    }
    std::istringstream ss(tok);
    double v;
    while (ss >> v) nodes.push_back(v);
    if (!ss.eof()) throw std::runtime_error("bad number in " + path + ": " + tok);
  }
  return nodes;
}

int cmd_rate(const RunConfig& cfg, const std::string& reparam, bool compose,
             const std::string& out_override) {
  const Problem prob = build_problem(cfg);
  const SolverConfig solver = build_solver(cfg);
  const std::string dir = prepare_out(cfg, out_override);
  Manifest man("rate", cfg);
  const auto nodes = read_nodes(reparam);
  RateIndependenceReport rep;
  try {
    rep = rate_independence_check(prob, nodes, solver, compose);
  } catch (const SampleMismatch& e) {
    std::cerr << "sample-sequence mismatch: " << e.what() << "\n";
    return kValidation;
  }
  std::cout.precision(17);
  std::cout << "max_iterate_diff = " << rep.max_iterate_diff << " (tol " << rep.tol << ")\n";
  man.metric("max_iterate_diff", rep.max_iterate_diff);
  man.metric("scale", rep.scale);
  man.flag("rate_independence", rep.ok());
  man.write(dir);
  return man.passed ? kPass : kValidation;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("RATEIND_THREADS")) {
    kernels::set_thread_count(std::atoi(env));
  }
  CLI::App app{"Rothe-scheme solver and diagnostics for rate-independent systems"};
  app.require_subcommand(1);
  std::string config, out, reparam;
  std::vector<int> refine;
  bool compose = false;

  auto add = [&](const std::string& name, const std::string& help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "config file")->required()->check(CLI::ExistingFile);
    return sub;
  };
  auto* validate_cmd = add("validate", "check a config against the standing assumptions");
  auto* solve_cmd = add("solve", "run the evolution and write per-step output");
  solve_cmd->add_option("--out", out, "output directory (overrides output.dir)");
  auto* check_cmd = add("check", "solve and run the invariant suite");
  check_cmd->add_option("--out", out, "output directory");
  auto* study_cmd = add("study", "refinement study over doubling step counts");
  study_cmd->add_option("--refine", refine, "step counts, e.g. 8,16,32,64")->delimiter(',');
  study_cmd->add_option("--out", out, "output directory");
  auto* rate_cmd = add("rate", "compare against a reparametrized partition");
  rate_cmd->add_option("--reparam", reparam, "file with partition nodes")
      ->required()
      ->check(CLI::ExistingFile);
  rate_cmd->add_flag("--compose", compose, "evaluate data through the node map");
  rate_cmd->add_option("--out", out, "output directory");
  (void)validate_cmd;

  CLI11_PARSE(app, argc, argv);

  RunConfig cfg;
  try {
    cfg = load_config(config);
  } catch (const ConfigError& e) {
    std::cerr << config << ": " << e.what() << "\n";
    return kValidation;
  } catch (const ValidationError& e) {
    std::cerr << e.what() << "\n";
    return kValidation;
  }

  try {
    if (app.got_subcommand("validate")) return cmd_validate(cfg);
    if (app.got_subcommand(solve_cmd)) return cmd_solve(cfg, out);
    if (app.got_subcommand(check_cmd)) return cmd_check(cfg, out);
    if (app.got_subcommand(study_cmd)) return cmd_study(cfg, refine, out);
    if (app.got_subcommand(rate_cmd)) return cmd_rate(cfg, reparam, compose, out);
  } catch (const ProblemError& e) {
    std::cerr << "(" << e.label() << ") " << e.what() << "\n";
    return kValidation;
  } catch (const StepFailure& e) {
    std::cerr << "solver failure at step " << e.step() << ": " << e.what() << "\n";
    return kSolver;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kSolver;
  }
  return kPass;
}
