#include "rateind/output.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rateind {

namespace {

class Csv {
 public:
  Csv(const std::string& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    out_.precision(17);
    out_ << header << "\n";
  }
  template <class... T>
  void row(const T&... v) {
    int n = 0;
    ((out_ << (n++ ? "," : "") << v), ...);
    out_ << "\n";
  }
  ~Csv() noexcept(false) {
    out_.flush();
    if (!out_ && std::uncaught_exceptions() == 0) throw std::runtime_error("write failed: " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

double max_abs(const Field& u) {
  double s = 0.0;
  for (const double v : u.values()) s = std::max(s, std::abs(v));
  return s;
}

}  // namespace

void write_steps_csv(const RunResult& run, const std::string& path) {
  Csv csv(path,
          "k,t_k,residual,inner_iters,f_decrease,tau,u_l2,u_inf,grad_u_l2,delta_l2,"
          "grad_delta_l2,w_inf");
  for (int k = 1; k <= run.time().n_steps(); ++k) {
    const StepResult& s = run.steps()[k - 1];
    csv.row(k, run.time()[k], s.residual, s.inner_iters, s.f_decrease, s.tau, lp_norm(s.u, 2.0),
            max_abs(s.u), edge_gradient_l2(s.u), lp_norm(s.delta, 2.0), edge_gradient_l2(s.delta),
            max_abs(s.multiplier));
  }
}

void write_apriori_csv(const std::vector<int>& n_steps, const std::vector<AprioriReport>& reports,
                       const std::string& path) {
  Csv csv(path,
          "n_steps,k,t_k,hess_lp,grad_delta_l2,grad_u_l2,u_lq,w_inf,f_lp,f_l2,rate_l2,r_space,"
          "r_time");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    for (const auto& r : reports[i].rows) {
      csv.row(n_steps[i], r.k, r.t, r.hess_lp, r.grad_delta_l2, r.grad_u_l2, r.u_lq, r.w_inf,
              r.f_lp, r.f_l2, r.rate_l2, r.r_space, r.r_time);
    }
  }
}

void write_holder_csv(const std::vector<HolderRow>& rows, const std::string& path) {
  Csv csv(path, "n_steps,target,alpha,zeta,b,radius,value,asserted");
  for (const auto& r : rows) {
    csv.row(r.n_steps, r.target, r.alpha, r.zeta, r.b, r.radius, r.value, r.asserted ? 1 : 0);
  }
}

void write_energy_csv(const EnergyReport& report, const std::string& path) {
  Csv csv(path, "k,t_k,dissipated,stored,work,step_slack,cumulative_slack");
  for (const auto& r : report.rows) {
    csv.row(r.k, r.t, r.dissipated, r.stored, r.work, r.step_slack, r.cumulative_slack);
  }
}

void write_convergence_csv(const ConvergenceReport& report, const std::string& path) {
  Csv csv(path, "n,n_fine,diff_c_l2,diff_c_grad_l2");
  for (const auto& r : report.rows) csv.row(r.n, 2 * r.n, r.diff_l2, r.diff_grad_l2);
}

std::vector<std::string> write_snapshots(const RunResult& run, const std::string& dir, int every) {
  std::vector<std::string> paths;
  if (every <= 0) return paths;
  const std::filesystem::path sub = std::filesystem::path(dir) / "snapshots";
  std::error_code ec;
  std::filesystem::create_directories(sub, ec);
  if (ec) throw std::runtime_error("cannot create " + sub.string() + ": " + ec.message());
  const int n = run.time().n_steps();
  for (int k = 0; k <= n; ++k) {
    if (k % every != 0 && k != n) continue;
    char name[32];
    std::snprintf(name, sizeof name, "u_%05d.txt", k);
    const std::string p = (sub / name).string();
    write_dump(run.iterate(k), p);
    paths.push_back(p);
  }
  return paths;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace rateind
