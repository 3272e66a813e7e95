#pragma once

#include <string>
#include <vector>

#include "rateind/diagnostics.hpp"

namespace rateind {

struct HolderRow {
  int n_steps = 0;
  std::string target;  // field | gradient
  double alpha = 0.0;
  double zeta = 0.0;
  double b = 0.0;
  double radius = 0.0;  // 0 marks the seminorm (sup over radii)
  double value = 0.0;
  bool asserted = true;
};

// CSV writers use 17 significant digits. All throw std::runtime_error
// naming the path on I/O failure.
void write_steps_csv(const RunResult& run, const std::string& path);
void write_apriori_csv(const std::vector<int>& n_steps, const std::vector<AprioriReport>& reports,
                       const std::string& path);
void write_holder_csv(const std::vector<HolderRow>& rows, const std::string& path);
void write_energy_csv(const EnergyReport& report, const std::string& path);
void write_convergence_csv(const ConvergenceReport& report, const std::string& path);
// u_k for every k divisible by `every` (and the final step), as grid dumps
// snapshots/u_<k>.txt under dir. Returns the written paths.
std::vector<std::string> write_snapshots(const RunResult& run, const std::string& dir, int every);
void write_text(const std::string& path, const std::string& text);

}  // namespace rateind
