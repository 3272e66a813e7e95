#pragma once

// Data-parallel inner loops. Every kernel exists twice: an OpenMP version
// used by the library and a plain serial reference kept for tests and the
// benchmark. Reductions in the OpenMP versions go through per-row partials
// summed in row order, so results do not depend on the thread count.

#include <span>

#include "rateind/dissipation.hpp"
#include "rateind/energy.hpp"
#include "rateind/grid.hpp"

namespace rateind::kernels {

/// Geometry plus cell coefficient matrices of a frozen operator.
struct CellOperator {
  int nx;
  int ny;
  int m;
  double hx;
  double hy;
  bool uniform;                   // one matrix for all cells
  std::span<const double> mats;   // (2m)^2 per cell, cells row-major (cj outer)
};

/// Inputs of one proximal-gradient sweep:
///   z = anchor + prox_{tau R}(y - tau (-Ly + DW(y) - f) - anchor).
struct ProxSweep {
  const EnergySpec* energy;
  const DissipationSpec* dissipation;
  int m;
  double tau;
  std::span<const double> y;
  std::span<const double> ly;
  std::span<const double> load;
  std::span<const double> anchor;
};

/// Local terms of F(z) - F(x) for e = z - x. Node sum, without the factor
/// hx*hy:  R(z - a) - R(x - a) + DW(x).e + rem(x,e) - f.e - Lx.e
///         - (Lz - Lx).e / 2.
struct FunctionalDelta {
  const EnergySpec* energy;
  const DissipationSpec* dissipation;
  int m;
  std::span<const double> x;
  std::span<const double> z;
  std::span<const double> lx;
  std::span<const double> lz;
  std::span<const double> load;
  std::span<const double> anchor;
};

/// Backtracking test quantities for d = z - y, node sums without hx*hy:
///   curvature = -(Lz - Ly).d / 2 + rem(y, d),   d2 = |d|^2.
struct CurvatureInput {
  const EnergySpec* energy;
  int m;
  std::span<const double> y;
  std::span<const double> z;
  std::span<const double> ly;
  std::span<const double> lz;
};

/// Force g = Lx - DW(x) + f and the max over nodes of dist(g, dR(x - anchor)).
struct ResidualInput {
  const EnergySpec* energy;
  const DissipationSpec* dissipation;
  int m;
  std::span<const double> x;
  std::span<const double> lx;
  std::span<const double> load;
  std::span<const double> anchor;
};

/// Mean oscillation over space-time cylinders of one time window. The path
/// is given by n_layers time samples (each nx*ny*width); the cylinder at an
/// anchor node is that window times the lattice ball of the given radius,
/// cut to the grid.
struct OscillationInput {
  int nx;
  int ny;
  int width;
  double hx;
  double hy;
  double radius;
  int n_layers;
  std::span<const double> layers;
  std::span<const int> anchors;  // i + j*nx
};

namespace serial {
void apply_operator(const CellOperator& op, std::span<const double> u, std::span<double> out);
double bilinear(const CellOperator& op, std::span<const double> u, std::span<const double> v);
void gradient(int nx, int ny, int m, double hx, double hy, std::span<const double> u,
              std::span<double> out);
void prox_sweep(const ProxSweep& in, std::span<double> z);
double functional_delta(const FunctionalDelta& in, int rows);
double residual(const ResidualInput& in, std::span<double> force);
double curvature(const CurvatureInput& in, int rows, double& d2);
double dot(std::span<const double> a, std::span<const double> b, int rows);
// max over anchors of the cylinder mean of |v - <v>|
double oscillation_sup(const OscillationInput& in);
}  // namespace serial

namespace omp {
void apply_operator(const CellOperator& op, std::span<const double> u, std::span<double> out);
double bilinear(const CellOperator& op, std::span<const double> u, std::span<const double> v);
void gradient(int nx, int ny, int m, double hx, double hy, std::span<const double> u,
              std::span<double> out);
void prox_sweep(const ProxSweep& in, std::span<double> z);
double functional_delta(const FunctionalDelta& in, int rows);
double residual(const ResidualInput& in, std::span<double> force);
double curvature(const CurvatureInput& in, int rows, double& d2);
double dot(std::span<const double> a, std::span<const double> b, int rows);
// max over anchors of the cylinder mean of |v - <v>|
double oscillation_sup(const OscillationInput& in);
}  // namespace omp

// Number of OpenMP threads in use (1 without OpenMP).
int thread_count();
void set_thread_count(int n);

}  // namespace rateind::kernels
