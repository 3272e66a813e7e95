#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rateind/grid.hpp"

namespace rateind {

enum class OperatorKind { laplacian, constant_anisotropic, time_modulated };

std::string to_string(OperatorKind kind);
OperatorKind operator_kind_from_string(const std::string& s);

/// Coefficients A^{ab}_{ij}(t,x) of L_t v = div(A grad v), stored as the
/// symmetric (2m)x(2m) matrix M[(a,i),(b,j)] with row index a*2 + i.
///
/// time_modulated: A(t,x) = (1 + eps sin(omega t) s(x)) A0 with the shape
/// s(x,y) = cos(pi x) cos(pi y).
class CoeffField {
 public:
  static CoeffField laplacian(int m);
  // Throws std::invalid_argument if `matrix` is not symmetric or not
  // positive definite.
  static CoeffField constant_anisotropic(int m, std::vector<double> matrix);
  static CoeffField time_modulated(int m, std::vector<double> base, double eps, double omega);

  OperatorKind kind() const { return kind_; }
  int components() const { return m_; }
  int dim() const { return 2 * m_; }
  bool time_dependent() const { return kind_ == OperatorKind::time_modulated && eps_ != 0.0; }
  bool spatially_uniform() const { return kind_ != OperatorKind::time_modulated || eps_ == 0.0; }
  double epsilon() const { return eps_; }
  double omega() const { return omega_; }
  const std::vector<double>& base() const { return base_; }

  double kappa() const { return kappa_; }  // guaranteed ellipticity constant
  double lip_t() const { return lip_t_; }  // bound on |dA/dt| (spectral norm)

  double modulation(double t, double x, double y) const;
  // Writes the (2m)^2 matrix at (t,x,y) into out.
  void evaluate(double t, double x, double y, std::span<double> out) const;

 private:
  CoeffField() = default;
  OperatorKind kind_ = OperatorKind::laplacian;
  int m_ = 1;
  std::vector<double> base_;
  double eps_ = 0.0;
  double omega_ = 0.0;
  double kappa_ = 1.0;
  double lip_t_ = 0.0;
};

// Smallest eigenvalue of a symmetric n x n matrix (row-major).
double min_eigenvalue(std::span<const double> matrix, int n);
double spectral_norm(std::span<const double> matrix, int n);
double symmetry_defect(std::span<const double> matrix, int n);

/// Coefficients frozen at a time instant and evaluated at cell midpoints.
/// Cell (ci,cj), 0 <= ci <= nx, 0 <= cj <= ny, has corners at nodes
/// ci..ci+1, cj..cj+1 of the ghost-extended lattice.
class DiscreteOperator {
 public:
  DiscreteOperator(const CoeffField& coeffs, const Grid& grid, double t);

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  bool uniform() const { return uniform_; }
  std::span<const double> cell_matrix(int ci, int cj) const;

  // L u with <L u, v>_h = -B(u, v) for all v.
  Field apply(const Field& u) const;
  void apply(const Field& u, Field& out) const;
  // B(u,v) = sum over cells of hx hy * (quadrature of grad u : A : grad v).
  double bilinear(const Field& u, const Field& v) const;

 private:
  Grid grid_;
  int m_;
  bool uniform_;
  std::vector<double> mats_;
};

Field apply_operator(const CoeffField& coeffs, double t, const Field& u);
double bilinear_form(const CoeffField& coeffs, double t, const Field& u, const Field& v);

struct CoeffReport {
  double kappa_observed = 0.0;
  double symmetry_max_violation = 0.0;
  double lip_t_observed = 0.0;
  bool ok = false;  // kappa_observed > 0, symmetric, lip_t_observed <= lip_t
};

// Samples (t, x) uniformly in [0, t_final] x Omega.
CoeffReport validate_coeffs(const CoeffField& coeffs, const Grid& grid, double t_final,
                            int samples, std::uint64_t seed = 1);

}  // namespace rateind
