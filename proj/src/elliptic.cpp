#include "rateind/elliptic.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "cell_flux.hpp"
#include "rateind/kernels.hpp"

namespace rateind {

std::string to_string(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::laplacian: return "laplacian";
    case OperatorKind::constant_anisotropic: return "constant_anisotropic";
    case OperatorKind::time_modulated: return "time_modulated";
  }
  return "unknown";
}

OperatorKind operator_kind_from_string(const std::string& s) {
  if (s == "laplacian") return OperatorKind::laplacian;
  if (s == "constant_anisotropic") return OperatorKind::constant_anisotropic;
  if (s == "time_modulated") return OperatorKind::time_modulated;
  throw std::invalid_argument("unknown operator kind '" + s + "'");
}

namespace {

Eigen::MatrixXd as_matrix(std::span<const double> m, int n) {
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) a(r, c) = m[r * n + c];
  return a;
}

std::vector<double> identity(int n) {
  std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
  for (int r = 0; r < n; ++r) a[r * n + r] = 1.0;
  return a;
}

void check_matrix(int m, const std::vector<double>& matrix) {
  if (m < 1 || m > kernels::detail::kMaxComponents) {
    throw std::invalid_argument("operator supports 1..8 components");
  }
  const int n = 2 * m;
  if (matrix.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("coefficient matrix must have (2m)^2 entries");
  }
  for (double v : matrix) {
    if (!std::isfinite(v)) throw std::invalid_argument("coefficient matrix must be finite");
  }
  if (symmetry_defect(matrix, n) != 0.0) {
    throw std::invalid_argument("coefficient matrix violates A^{ab}_{ij} = A^{ba}_{ji}");
  }
  if (!(min_eigenvalue(matrix, n) > 0.0)) {
    throw std::invalid_argument("coefficient matrix is not elliptic (kappa <= 0)");
  }
}

}  // namespace

double min_eigenvalue(std::span<const double> matrix, int n) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(as_matrix(matrix, n),
                                                    Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double spectral_norm(std::span<const double> matrix, int n) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(as_matrix(matrix, n));
  return svd.singularValues()(0);
}

double symmetry_defect(std::span<const double> matrix, int n) {
  double worst = 0.0;
  for (int r = 0; r < n; ++r)
    for (int c = r + 1; c < n; ++c)
      worst = std::max(worst, std::abs(matrix[r * n + c] - matrix[c * n + r]));
  return worst;
}

CoeffField CoeffField::laplacian(int m) {
  CoeffField a;
  a.kind_ = OperatorKind::laplacian;
  a.m_ = m;
  a.base_ = identity(2 * m);
  check_matrix(m, a.base_);
  a.kappa_ = 1.0;
  a.lip_t_ = 0.0;
  return a;
}

CoeffField CoeffField::constant_anisotropic(int m, std::vector<double> matrix) {
  check_matrix(m, matrix);
  CoeffField a;
  a.kind_ = OperatorKind::constant_anisotropic;
  a.m_ = m;
  a.base_ = std::move(matrix);
  a.kappa_ = min_eigenvalue(a.base_, 2 * m);
  a.lip_t_ = 0.0;
  return a;
}

CoeffField CoeffField::time_modulated(int m, std::vector<double> base, double eps,
                                      double omega) {
  check_matrix(m, base);
  if (!(std::abs(eps) < 1.0)) throw std::invalid_argument("modulation needs |eps| < 1");
  if (!std::isfinite(omega)) throw std::invalid_argument("modulation frequency must be finite");
  CoeffField a;
  a.kind_ = OperatorKind::time_modulated;
  a.m_ = m;
  a.base_ = std::move(base);
  a.eps_ = eps;
  a.omega_ = omega;
  a.kappa_ = (1.0 - std::abs(eps)) * min_eigenvalue(a.base_, 2 * m);
  a.lip_t_ = std::abs(eps * omega) * spectral_norm(a.base_, 2 * m);
  return a;
}

double CoeffField::modulation(double t, double x, double y) const {
  if (kind_ != OperatorKind::time_modulated) return 1.0;
  return 1.0 + eps_ * std::sin(omega_ * t) * std::cos(M_PI * x) * std::cos(M_PI * y);
}

void CoeffField::evaluate(double t, double x, double y, std::span<double> out) const {
  const double s = modulation(t, x, y);
  for (std::size_t k = 0; k < base_.size(); ++k) out[k] = s * base_[k];
}

DiscreteOperator::DiscreteOperator(const CoeffField& coeffs, const Grid& grid, double t)
    : grid_(grid), m_(coeffs.components()), uniform_(coeffs.spatially_uniform()) {
  const std::size_t n = static_cast<std::size_t>(coeffs.dim()) * coeffs.dim();
  if (uniform_) {
    mats_ = coeffs.base();
    return;
  }
  const int cx = grid.nx() + 1, cy = grid.ny() + 1;
  mats_.resize(static_cast<std::size_t>(cx) * cy * n);
  for (int cj = 0; cj < cy; ++cj) {
    for (int ci = 0; ci < cx; ++ci) {
      const double xm = (ci + 0.5) * grid.hx();
      const double ym = (cj + 0.5) * grid.hy();
      coeffs.evaluate(t, xm, ym,
                      std::span<double>(mats_.data() + (static_cast<std::size_t>(cj) * cx + ci) * n, n));
    }
  }
}

std::span<const double> DiscreteOperator::cell_matrix(int ci, int cj) const {
  const std::size_t n = static_cast<std::size_t>(2 * m_) * (2 * m_);
  if (uniform_) return {mats_.data(), n};
  return {mats_.data() + (static_cast<std::size_t>(cj) * (grid_.nx() + 1) + ci) * n, n};
}

namespace {

kernels::CellOperator view(const Grid& g, int m, bool uniform, const std::vector<double>& mats) {
  return {g.nx(), g.ny(), m, g.hx(), g.hy(), uniform, mats};
}

}  // namespace

void DiscreteOperator::apply(const Field& u, Field& out) const {
  if (u.grid() != grid_ || u.components() != m_ || !out.same_shape(u)) {
    throw std::invalid_argument("operator/field shape mismatch");
  }
  kernels::omp::apply_operator(view(grid_, m_, uniform_, mats_), u.values(), out.values());
}

Field DiscreteOperator::apply(const Field& u) const {
  Field out(u.grid(), u.components());
  apply(u, out);
  return out;
}

double DiscreteOperator::bilinear(const Field& u, const Field& v) const {
  if (u.grid() != grid_ || u.components() != m_ || !v.same_shape(u)) {
    throw std::invalid_argument("operator/field shape mismatch");
  }
  return kernels::omp::bilinear(view(grid_, m_, uniform_, mats_), u.values(), v.values());
}

Field apply_operator(const CoeffField& coeffs, double t, const Field& u) {
  return DiscreteOperator(coeffs, u.grid(), t).apply(u);
}

double bilinear_form(const CoeffField& coeffs, double t, const Field& u, const Field& v) {
  return DiscreteOperator(coeffs, u.grid(), t).bilinear(u, v);
}

CoeffReport validate_coeffs(const CoeffField& coeffs, const Grid& grid, double t_final,
                            int samples, std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("validate_coeffs needs samples >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, t_final), ux(0.0, grid.lx()),
      uy(0.0, grid.ly());
  const int n = coeffs.dim();
  std::vector<double> a(static_cast<std::size_t>(n) * n), b(a.size()), d(a.size());
  CoeffReport rep;
  rep.kappa_observed = std::numeric_limits<double>::infinity();
  const double dt = 1e-6 * std::max(1.0, t_final);
  for (int s = 0; s < samples; ++s) {
    const double t = ut(rng), x = ux(rng), y = uy(rng);
    coeffs.evaluate(t, x, y, a);
    rep.kappa_observed = std::min(rep.kappa_observed, min_eigenvalue(a, n));
    rep.symmetry_max_violation = std::max(rep.symmetry_max_violation, symmetry_defect(a, n));
    if (coeffs.time_dependent()) {
      coeffs.evaluate(t + dt, x, y, b);
      for (std::size_t k = 0; k < a.size(); ++k) d[k] = (b[k] - a[k]) / dt;
      rep.lip_t_observed = std::max(rep.lip_t_observed, spectral_norm(d, n));
    }
  }
  rep.ok = rep.kappa_observed > 0.0 && rep.symmetry_max_violation == 0.0 &&
           rep.lip_t_observed <= coeffs.lip_t() * (1.0 + 1e-6) + 1e-12;
  return rep;
}

}  // namespace rateind
