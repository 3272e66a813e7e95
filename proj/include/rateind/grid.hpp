#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rateind {

/// Uniform rectangular grid on (0,lx) x (0,ly) with nx x ny interior nodes.
/// Boundary nodes are implicit and carry the value zero.
class Grid {
 public:
  Grid(double lx, double ly, int nx, int ny);

  double lx() const { return lx_; }
  double ly() const { return ly_; }
  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double hx() const { return lx_ / (nx_ + 1); }
  double hy() const { return ly_ / (ny_ + 1); }
  double cell_area() const { return hx() * hy(); }
  std::size_t nodes() const { return static_cast<std::size_t>(nx_) * ny_; }

  // Interior node (i,j), 0-based, sits at ((i+1) hx, (j+1) hy).
  double x(int i) const { return (i + 1) * hx(); }
  double y(int j) const { return (j + 1) * hy(); }

  double diameter() const;

  bool operator==(const Grid& other) const = default;

 private:
  double lx_;
  double ly_;
  int nx_;
  int ny_;
};

/// Vector-valued grid function with zero boundary trace. Storage is row-major
/// with j outer, i inner, components innermost.
class Field {
 public:
  Field(const Grid& grid, int m);
  Field(const Grid& grid, int m, std::vector<double> values);

  template <class Fn>
  static Field sample(const Grid& grid, int m, Fn&& fn) {
    Field f(grid, m);
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        fn(grid.x(i), grid.y(j), f.node(i, j));
      }
    }
    f.check_finite();
    return f;
  }

  const Grid& grid() const { return grid_; }
  int components() const { return m_; }
  std::size_t size() const { return values_.size(); }

  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }

  std::size_t offset(int i, int j) const {
    return (static_cast<std::size_t>(j) * grid_.nx() + i) * m_;
  }
  std::span<const double> node(int i, int j) const {
    return {values_.data() + offset(i, j), static_cast<std::size_t>(m_)};
  }
  std::span<double> node(int i, int j) {
    return {values_.data() + offset(i, j), static_cast<std::size_t>(m_)};
  }
  double operator()(int i, int j, int c) const { return values_[offset(i, j) + c]; }
  double& operator()(int i, int j, int c) { return values_[offset(i, j) + c]; }

  Field& operator+=(const Field& other);
  Field& operator-=(const Field& other);
  Field& operator*=(double s);
  friend Field operator+(Field a, const Field& b) { return a += b; }
  friend Field operator-(Field a, const Field& b) { return a -= b; }
  friend Field operator*(double s, Field a) { return a *= s; }

  bool same_shape(const Field& other) const {
    return grid_ == other.grid_ && m_ == other.m_;
  }

  /// Throws std::domain_error if any entry is NaN or infinite.
  void check_finite() const;

  bool operator==(const Field& other) const = default;

 private:
  Grid grid_;
  int m_;
  std::vector<double> values_;
};

/// Per-node vectors of fixed width on an (nx x ny) lattice. Used for
/// gradients (width 2m) and Hessians (width 4m) which are not Fields.
struct NodalArray {
  int nx = 0;
  int ny = 0;
  int width = 0;
  std::vector<double> data;

  NodalArray() = default;
  NodalArray(int nx_, int ny_, int width_)
      : nx(nx_), ny(ny_), width(width_),
        data(static_cast<std::size_t>(nx_) * ny_ * width_, 0.0) {}

  std::size_t offset(int i, int j) const {
    return (static_cast<std::size_t>(j) * nx + i) * width;
  }
  std::span<const double> at(int i, int j) const {
    return {data.data() + offset(i, j), static_cast<std::size_t>(width)};
  }
  std::span<double> at(int i, int j) {
    return {data.data() + offset(i, j), static_cast<std::size_t>(width)};
  }
};

/// Time nodes 0 = t_0 < t_1 < ... < t_N = T.
class TimePartition {
 public:
  static TimePartition uniform(double t_final, int n_steps);
  static TimePartition from_nodes(std::vector<double> nodes);

  double t_final() const { return nodes_.back(); }
  int n_steps() const { return static_cast<int>(nodes_.size()) - 1; }
  double operator[](int k) const { return nodes_[k]; }
  double step(int k) const { return nodes_[k] - nodes_[k - 1]; }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  explicit TimePartition(std::vector<double> nodes) : nodes_(std::move(nodes)) {}
  std::vector<double> nodes_;
};

// Central differences with zero ghost values. Width 2m per node, ordered
// (component, direction): [d_x u^0, d_y u^0, d_x u^1, ...].
NodalArray gradient(const Field& u);

// Second differences on the sub-grid 1 <= i <= nx-2, 1 <= j <= ny-2 (0-based)
// where no ghost value enters the stencil. Width 4m per node, ordered
// (component, xx, xy, yx, yy).
NodalArray hessian_interior(const Field& u);

// Discrete L^p norm with node-midpoint quadrature of weight `cell_area`.
// The pointwise magnitude is the Euclidean norm over the node's entries.
// p = infinity gives the max.
double lp_norm(std::span<const double> values, int width, double cell_area, double p);
double lp_norm(const Field& u, double p);
double lp_norm(const NodalArray& w, double cell_area, double p);

// L^2 norm of the edge (forward) difference gradient, ghost edges included:
// sqrt(sum over x- and y-edges of |difference / h|^2 * hx*hy). This is the
// norm induced by the 5-point Dirichlet Laplacian, hence the one for which
// poincare_constant is sharp.
double edge_gradient_l2(const Field& u);

struct PoincareOptions {
  double tol = 1e-8;
  int max_iters = 500;
};

// 1/sqrt(lambda_1) of the 5-point Dirichlet Laplacian by inverse power
// iteration. Throws std::runtime_error on non-convergence.
double poincare_constant(const Grid& grid, const PoincareOptions& opts = {});

// Grid dump: header "nx ny m hx hy", then nx*ny lines of m values,
// j outer, i inner. Values are written with 17 significant digits.
void write_dump(const Field& u, const std::string& path);
Field read_dump(const std::string& path, double lx, double ly);
Field read_dump(const std::string& path);

}  // namespace rateind
