#include "rateind/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "rateind/kernels.hpp"

namespace rateind {

Grid::Grid(double lx, double ly, int nx, int ny) : lx_(lx), ly_(ly), nx_(nx), ny_(ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || !std::isfinite(lx) || !std::isfinite(ly)) {
    throw std::invalid_argument("grid side lengths must be positive and finite");
  }
  if (nx < 3 || ny < 3) throw std::invalid_argument("grid needs at least 3x3 interior nodes");
}

double Grid::diameter() const { return std::hypot(lx_, ly_); }

Field::Field(const Grid& grid, int m) : grid_(grid), m_(m) {
  if (m < 1) throw std::invalid_argument("field needs at least one component");
  values_.assign(grid.nodes() * m, 0.0);
}

Field::Field(const Grid& grid, int m, std::vector<double> values)
    : grid_(grid), m_(m), values_(std::move(values)) {
  if (m < 1) throw std::invalid_argument("field needs at least one component");
  if (values_.size() != grid.nodes() * m) {
    throw std::invalid_argument("field value count must equal nx*ny*m");
  }
  check_finite();
}

Field& Field::operator+=(const Field& other) {
  if (!same_shape(other)) throw std::invalid_argument("field shape mismatch");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] += other.values_[n];
  return *this;
}

Field& Field::operator-=(const Field& other) {
  if (!same_shape(other)) throw std::invalid_argument("field shape mismatch");
  for (std::size_t n = 0; n < values_.size(); ++n) values_[n] -= other.values_[n];
  return *this;
}

Field& Field::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

void Field::check_finite() const {
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw std::domain_error("field contains non-finite values");
  }
}

TimePartition TimePartition::uniform(double t_final, int n_steps) {
  if (!(t_final > 0.0) || n_steps < 1) {
    throw std::invalid_argument("uniform partition needs T > 0 and N >= 1");
  }
  std::vector<double> nodes(n_steps + 1);
  for (int k = 0; k <= n_steps; ++k) nodes[k] = t_final * k / n_steps;
  nodes.back() = t_final;
  return TimePartition(std::move(nodes));
}

TimePartition TimePartition::from_nodes(std::vector<double> nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("partition needs at least two nodes");
  if (nodes.front() != 0.0) throw std::invalid_argument("partition must start at t = 0");
  for (std::size_t k = 1; k < nodes.size(); ++k) {
    if (!(nodes[k] > nodes[k - 1]) || !std::isfinite(nodes[k])) {
      throw std::invalid_argument("partition nodes must be finite and strictly increasing");
    }
  }
  return TimePartition(std::move(nodes));
}

NodalArray gradient(const Field& u) {
  const Grid& g = u.grid();
  NodalArray out(g.nx(), g.ny(), 2 * u.components());
  kernels::omp::gradient(g.nx(), g.ny(), u.components(), g.hx(), g.hy(), u.values(), out.data);
  return out;
}

NodalArray hessian_interior(const Field& u) {
  const Grid& g = u.grid();
  if (g.nx() < 5 || g.ny() < 5) {
    throw std::invalid_argument("hessian_interior needs nx, ny >= 5");
  }
  const int m = u.components();
  const double hx = g.hx(), hy = g.hy();
  NodalArray out(g.nx() - 2, g.ny() - 2, 4 * m);
  for (int j = 1; j < g.ny() - 1; ++j) {
    for (int i = 1; i < g.nx() - 1; ++i) {
      auto dst = out.at(i - 1, j - 1);
      for (int c = 0; c < m; ++c) {
        const double uc = u(i, j, c);
        const double dxx = (u(i + 1, j, c) - 2.0 * uc + u(i - 1, j, c)) / (hx * hx);
        const double dyy = (u(i, j + 1, c) - 2.0 * uc + u(i, j - 1, c)) / (hy * hy);
        const double dxy =
            (u(i + 1, j + 1, c) - u(i + 1, j - 1, c) - u(i - 1, j + 1, c) + u(i - 1, j - 1, c)) /
            (4.0 * hx * hy);
        dst[4 * c] = dxx;
        dst[4 * c + 1] = dxy;
        dst[4 * c + 2] = dxy;
        dst[4 * c + 3] = dyy;
      }
    }
  }
  return out;
}

double lp_norm(std::span<const double> values, int width, double cell_area, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("lp_norm needs p >= 1");
  const std::size_t nodes = values.size() / width;
  if (std::isinf(p)) {
    double worst = 0.0;
    for (std::size_t n = 0; n < nodes; ++n) {
      double s = 0.0;
      for (int c = 0; c < width; ++c) s += values[n * width + c] * values[n * width + c];
      worst = std::max(worst, std::sqrt(s));
    }
    return worst;
  }
  double total = 0.0;
  for (std::size_t n = 0; n < nodes; ++n) {
    double s = 0.0;
    for (int c = 0; c < width; ++c) s += values[n * width + c] * values[n * width + c];
    total += p == 2.0 ? s : std::pow(std::sqrt(s), p);
  }
  return std::pow(cell_area * total, 1.0 / p);
}

double lp_norm(const Field& u, double p) {
  return lp_norm(u.values(), u.components(), u.grid().cell_area(), p);
}

double lp_norm(const NodalArray& w, double cell_area, double p) {
  return lp_norm(w.data, w.width, cell_area, p);
}

double edge_gradient_l2(const Field& u) {
  const Grid& g = u.grid();
  const int m = u.components();
  auto at = [&](int i, int j, int c) {
    if (i < 0 || i >= g.nx() || j < 0 || j >= g.ny()) return 0.0;
    return u(i, j, c);
  };
  double sx = 0.0, sy = 0.0;
  for (int j = -1; j < g.ny(); ++j) {
    for (int i = -1; i < g.nx(); ++i) {
      for (int c = 0; c < m; ++c) {
        if (j >= 0) {
          const double d = at(i + 1, j, c) - at(i, j, c);
          sx += d * d;
        }
        if (i >= 0) {
          const double d = at(i, j + 1, c) - at(i, j, c);
          sy += d * d;
        }
      }
    }
  }
  return std::sqrt(g.cell_area() * (sx / (g.hx() * g.hx()) + sy / (g.hy() * g.hy())));
}

namespace {

// y = -Delta_h x, scalar 5-point stencil with zero Dirichlet ghosts.
void neg_laplacian(const Grid& g, const std::vector<double>& x, std::vector<double>& y) {
  const int nx = g.nx(), ny = g.ny();
  const double ax = 1.0 / (g.hx() * g.hx()), ay = 1.0 / (g.hy() * g.hy());
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t n = static_cast<std::size_t>(j) * nx + i;
      const double c = x[n];
      const double e = i + 1 < nx ? x[n + 1] : 0.0;
      const double w = i > 0 ? x[n - 1] : 0.0;
      const double no = j + 1 < ny ? x[n + nx] : 0.0;
      const double s = j > 0 ? x[n - nx] : 0.0;
      y[n] = ax * (2.0 * c - e - w) + ay * (2.0 * c - no - s);
    }
  }
}

double dotv(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s;
}

// Conjugate gradients for -Delta_h x = b, x used as initial guess.
void cg_solve(const Grid& g, const std::vector<double>& b, std::vector<double>& x) {
  const std::size_t n = b.size();
  std::vector<double> r(n), p(n), ap(n);
  neg_laplacian(g, x, ap);
  for (std::size_t k = 0; k < n; ++k) r[k] = b[k] - ap[k];
  p = r;
  double rr = dotv(r, r);
  const double stop = 1e-28 * std::max(dotv(b, b), 1e-300);
  for (std::size_t it = 0; it < 4 * n && rr > stop; ++it) {
    neg_laplacian(g, p, ap);
    const double alpha = rr / dotv(p, ap);
    for (std::size_t k = 0; k < n; ++k) {
      x[k] += alpha * p[k];
      r[k] -= alpha * ap[k];
    }
    const double rr_new = dotv(r, r);
    const double beta = rr_new / rr;
    rr = rr_new;
    for (std::size_t k = 0; k < n; ++k) p[k] = r[k] + beta * p[k];
  }
}

}  // namespace

double poincare_constant(const Grid& grid, const PoincareOptions& opts) {
  const std::size_t n = grid.nodes();
  // Positive start vector with a nonzero component on the first eigenmode.
  std::vector<double> v(n), w(n, 0.0), av(n);
  for (int j = 0; j < grid.ny(); ++j) {
    for (int i = 0; i < grid.nx(); ++i) {
      v[static_cast<std::size_t>(j) * grid.nx() + i] =
          std::sin(M_PI * grid.x(i) / grid.lx()) * std::sin(M_PI * grid.y(j) / grid.ly()) + 0.1;
    }
  }
  double lambda = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iters; ++it) {
    const double nv = std::sqrt(dotv(v, v));
    for (double& x : v) x /= nv;
    std::fill(w.begin(), w.end(), 0.0);
    cg_solve(grid, v, w);
    v.swap(w);
    neg_laplacian(grid, v, av);
    const double rq = dotv(v, av) / dotv(v, v);
    if (std::abs(rq - lambda) <= opts.tol * rq) {
      return 1.0 / std::sqrt(rq);
    }
    lambda = rq;
  }
  throw std::runtime_error("poincare_constant: inverse power iteration did not converge");
}

void write_dump(const Field& u, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open dump for writing: " + path);
  const Grid& g = u.grid();
  out << std::setprecision(17);
  out << g.nx() << ' ' << g.ny() << ' ' << u.components() << ' ' << g.hx() << ' ' << g.hy()
      << '\n';
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) {
      const auto v = u.node(i, j);
      for (int c = 0; c < u.components(); ++c) {
        if (c) out << ' ';
        out << v[c];
      }
      out << '\n';
    }
  }
  if (!out) throw std::runtime_error("failed writing dump: " + path);
}

namespace {

Field read_dump_impl(const std::string& path, const double* lx, const double* ly) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dump: " + path);
  int nx = 0, ny = 0, m = 0;
  double hx = 0.0, hy = 0.0;
  if (!(in >> nx >> ny >> m >> hx >> hy)) {
    throw std::runtime_error("malformed dump header: " + path);
  }
  const Grid grid(lx ? *lx : hx * (nx + 1), ly ? *ly : hy * (ny + 1), nx, ny);
  if (std::abs(grid.hx() - hx) > 1e-12 * hx || std::abs(grid.hy() - hy) > 1e-12 * hy) {
    throw std::runtime_error("dump spacing does not match the domain: " + path);
  }
  std::vector<double> values(grid.nodes() * m);
  for (double& v : values) {
    if (!(in >> v)) throw std::runtime_error("dump truncated: " + path);
  }
  return Field(grid, m, std::move(values));
}

}  // namespace

Field read_dump(const std::string& path, double lx, double ly) {
  return read_dump_impl(path, &lx, &ly);
}

Field read_dump(const std::string& path) { return read_dump_impl(path, nullptr, nullptr); }

}  // namespace rateind
