#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "cell_flux.hpp"
#include "rateind/kernels.hpp"

namespace rateind::kernels {

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

void set_thread_count(int n) {
#ifdef _OPENMP
  if (n > 0) omp_set_num_threads(n);
#else
  (void)n;
#endif
}

namespace omp {

using detail::CellFlux;
using detail::kMaxComponents;

namespace {

// Row partials summed in row order: independent of the thread schedule.
double ordered_sum(const std::vector<double>& partials) {
  return std::accumulate(partials.begin(), partials.end(), 0.0);
}

std::vector<double>& flux_buffer(std::size_t n) {
  thread_local std::vector<double> buf;
  if (buf.size() < n) buf.resize(n);
  return buf;
}

}  // namespace

void apply_operator(const CellOperator& op, std::span<const double> u, std::span<double> out) {
  const int cx = op.nx + 1;
  const int cy = op.ny + 1;
  const int m = op.m;
  const std::size_t stride = 4 * static_cast<std::size_t>(m);
  std::vector<double>& flux = flux_buffer(static_cast<std::size_t>(cx) * cy * stride);

#pragma omp parallel for schedule(static)
  for (int cj = 0; cj < cy; ++cj) {
    for (int ci = 0; ci < cx; ++ci) {
      const CellFlux f = detail::cell_flux(op, u, ci, cj);
      double* dst = flux.data() + (static_cast<std::size_t>(cj) * cx + ci) * stride;
      for (int c = 0; c < m; ++c) {
        dst[c] = f.pb[c];
        dst[m + c] = f.pt[c];
        dst[2 * m + c] = f.ql[c];
        dst[3 * m + c] = f.qr[c];
      }
    }
  }

  const double ihx = 1.0 / op.hx;
  const double ihy = 1.0 / op.hy;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < op.ny; ++j) {
    const int J = j + 1;
    for (int i = 0; i < op.nx; ++i) {
      const int I = i + 1;
      // Node (I,J) is the top-right corner of cell (I-1,J-1), top-left of
      // (I,J-1), bottom-right of (I-1,J) and bottom-left of (I,J).
      const double* tr = flux.data() + (static_cast<std::size_t>(J - 1) * cx + (I - 1)) * stride;
      const double* tl = flux.data() + (static_cast<std::size_t>(J - 1) * cx + I) * stride;
      const double* br = flux.data() + (static_cast<std::size_t>(J) * cx + (I - 1)) * stride;
      const double* bl = flux.data() + (static_cast<std::size_t>(J) * cx + I) * stride;
      double* o = out.data() + (static_cast<std::size_t>(j) * op.nx + i) * m;
      for (int c = 0; c < m; ++c) {
        const double gx = (tr[m + c] - tl[m + c] + br[c] - bl[c]) * ihx;
        const double gy = (tr[3 * m + c] + tl[2 * m + c] - br[3 * m + c] - bl[2 * m + c]) * ihy;
        o[c] = -(gx + gy);
      }
    }
  }
}

double bilinear(const CellOperator& op, std::span<const double> u, std::span<const double> v) {
  const int cy = op.ny + 1;
  std::vector<double> partials(cy, 0.0);
#pragma omp parallel for schedule(static)
  for (int cj = 0; cj < cy; ++cj) {
    double s = 0.0;
    for (int ci = 0; ci <= op.nx; ++ci) {
      s += detail::cell_pairing(op, detail::cell_flux(op, u, ci, cj),
                                detail::cell_diffs(op, v, ci, cj));
    }
    partials[cj] = s;
  }
  return ordered_sum(partials) * op.hx * op.hy;
}

void gradient(int nx, int ny, int m, double hx, double hy, std::span<const double> u,
              std::span<double> out) {
  const double ihx = 0.5 / hx;
  const double ihy = 0.5 / hy;
#pragma omp parallel for schedule(static)
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const std::size_t n = static_cast<std::size_t>(j) * nx + i;
      for (int c = 0; c < m; ++c) {
        const double e = i + 1 < nx ? u[(n + 1) * m + c] : 0.0;
        const double w = i > 0 ? u[(n - 1) * m + c] : 0.0;
        const double nn = j + 1 < ny ? u[(n + nx) * m + c] : 0.0;
        const double s = j > 0 ? u[(n - nx) * m + c] : 0.0;
        out[n * 2 * m + 2 * c] = (e - w) * ihx;
        out[n * 2 * m + 2 * c + 1] = (nn - s) * ihy;
      }
    }
  }
}

void prox_sweep(const ProxSweep& in, std::span<double> z) {
  const int m = in.m;
  const std::ptrdiff_t nodes = static_cast<std::ptrdiff_t>(in.y.size() / m);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t n = 0; n < nodes; ++n) {
    std::array<double, kMaxComponents> dw{}, w{}, p{};
    const std::size_t o = static_cast<std::size_t>(n) * m;
    const std::span<double> dws(dw.data(), m), ws(w.data(), m), ps(p.data(), m);
    dw0_eval(*in.energy, in.y.subspan(o, m), dws);
    for (int c = 0; c < m; ++c) {
      const double grad = -in.ly[o + c] + dw[c] - in.load[o + c];
      w[c] = in.y[o + c] - in.tau * grad - in.anchor[o + c];
    }
    prox_r1(*in.dissipation, ws, in.tau, ps);
    for (int c = 0; c < m; ++c) z[o + c] = in.anchor[o + c] + p[c];
  }
}

double functional_delta(const FunctionalDelta& in, int rows) {
  const int m = in.m;
  const std::size_t row_len = in.x.size() / rows;
  std::vector<double> partials(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    std::array<double, kMaxComponents> dw{}, e{}, rz{}, rx{};
    const std::span<double> dws(dw.data(), m), es(e.data(), m), rzs(rz.data(), m),
        rxs(rx.data(), m);
    double s = 0.0;
    for (std::size_t o = r * row_len; o < (r + 1) * row_len; o += m) {
      const auto x = in.x.subspan(o, m);
      dw0_eval(*in.energy, x, dws);
      double local = 0.0;
      for (int c = 0; c < m; ++c) {
        e[c] = in.z[o + c] - in.x[o + c];
        rz[c] = in.z[o + c] - in.anchor[o + c];
        rx[c] = in.x[o + c] - in.anchor[o + c];
        local += (dw[c] - in.load[o + c] - in.lx[o + c]) * e[c] -
                 0.5 * (in.lz[o + c] - in.lx[o + c]) * e[c];
      }
      local += r1_eval(*in.dissipation, rzs) - r1_eval(*in.dissipation, rxs);
      local += w0_remainder(*in.energy, x, es);
      s += local;
    }
    partials[r] = s;
  }
  return ordered_sum(partials);
}

double residual(const ResidualInput& in, std::span<double> force) {
  const int m = in.m;
  const std::ptrdiff_t nodes = static_cast<std::ptrdiff_t>(in.x.size() / m);
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::ptrdiff_t n = 0; n < nodes; ++n) {
    std::array<double, kMaxComponents> dw{}, delta{};
    const std::size_t o = static_cast<std::size_t>(n) * m;
    dw0_eval(*in.energy, in.x.subspan(o, m), std::span<double>(dw.data(), m));
    for (int c = 0; c < m; ++c) {
      force[o + c] = in.lx[o + c] - dw[c] + in.load[o + c];
      delta[c] = in.x[o + c] - in.anchor[o + c];
    }
    worst = std::max(worst, subdiff_residual(*in.dissipation, force.subspan(o, m),
                                             std::span<const double>(delta.data(), m)));
  }
  return worst;
}

double curvature(const CurvatureInput& in, int rows, double& d2) {
  const int m = in.m;
  const std::size_t row_len = in.y.size() / rows;
  std::vector<double> partials(rows, 0.0), partials_d2(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    std::array<double, kMaxComponents> d{};
    const std::span<const double> ds(d.data(), m);
    double s = 0.0, q = 0.0;
    for (std::size_t o = r * row_len; o < (r + 1) * row_len; o += m) {
      for (int c = 0; c < m; ++c) {
        d[c] = in.z[o + c] - in.y[o + c];
        s -= 0.5 * (in.lz[o + c] - in.ly[o + c]) * d[c];
        q += d[c] * d[c];
      }
      s += w0_remainder(*in.energy, in.y.subspan(o, m), ds);
    }
    partials[r] = s;
    partials_d2[r] = q;
  }
  d2 = ordered_sum(partials_d2);
  return ordered_sum(partials);
}

double dot(std::span<const double> a, std::span<const double> b, int rows) {
  const std::size_t row_len = a.size() / rows;
  std::vector<double> partials(rows, 0.0);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (std::size_t n = r * row_len; n < (r + 1) * row_len; ++n) s += a[n] * b[n];
    partials[r] = s;
  }
  return ordered_sum(partials);
}

double oscillation_sup(const OscillationInput& in) {
  const auto ball = detail::ball_offsets(in.hx, in.hy, in.radius);
  const int n = static_cast<int>(in.anchors.size());
  double worst = 0.0;
#pragma omp parallel for schedule(dynamic, 16) reduction(max : worst)
  for (int a = 0; a < n; ++a) {
    worst = std::max(worst, detail::cylinder_oscillation(in, ball, in.anchors[a]));
  }
  return worst;
}

}  // namespace omp
}  // namespace rateind::kernels
