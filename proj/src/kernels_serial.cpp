#include <algorithm>
#include <cmath>
#include <vector>

#include "cell_flux.hpp"
#include "rateind/kernels.hpp"

namespace rateind::kernels::serial {

using detail::CellFlux;
using detail::kMaxComponents;

void apply_operator(const CellOperator& op, std::span<const double> u, std::span<double> out) {
  std::fill(out.begin(), out.end(), 0.0);
  const double scale = -1.0;
  auto add = [&](int I, int J, int c, double v) {
    if (I < 1 || I > op.nx || J < 1 || J > op.ny) return;
    out[(static_cast<std::size_t>(J - 1) * op.nx + (I - 1)) * op.m + c] += scale * v;
  };
  for (int cj = 0; cj <= op.ny; ++cj) {
    for (int ci = 0; ci <= op.nx; ++ci) {
      const CellFlux f = detail::cell_flux(op, u, ci, cj);
      for (int c = 0; c < op.m; ++c) {
        add(ci + 1, cj, c, f.pb[c] / op.hx);
        add(ci, cj, c, -f.pb[c] / op.hx);
        add(ci + 1, cj + 1, c, f.pt[c] / op.hx);
        add(ci, cj + 1, c, -f.pt[c] / op.hx);
        add(ci, cj + 1, c, f.ql[c] / op.hy);
        add(ci, cj, c, -f.ql[c] / op.hy);
        add(ci + 1, cj + 1, c, f.qr[c] / op.hy);
        add(ci + 1, cj, c, -f.qr[c] / op.hy);
      }
    }
  }
}

double bilinear(const CellOperator& op, std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (int cj = 0; cj <= op.ny; ++cj) {
    for (int ci = 0; ci <= op.nx; ++ci) {
      s += detail::cell_pairing(op, detail::cell_flux(op, u, ci, cj),
                                detail::cell_diffs(op, v, ci, cj));
    }
  }
  return s * op.hx * op.hy;
}

void gradient(int nx, int ny, int m, double hx, double hy, std::span<const double> u,
              std::span<double> out) {
  auto at = [&](int i, int j, int c) {
    if (i < 0 || i >= nx || j < 0 || j >= ny) return 0.0;
    return u[(static_cast<std::size_t>(j) * nx + i) * m + c];
  };
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      for (int c = 0; c < m; ++c) {
        const std::size_t o = (static_cast<std::size_t>(j) * nx + i) * 2 * m + 2 * c;
        out[o] = (at(i + 1, j, c) - at(i - 1, j, c)) * (0.5 / hx);
        out[o + 1] = (at(i, j + 1, c) - at(i, j - 1, c)) * (0.5 / hy);
      }
    }
  }
}

void prox_sweep(const ProxSweep& in, std::span<double> z) {
  const std::size_t nodes = in.y.size() / in.m;
  std::vector<double> dw(in.m), w(in.m), p(in.m);
  for (std::size_t n = 0; n < nodes; ++n) {
    const std::size_t o = n * in.m;
    dw0_eval(*in.energy, in.y.subspan(o, in.m), dw);
    for (int c = 0; c < in.m; ++c) {
      const double grad = -in.ly[o + c] + dw[c] - in.load[o + c];
      w[c] = in.y[o + c] - in.tau * grad - in.anchor[o + c];
    }
    prox_r1(*in.dissipation, w, in.tau, p);
    for (int c = 0; c < in.m; ++c) z[o + c] = in.anchor[o + c] + p[c];
  }
}

double functional_delta(const FunctionalDelta& in, int /*rows*/) {
  const std::size_t nodes = in.x.size() / in.m;
  std::vector<double> dw(in.m), e(in.m), rz(in.m), rx(in.m);
  double s = 0.0;
  for (std::size_t n = 0; n < nodes; ++n) {
    const std::size_t o = n * in.m;
    const auto x = in.x.subspan(o, in.m);
    dw0_eval(*in.energy, x, dw);
    double local = 0.0;
    for (int c = 0; c < in.m; ++c) {
      e[c] = in.z[o + c] - in.x[o + c];
      rz[c] = in.z[o + c] - in.anchor[o + c];
      rx[c] = in.x[o + c] - in.anchor[o + c];
      local += (dw[c] - in.load[o + c] - in.lx[o + c]) * e[c] -
               0.5 * (in.lz[o + c] - in.lx[o + c]) * e[c];
    }
    local += r1_eval(*in.dissipation, rz) - r1_eval(*in.dissipation, rx);
    local += w0_remainder(*in.energy, x, e);
    s += local;
  }
  return s;
}

double residual(const ResidualInput& in, std::span<double> force) {
  const std::size_t nodes = in.x.size() / in.m;
  std::vector<double> dw(in.m), delta(in.m);
  double worst = 0.0;
  for (std::size_t n = 0; n < nodes; ++n) {
    const std::size_t o = n * in.m;
    dw0_eval(*in.energy, in.x.subspan(o, in.m), dw);
    for (int c = 0; c < in.m; ++c) {
      force[o + c] = in.lx[o + c] - dw[c] + in.load[o + c];
      delta[c] = in.x[o + c] - in.anchor[o + c];
    }
    worst = std::max(worst, subdiff_residual(*in.dissipation, force.subspan(o, in.m), delta));
  }
  return worst;
}

double curvature(const CurvatureInput& in, int /*rows*/, double& d2) {
  const std::size_t nodes = in.y.size() / in.m;
  std::vector<double> d(in.m);
  double s = 0.0;
  d2 = 0.0;
  for (std::size_t n = 0; n < nodes; ++n) {
    const std::size_t o = n * in.m;
    for (int c = 0; c < in.m; ++c) {
      d[c] = in.z[o + c] - in.y[o + c];
      s -= 0.5 * (in.lz[o + c] - in.ly[o + c]) * d[c];
      d2 += d[c] * d[c];
    }
    s += w0_remainder(*in.energy, in.y.subspan(o, in.m), d);
  }
  return s;
}

double dot(std::span<const double> a, std::span<const double> b, int /*rows*/) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.size(); ++n) s += a[n] * b[n];
  return s;
}

double oscillation_sup(const OscillationInput& in) {
  const auto ball = detail::ball_offsets(in.hx, in.hy, in.radius);
  double worst = 0.0;
  for (const int a : in.anchors) worst = std::max(worst, detail::cylinder_oscillation(in, ball, a));
  return worst;
}

}  // namespace rateind::kernels::serial
