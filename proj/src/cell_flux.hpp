#pragma once

// Per-cell flux of the conservative stencil shared by the serial and OpenMP
// kernels. In each cell the four edge differences are paired into the four
// corner gradients (ex_a, ey_b); the quadrature is their average. For the
// identity coefficient this is exactly the 5-point Laplacian.

#include <array>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "rateind/kernels.hpp"

namespace rateind::kernels::detail {

inline constexpr int kMaxComponents = 8;

struct CellFlux {
  // Coefficients of ex_bottom, ex_top, ey_left, ey_right of the test
  // function, per component, without the factor hx*hy.
  std::array<double, kMaxComponents> pb{};
  std::array<double, kMaxComponents> pt{};
  std::array<double, kMaxComponents> ql{};
  std::array<double, kMaxComponents> qr{};
};

struct CellDiffs {
  std::array<double, kMaxComponents> exb{};
  std::array<double, kMaxComponents> ext{};
  std::array<double, kMaxComponents> eyl{};
  std::array<double, kMaxComponents> eyr{};
};

// Value at lattice node (I,J), 0 <= I <= nx+1, with zero ghosts.
inline double lattice_value(const CellOperator& op, std::span<const double> u, int I, int J,
                            int c) {
  if (I < 1 || I > op.nx || J < 1 || J > op.ny) return 0.0;
  return u[(static_cast<std::size_t>(J - 1) * op.nx + (I - 1)) * op.m + c];
}

inline CellDiffs cell_diffs(const CellOperator& op, std::span<const double> u, int ci, int cj) {
  CellDiffs d;
  for (int c = 0; c < op.m; ++c) {
    const double bl = lattice_value(op, u, ci, cj, c);
    const double br = lattice_value(op, u, ci + 1, cj, c);
    const double tl = lattice_value(op, u, ci, cj + 1, c);
    const double tr = lattice_value(op, u, ci + 1, cj + 1, c);
    d.exb[c] = (br - bl) / op.hx;
    d.ext[c] = (tr - tl) / op.hx;
    d.eyl[c] = (tl - bl) / op.hy;
    d.eyr[c] = (tr - br) / op.hy;
  }
  return d;
}

inline std::span<const double> cell_matrix(const CellOperator& op, int ci, int cj) {
  const std::size_t n = static_cast<std::size_t>(2 * op.m) * (2 * op.m);
  if (op.uniform) return op.mats.subspan(0, n);
  return op.mats.subspan((static_cast<std::size_t>(cj) * (op.nx + 1) + ci) * n, n);
}

inline CellFlux cell_flux(const CellOperator& op, std::span<const double> u, int ci, int cj) {
  const CellDiffs d = cell_diffs(op, u, ci, cj);
  const auto mat = cell_matrix(op, ci, cj);
  const int n = 2 * op.m;
  CellFlux f;
  for (int b = 0; b < op.m; ++b) {
    double xb = 0.0, xt = 0.0, yl = 0.0, yr = 0.0;
    for (int a = 0; a < op.m; ++a) {
      const double mxx = mat[(2 * a) * n + 2 * b];
      const double mxy = mat[(2 * a) * n + 2 * b + 1];
      const double myx = mat[(2 * a + 1) * n + 2 * b];
      const double myy = mat[(2 * a + 1) * n + 2 * b + 1];
      const double cx = 0.5 * (d.exb[a] + d.ext[a]);
      const double cy = 0.5 * (d.eyl[a] + d.eyr[a]);
      xb += mxx * d.exb[a] + myx * cy;
      xt += mxx * d.ext[a] + myx * cy;
      yl += myy * d.eyl[a] + mxy * cx;
      yr += myy * d.eyr[a] + mxy * cx;
    }
    f.pb[b] = 0.5 * xb;
    f.pt[b] = 0.5 * xt;
    f.ql[b] = 0.5 * yl;
    f.qr[b] = 0.5 * yr;
  }
  return f;
}

inline double cell_pairing(const CellOperator& op, const CellFlux& f, const CellDiffs& d) {
  double s = 0.0;
  for (int c = 0; c < op.m; ++c) {
    s += f.pb[c] * d.exb[c] + f.pt[c] * d.ext[c] + f.ql[c] * d.eyl[c] + f.qr[c] * d.eyr[c];
  }
  return s;
}

// Lattice offsets (di, dj) with |(di hx, dj hy)| <= r.
inline std::vector<std::pair<int, int>> ball_offsets(double hx, double hy, double r) {
  std::vector<std::pair<int, int>> out;
  const int ri = static_cast<int>(std::floor(r / hx));
  const int rj = static_cast<int>(std::floor(r / hy));
  for (int dj = -rj; dj <= rj; ++dj) {
    for (int di = -ri; di <= ri; ++di) {
      const double x = di * hx, y = dj * hy;
      if (x * x + y * y <= r * r * (1.0 + 1e-12)) out.emplace_back(di, dj);
    }
  }
  return out;
}

// Mean of |v - <v>| over one cylinder restricted to the grid. Values are
// taken relative to the anchor's first sample, which leaves the oscillation
// unchanged and makes it vanish exactly on constants.
inline double cylinder_oscillation(const kernels::OscillationInput& in,
                                   const std::vector<std::pair<int, int>>& ball, int anchor) {
  const int ai = anchor % in.nx, aj = anchor / in.nx;
  const int w = in.width;
  const std::size_t layer = static_cast<std::size_t>(in.nx) * in.ny * w;
  auto at = [&](int l, int i, int j) -> const double* {
    if (i < 0 || i >= in.nx || j < 0 || j >= in.ny) return nullptr;
    return in.layers.data() + l * layer + (static_cast<std::size_t>(j) * in.nx + i) * w;
  };
  const double* ref = at(0, ai, aj);
  std::array<double, 2 * kMaxComponents> mean{};
  std::size_t count = 0;
  for (int l = 0; l < in.n_layers; ++l) {
    for (const auto& [di, dj] : ball) {
      if (const double* v = at(l, ai + di, aj + dj)) {
        ++count;
        for (int c = 0; c < w; ++c) mean[c] += v[c] - ref[c];
      }
    }
  }
  for (int c = 0; c < w; ++c) mean[c] /= static_cast<double>(count);
  double osc = 0.0;
  for (int l = 0; l < in.n_layers; ++l) {
    for (const auto& [di, dj] : ball) {
      if (const double* v = at(l, ai + di, aj + dj)) {
        double s = 0.0;
        for (int c = 0; c < w; ++c) {
          const double e = v[c] - ref[c] - mean[c];
          s += e * e;
        }
        osc += std::sqrt(s);
      }
    }
  }
  return osc / static_cast<double>(count);
}

}  // namespace rateind::kernels::detail
