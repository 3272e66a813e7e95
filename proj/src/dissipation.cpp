#include "rateind/dissipation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rateind {

std::string to_string(DissipationKind kind) {
  return kind == DissipationKind::euclidean ? "euclidean" : "weighted_l1";
}

DissipationKind dissipation_kind_from_string(const std::string& s) {
  if (s == "euclidean") return DissipationKind::euclidean;
  if (s == "weighted_l1") return DissipationKind::weighted_l1;
  throw std::invalid_argument("unknown dissipation kind '" + s + "'");
}

DissipationSpec DissipationSpec::euclidean(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw std::invalid_argument("yield coefficient c must be positive and finite");
  }
  DissipationSpec d;
  d.kind_ = DissipationKind::euclidean;
  d.c_ = {c};
  return d;
}

DissipationSpec DissipationSpec::weighted_l1(std::vector<double> c) {
  if (c.empty()) throw std::invalid_argument("weighted_l1 needs one coefficient per component");
  for (double ci : c) {
    if (!(ci > 0.0) || !std::isfinite(ci)) {
      throw std::invalid_argument("yield coefficients must be positive and finite");
    }
  }
  DissipationSpec d;
  d.kind_ = DissipationKind::weighted_l1;
  d.c_ = std::move(c);
  return d;
}

double DissipationSpec::yield_radius() const {
  if (kind_ == DissipationKind::euclidean) return c_.front();
  double s = 0.0;
  for (double ci : c_) s += ci * ci;
  return std::sqrt(s);
}

double DissipationSpec::yield_scale() const {
  if (kind_ == DissipationKind::euclidean) return c_.front();
  return *std::min_element(c_.begin(), c_.end());
}

int DissipationSpec::required_components() const {
  return kind_ == DissipationKind::euclidean ? 0 : static_cast<int>(c_.size());
}

double r1_eval(const DissipationSpec& spec, std::span<const double> w) {
  if (spec.kind() == DissipationKind::euclidean) {
    double s = 0.0;
    for (double x : w) s += x * x;
    return spec.c() * std::sqrt(s);
  }
  double s = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a) s += spec.yield()[a] * std::abs(w[a]);
  return s;
}

void prox_r1(const DissipationSpec& spec, std::span<const double> z, double tau,
             std::span<double> out) {
  if (spec.kind() == DissipationKind::euclidean) {
    double s = 0.0;
    for (double x : z) s += x * x;
    const double nz = std::sqrt(s);
    const double thr = tau * spec.c();
    if (nz <= thr) {
      std::fill(out.begin(), out.begin() + z.size(), 0.0);
      return;
    }
    const double shrink = 1.0 - thr / nz;
    for (std::size_t a = 0; a < z.size(); ++a) out[a] = z[a] * shrink;
    return;
  }
  for (std::size_t a = 0; a < z.size(); ++a) {
    const double thr = tau * spec.yield()[a];
    const double mag = std::abs(z[a]) - thr;
    out[a] = mag > 0.0 ? std::copysign(mag, z[a]) : 0.0;
  }
}

double subdiff_residual(const DissipationSpec& spec, std::span<const double> g,
                        std::span<const double> delta) {
  if (spec.kind() == DissipationKind::euclidean) {
    const double c = spec.c();
    double nd2 = 0.0, ng2 = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      nd2 += delta[a] * delta[a];
      ng2 += g[a] * g[a];
    }
    if (nd2 == 0.0) return std::max(0.0, std::sqrt(ng2) - c);
    const double nd = std::sqrt(nd2);
    double s = 0.0;
    for (std::size_t a = 0; a < g.size(); ++a) {
      const double r = g[a] - c * delta[a] / nd;
      s += r * r;
    }
    return std::sqrt(s);
  }
  // Product of intervals: Euclidean combination of componentwise distances.
  double s = 0.0;
  for (std::size_t a = 0; a < g.size(); ++a) {
    const double c = spec.yield()[a];
    const double r = delta[a] == 0.0 ? std::max(0.0, std::abs(g[a]) - c)
                                     : std::abs(g[a] - std::copysign(c, delta[a]));
    s += r * r;
  }
  return std::sqrt(s);
}

}  // namespace rateind
