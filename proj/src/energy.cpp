#include "rateind/energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace rateind {

std::string to_string(EnergyKind kind) {
  switch (kind) {
    case EnergyKind::double_well: return "double_well";
    case EnergyKind::quadratic: return "quadratic";
    case EnergyKind::custom_polynomial: return "custom_polynomial";
  }
  return "unknown";
}

EnergyKind energy_kind_from_string(const std::string& s) {
  if (s == "double_well") return EnergyKind::double_well;
  if (s == "quadratic") return EnergyKind::quadratic;
  if (s == "custom_polynomial" || s == "custom-polynomial") return EnergyKind::custom_polynomial;
  throw std::invalid_argument("unknown energy kind '" + s + "'");
}

namespace {

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

double dotp(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t c = 0; c < a.size(); ++c) s += a[c] * b[c];
  return s;
}

// sum_k a_k r2^k and its derivative in r2.
double poly(const std::vector<double>& a, double r2) {
  double s = 0.0;
  for (std::size_t k = a.size(); k-- > 0;) s = s * r2 + a[k];
  return s;
}

double poly_deriv(const std::vector<double>& a, double r2) {
  double s = 0.0;
  for (std::size_t k = a.size(); k-- > 1;) s = s * r2 + k * a[k];
  return s;
}

}  // namespace

EnergySpec EnergySpec::double_well(double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("double-well depth gamma must be positive");
  }
  EnergySpec e;
  e.kind_ = EnergyKind::double_well;
  e.gamma_ = gamma;
  e.q_ = 4.0;
  e.mu_ = 4.0 * gamma;
  // Upper bounds need C >= gamma and C >= 8 gamma; the lower bound
  // |v|^4 / C - C <= gamma (|v|^2 - 1)^2 holds once C >= 2 / gamma.
  e.growth_c_ = std::max(8.0 * gamma, 2.0 / gamma);
  return e;
}

EnergySpec EnergySpec::quadratic(double gamma) {
  if (!(gamma >= 0.0) || !std::isfinite(gamma)) {
    throw std::invalid_argument("quadratic coefficient gamma must be nonnegative");
  }
  EnergySpec e;
  e.kind_ = EnergyKind::quadratic;
  e.gamma_ = gamma;
  e.q_ = 2.0;
  e.mu_ = 0.0;
  e.growth_c_ = gamma > 0.0 ? std::max(2.0 * gamma, 1.0 / gamma)
                            : std::numeric_limits<double>::infinity();
  return e;
}

EnergySpec EnergySpec::custom_polynomial(std::vector<double> coeffs, double q, double growth_c,
                                         double mu) {
  if (coeffs.empty()) throw std::invalid_argument("custom polynomial needs coefficients");
  if (!(q > 1.0) || !(growth_c > 0.0) || !(mu >= 0.0)) {
    throw std::invalid_argument("custom polynomial needs q > 1, C > 0, mu >= 0");
  }
  EnergySpec e;
  e.kind_ = EnergyKind::custom_polynomial;
  e.coeffs_ = std::move(coeffs);
  e.q_ = q;
  e.growth_c_ = growth_c;
  e.mu_ = mu;
  // Radial energies: m = 1 sees only the radial curvature, m = 2 also the
  // tangential one.
  for (int m : {1, 2}) {
    const GrowthReport r = sample_growth(e, m, 4000, 4.0, 17 + m);
    if (!r.ok) {
      throw std::invalid_argument(
          "custom polynomial violates the growth/monotonicity bounds for the given q, C, mu");
    }
  }
  return e;
}

double w0_eval(const EnergySpec& spec, std::span<const double> v) {
  const double r2 = norm2(v);
  switch (spec.kind()) {
    case EnergyKind::double_well: {
      const double a = r2 - 1.0;
      return spec.gamma() * a * a;
    }
    case EnergyKind::quadratic: return spec.gamma() * r2;
    case EnergyKind::custom_polynomial: return poly(spec.coeffs(), r2);
  }
  return 0.0;
}

void dw0_eval(const EnergySpec& spec, std::span<const double> v, std::span<double> out) {
  const double r2 = norm2(v);
  double factor = 0.0;
  switch (spec.kind()) {
    case EnergyKind::double_well: factor = 4.0 * spec.gamma() * (r2 - 1.0); break;
    case EnergyKind::quadratic: factor = 2.0 * spec.gamma(); break;
    case EnergyKind::custom_polynomial: factor = 2.0 * poly_deriv(spec.coeffs(), r2); break;
  }
  for (std::size_t c = 0; c < v.size(); ++c) out[c] = factor * v[c];
}

double w0_remainder(const EnergySpec& spec, std::span<const double> v,
                    std::span<const double> d) {
  switch (spec.kind()) {
    case EnergyKind::double_well: {
      // With a = |v|^2 - 1 and b = 2 v.d + |d|^2:
      // W(v+d) - W(v) - DW(v).d = gamma (2 a |d|^2 + b^2).
      const double a = norm2(v) - 1.0;
      const double dd = norm2(d);
      const double b = 2.0 * dotp(v, d) + dd;
      return spec.gamma() * (2.0 * a * dd + b * b);
    }
    case EnergyKind::quadratic: return spec.gamma() * norm2(d);
    case EnergyKind::custom_polynomial: {
      double vd[16];
      double dw[16];
      const std::size_t m = v.size();
      if (m > 16) throw std::invalid_argument("w0_remainder supports at most 16 components");
      for (std::size_t c = 0; c < m; ++c) vd[c] = v[c] + d[c];
      dw0_eval(spec, v, std::span<double>(dw, m));
      return w0_eval(spec, std::span<const double>(vd, m)) - w0_eval(spec, v) -
             dotp(std::span<const double>(dw, m), d);
    }
  }
  return 0.0;
}

double monotonicity_deficit(const EnergySpec& spec) { return spec.mu(); }

ConvexityCheck validate_convexity(const EnergySpec& spec, double poincare, double threshold) {
  ConvexityCheck c;
  c.mu = monotonicity_deficit(spec);
  c.poincare = poincare;
  c.product = c.mu * poincare * poincare;
  c.threshold = threshold;
  c.margin = threshold - c.product;
  c.ok = c.product < threshold;
  return c;
}

ConvexityCheck validate_convexity(const EnergySpec& spec, const Grid& grid, double threshold) {
  return validate_convexity(spec, poincare_constant(grid), threshold);
}

GrowthReport sample_growth(const EnergySpec& spec, int m, int samples, double radius,
                           std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::uniform_real_distribution<double> rad(0.0, radius);
  auto draw = [&](std::vector<double>& v) {
    // Uniform direction, uniform radius: covers the wells and the far field.
    double n = 0.0;
    do {
      n = 0.0;
      for (double& x : v) {
        x = unit(rng);
        n += x * x;
      }
    } while (n < 1e-12);
    const double r = rad(rng) / std::sqrt(n);
    for (double& x : v) x *= r;
  };

  const double C = spec.growth_constant();
  const double q = spec.q();
  const double mu = spec.mu();
  GrowthReport rep;
  rep.lower_slack = rep.upper_slack = rep.derivative_slack = rep.monotone_slack =
      rep.min_value = std::numeric_limits<double>::infinity();
  std::vector<double> v(m), z(m), dv(m), dz(m);
  for (int s = 0; s < samples; ++s) {
    draw(v);
    draw(z);
    const double w = w0_eval(spec, v);
    const double r = std::sqrt(norm2(v));
    dw0_eval(spec, v, dv);
    dw0_eval(spec, z, dz);
    rep.min_value = std::min(rep.min_value, w);
    rep.lower_slack = std::min(rep.lower_slack, w - (std::pow(r, q) / C - C));
    rep.upper_slack = std::min(rep.upper_slack, C * (std::pow(r, q) + 1.0) - w);
    rep.derivative_slack =
        std::min(rep.derivative_slack, C * (1.0 + std::pow(r, q - 1.0)) - std::sqrt(norm2(dv)));
    double mono = 0.0, dist2 = 0.0;
    for (int c = 0; c < m; ++c) {
      mono += (dv[c] - dz[c]) * (v[c] - z[c]);
      dist2 += (v[c] - z[c]) * (v[c] - z[c]);
    }
    const double scale = 1.0 + std::abs(mono) + mu * dist2;
    rep.monotone_slack = std::min(rep.monotone_slack, (mono + mu * dist2) / scale);
  }
  const double tiny = -1e-12;
  rep.ok = rep.min_value >= tiny && rep.lower_slack >= tiny && rep.upper_slack >= tiny &&
           rep.derivative_slack >= tiny && rep.monotone_slack >= tiny;
  return rep;
}

}  // namespace rateind
