#include "rateind/loading.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rateind {

std::string to_string(TimeProfile p) {
  switch (p) {
    case TimeProfile::zero: return "zero";
    case TimeProfile::constant: return "constant";
    case TimeProfile::ramp: return "ramp";
    case TimeProfile::sine: return "sine";
  }
  return "unknown";
}

std::string to_string(SpatialShape s) {
  switch (s) {
    case SpatialShape::zero: return "zero";
    case SpatialShape::uniform: return "uniform";
    case SpatialShape::sine_bump: return "sine_bump";
    case SpatialShape::gaussian: return "gaussian";
  }
  return "unknown";
}

TimeProfile time_profile_from_string(const std::string& s) {
  if (s == "zero") return TimeProfile::zero;
  if (s == "constant") return TimeProfile::constant;
  if (s == "ramp") return TimeProfile::ramp;
  if (s == "sine") return TimeProfile::sine;
  throw std::invalid_argument("unknown time profile '" + s + "'");
}

SpatialShape spatial_shape_from_string(const std::string& s) {
  if (s == "zero") return SpatialShape::zero;
  if (s == "uniform") return SpatialShape::uniform;
  if (s == "sine_bump") return SpatialShape::sine_bump;
  if (s == "gaussian") return SpatialShape::gaussian;
  throw std::invalid_argument("unknown spatial shape '" + s + "'");
}

double AnalyticLoading::profile_value(double t) const {
  switch (profile) {
    case TimeProfile::zero: return 0.0;
    case TimeProfile::constant: return 1.0;
    case TimeProfile::ramp: return t;
    case TimeProfile::sine: return std::sin(omega * t);
  }
  return 0.0;
}

double AnalyticLoading::profile_rate(double t) const {
  switch (profile) {
    case TimeProfile::zero:
    case TimeProfile::constant: return 0.0;
    case TimeProfile::ramp: return 1.0;
    case TimeProfile::sine: return omega * std::cos(omega * t);
  }
  return 0.0;
}

double AnalyticLoading::shape_value(double x, double y, double lx, double ly) const {
  switch (shape) {
    case SpatialShape::zero: return 0.0;
    case SpatialShape::uniform: return 1.0;
    case SpatialShape::sine_bump: return std::sin(M_PI * x / lx) * std::sin(M_PI * y / ly);
    case SpatialShape::gaussian: {
      const double w = width * std::min(lx, ly);
      const double dx = x - 0.5 * lx, dy = y - 0.5 * ly;
      return std::exp(-(dx * dx + dy * dy) / (2.0 * w * w));
    }
  }
  return 0.0;
}

namespace {

void check_exponents(double a, double p) {
  if (!(a > 1.0) || !std::isfinite(a)) throw std::invalid_argument("loading needs a in (1,inf)");
  if (!(p >= 2.0) || !std::isfinite(p)) throw std::invalid_argument("loading needs p in [2,inf)");
}

std::vector<double> unit_direction(const std::vector<double>& dir, int m) {
  std::vector<double> e(m, 0.0);
  if (dir.empty()) {
    e[0] = 1.0;
    return e;
  }
  if (static_cast<int>(dir.size()) != m) {
    throw std::invalid_argument("loading direction must have m entries");
  }
  return dir;
}

// Interval index k with times[k] <= t < times[k+1], clamped.
std::size_t bracket(const std::vector<double>& times, double t) {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  std::size_t k = it == times.begin() ? 0 : static_cast<std::size_t>(it - times.begin()) - 1;
  return std::min(k, times.size() - 2);
}

}  // namespace

Loading::Loading() : spec_(AnalyticLoading{}) {}

Loading::Loading(AnalyticLoading spec, double a, double p) : spec_(std::move(spec)), a_(a), p_(p) {
  check_exponents(a, p);
  const auto& s = std::get<AnalyticLoading>(spec_);
  if (!std::isfinite(s.amplitude) || !std::isfinite(s.omega) || !(s.width > 0.0)) {
    throw std::invalid_argument("analytic loading parameters must be finite");
  }
}

Loading::Loading(SampledLoading spec, double a, double p) : spec_(std::move(spec)), a_(a), p_(p) {
  check_exponents(a, p);
  const auto& s = std::get<SampledLoading>(spec_);
  if (s.times.size() < 2 || s.times.size() != s.samples.size()) {
    throw std::invalid_argument("sampled loading needs >= 2 times and one field per time");
  }
  for (std::size_t k = 1; k < s.times.size(); ++k) {
    if (!(s.times[k] > s.times[k - 1])) {
      throw std::invalid_argument("sampled loading times must be strictly increasing");
    }
    if (!s.samples[k].same_shape(s.samples[0])) {
      throw std::invalid_argument("sampled loading fields must share grid and components");
    }
  }
}

void Loading::sample(double t, Field& out) const {
  if (const auto* s = analytic_spec()) {
    const Grid& g = out.grid();
    const int m = out.components();
    const auto e = unit_direction(s->direction, m);
    const double gt = s->amplitude * s->profile_value(t);
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const double v = gt * s->shape_value(g.x(i), g.y(j), g.lx(), g.ly());
        auto node = out.node(i, j);
        for (int c = 0; c < m; ++c) node[c] = v * e[c];
      }
    }
    return;
  }
  const auto& s = *sampled_spec();
  if (!out.same_shape(s.samples[0])) throw std::invalid_argument("sampled loading shape mismatch");
  const std::size_t k = bracket(s.times, t);
  const double th = std::clamp((t - s.times[k]) / (s.times[k + 1] - s.times[k]), 0.0, 1.0);
  const auto a = s.samples[k].values();
  const auto b = s.samples[k + 1].values();
  auto o = out.values();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] = (1.0 - th) * a[n] + th * b[n];
}

Field Loading::sample(const Grid& grid, int m, double t) const {
  Field f(grid, m);
  sample(t, f);
  return f;
}

void Loading::sample_rate(double t, Field& out) const {
  if (const auto* s = analytic_spec()) {
    const Grid& g = out.grid();
    const int m = out.components();
    const auto e = unit_direction(s->direction, m);
    const double gt = s->amplitude * s->profile_rate(t);
    for (int j = 0; j < g.ny(); ++j) {
      for (int i = 0; i < g.nx(); ++i) {
        const double v = gt * s->shape_value(g.x(i), g.y(j), g.lx(), g.ly());
        auto node = out.node(i, j);
        for (int c = 0; c < m; ++c) node[c] = v * e[c];
      }
    }
    return;
  }
  const auto& s = *sampled_spec();
  if (t < s.times.front() || t >= s.times.back()) {
    std::fill(out.values().begin(), out.values().end(), 0.0);
    return;
  }
  const std::size_t k = bracket(s.times, t);
  const double h = s.times[k + 1] - s.times[k];
  const auto a = s.samples[k].values();
  const auto b = s.samples[k + 1].values();
  auto o = out.values();
  for (std::size_t n = 0; n < o.size(); ++n) o[n] = (b[n] - a[n]) / h;
}

double Loading::mean_rate_l2(const Grid& grid, int m, double t0, double t1) const {
  if (!(t1 > t0)) throw std::invalid_argument("mean_rate_l2 needs t1 > t0");
  if (const auto* s = analytic_spec()) {
    // ||d_t f(t)||_2 = |amplitude g'(t)| ||phi e||_2: integrate |g'| with
    // composite 4-point Gauss-Legendre on 16 panels.
    Field shape(grid, m);
    AnalyticLoading unit = *s;
    unit.profile = TimeProfile::constant;
    unit.amplitude = 1.0;
    Loading(unit, a_, p_).sample(0.0, shape);
    const double shape_norm = lp_norm(shape, 2.0);
    if (s->profile == TimeProfile::zero || s->profile == TimeProfile::constant) return 0.0;
    if (s->profile == TimeProfile::ramp) return std::abs(s->amplitude) * shape_norm;
    static constexpr double xg[4] = {-0.8611363115940526, -0.3399810435848563,
                                     0.3399810435848563, 0.8611363115940526};
    static constexpr double wg[4] = {0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                     0.3478548451374538};
    const int panels = 16;
    const double hp = (t1 - t0) / panels;
    double integral = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double mid = t0 + (p + 0.5) * hp;
      for (int q = 0; q < 4; ++q) {
        integral += 0.5 * hp * wg[q] * std::abs(s->profile_rate(mid + 0.5 * hp * xg[q]));
      }
    }
    return std::abs(s->amplitude) * shape_norm * integral / (t1 - t0);
  }
  // Piecewise constant rate: exact integral over the overlapping intervals.
  const auto& s = *sampled_spec();
  Field rate(grid, m);
  double integral = 0.0;
  for (std::size_t k = 0; k + 1 < s.times.size(); ++k) {
    const double lo = std::max(t0, s.times[k]);
    const double hi = std::min(t1, s.times[k + 1]);
    if (hi <= lo) continue;
    sample_rate(0.5 * (s.times[k] + s.times[k + 1]), rate);
    integral += (hi - lo) * lp_norm(rate, 2.0);
  }
  return integral / (t1 - t0);
}

NodeMap::NodeMap(std::vector<double> from, std::vector<double> to)
    : from_(std::move(from)), to_(std::move(to)) {
  if (from_.size() < 2 || from_.size() != to_.size()) {
    throw std::invalid_argument("node map needs matching node lists of length >= 2");
  }
  for (std::size_t k = 1; k < from_.size(); ++k) {
    if (!(from_[k] > from_[k - 1]) || !(to_[k] > to_[k - 1])) {
      throw std::invalid_argument("node map must be strictly increasing");
    }
  }
}

double NodeMap::operator()(double s) const {
  const auto it = std::lower_bound(from_.begin(), from_.end(), s);
  if (it != from_.end() && *it == s) return to_[it - from_.begin()];
  const std::size_t k = bracket(from_, s);
  const double th = (s - from_[k]) / (from_[k + 1] - from_[k]);
  return to_[k] + th * (to_[k + 1] - to_[k]);
}

}  // namespace rateind
