#pragma once

#include <string>
#include <variant>
#include <vector>

#include "rateind/grid.hpp"

namespace rateind {

enum class TimeProfile { zero, constant, ramp, sine };
enum class SpatialShape { zero, uniform, sine_bump, gaussian };

std::string to_string(TimeProfile p);
std::string to_string(SpatialShape s);
TimeProfile time_profile_from_string(const std::string& s);
SpatialShape spatial_shape_from_string(const std::string& s);

/// f(t,x) = amplitude * g(t) * phi(x) * direction.
///   g: zero 0 | constant 1 | ramp t | sine sin(omega t)
///   phi: zero 0 | uniform 1 | sine_bump sin(pi x/lx) sin(pi y/ly)
///        | gaussian exp(-|x - centre|^2 / (2 (width min(lx,ly))^2))
struct AnalyticLoading {
  TimeProfile profile = TimeProfile::zero;
  SpatialShape shape = SpatialShape::zero;
  double amplitude = 0.0;
  double omega = 1.0;
  double width = 0.15;
  std::vector<double> direction;  // empty: (1, 0, ..., 0)

  double profile_value(double t) const;
  double profile_rate(double t) const;
  double shape_value(double x, double y, double lx, double ly) const;
};

/// Fields given at increasing times, linear in between and constant
/// outside the sampled range.
struct SampledLoading {
  std::vector<double> times;
  std::vector<Field> samples;
};

class Loading {
 public:
  Loading();  // zero loading
  Loading(AnalyticLoading spec, double a, double p);
  Loading(SampledLoading spec, double a, double p);

  double a() const { return a_; }  // time-Sobolev exponent
  double p() const { return p_; }  // spatial integrability exponent
  bool analytic() const { return std::holds_alternative<AnalyticLoading>(spec_); }
  const AnalyticLoading* analytic_spec() const { return std::get_if<AnalyticLoading>(&spec_); }
  const SampledLoading* sampled_spec() const { return std::get_if<SampledLoading>(&spec_); }

  void sample(double t, Field& out) const;
  Field sample(const Grid& grid, int m, double t) const;
  void sample_rate(double t, Field& out) const;

  // (1/(t1-t0)) * integral over (t0,t1] of ||d_t f||_{L^2}.
  double mean_rate_l2(const Grid& grid, int m, double t0, double t1) const;

 private:
  std::variant<AnalyticLoading, SampledLoading> spec_;
  double a_ = 2.0;
  double p_ = 2.0;
};

/// Strictly increasing piecewise-linear map taking from[k] to to[k] exactly.
class NodeMap {
 public:
  NodeMap(std::vector<double> from, std::vector<double> to);
  double operator()(double s) const;
  const std::vector<double>& from() const { return from_; }
  const std::vector<double>& to() const { return to_; }

 private:
  std::vector<double> from_;
  std::vector<double> to_;
};

}  // namespace rateind
