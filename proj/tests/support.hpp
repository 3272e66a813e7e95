#pragma once

#include <cmath>
#include <random>

#include "rateind/rothe.hpp"

namespace rateind::testing {

inline Field random_field(const Grid& g, int m, std::mt19937_64& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Field f(g, m);
  for (auto& v : f.values()) v = u(rng);
  return f;
}

inline double max_abs(const Field& u) {
  double s = 0.0;
  for (const double v : u.values()) s = std::max(s, std::abs(v));
  return s;
}

inline double max_diff(const Field& a, const Field& b) {
  double s = 0.0;
  for (std::size_t n = 0; n < a.values().size(); ++n) {
    s = std::max(s, std::abs(a.values()[n] - b.values()[n]));
  }
  return s;
}

inline Loading ramp_bump(double amplitude, double p = 4.0) {
  AnalyticLoading al;
  al.profile = TimeProfile::ramp;
  al.shape = SpatialShape::sine_bump;
  al.amplitude = amplitude;
  return Loading(al, 2.0, p);
}

inline Loading constant_bump(double amplitude) {
  AnalyticLoading al;
  al.profile = TimeProfile::constant;
  al.shape = SpatialShape::sine_bump;
  al.amplitude = amplitude;
  return Loading(al, 2.0, 4.0);
}

// Double well gamma = 0.05, yield 1, Laplacian, zero start.
inline Problem reference_problem(int n, int steps, Loading loading, double gamma = 0.05) {
  const Grid g(1.0, 1.0, n, n);
  return Problem(g, EnergySpec::double_well(gamma), DissipationSpec::euclidean(1.0),
                 CoeffField::laplacian(1), std::move(loading), Field(g, 1),
                 TimePartition::uniform(1.0, steps));
}

}  // namespace rateind::testing
