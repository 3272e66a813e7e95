#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rateind/grid.hpp"

namespace rateind {

enum class EnergyKind { double_well, quadratic, custom_polynomial };

std::string to_string(EnergyKind kind);
EnergyKind energy_kind_from_string(const std::string& s);

/// Bulk energy density W0 and its structural constants.
///
/// double_well:       W0(v) = gamma (|v|^2 - 1)^2,  q = 4, mu = 4 gamma
/// quadratic:         W0(v) = gamma |v|^2,          q = 2, mu = 0
/// custom_polynomial: W0(v) = sum_k a_k |v|^(2k), constants supplied by the
///                    caller and checked by sampling on construction.
///
/// The growth constant C satisfies
///   |v|^q / C - C <= W0(v) <= C (|v|^q + 1),   |DW0(v)| <= C (1 + |v|^(q-1)).
class EnergySpec {
 public:
  static EnergySpec double_well(double gamma);
  static EnergySpec quadratic(double gamma);
  static EnergySpec custom_polynomial(std::vector<double> coeffs, double q, double growth_c,
                                      double mu);

  EnergyKind kind() const { return kind_; }
  double gamma() const { return gamma_; }
  double q() const { return q_; }
  double mu() const { return mu_; }
  double growth_constant() const { return growth_c_; }
  const std::vector<double>& coeffs() const { return coeffs_; }

 private:
  EnergySpec() = default;
  EnergyKind kind_ = EnergyKind::quadratic;
  double gamma_ = 0.0;
  double q_ = 2.0;
  double mu_ = 0.0;
  double growth_c_ = 0.0;
  std::vector<double> coeffs_;
};

double w0_eval(const EnergySpec& spec, std::span<const double> v);
void dw0_eval(const EnergySpec& spec, std::span<const double> v, std::span<double> out);

// W0(v + d) - W0(v) - DW0(v).d, evaluated without cancellation for the
// built-in families.
double w0_remainder(const EnergySpec& spec, std::span<const double> v,
                    std::span<const double> d);

double monotonicity_deficit(const EnergySpec& spec);

struct ConvexityCheck {
  bool ok = false;
  double mu = 0.0;
  double poincare = 0.0;
  double product = 0.0;  // mu * C_P^2
  double margin = 0.0;   // threshold - product
  double threshold = 1.0;
};

// mu C_P(grid)^2 < threshold. With the default threshold 1 this is the
// mild-convexity condition for a unit-elliptic regularizer; passing the
// ellipticity constant kappa gives the condition under which the discrete
// incremental functional is convex for that operator.
ConvexityCheck validate_convexity(const EnergySpec& spec, const Grid& grid,
                                  double threshold = 1.0);
ConvexityCheck validate_convexity(const EnergySpec& spec, double poincare,
                                  double threshold = 1.0);

struct GrowthReport {
  bool ok = true;
  double lower_slack = 0.0;      // min of W0 - (|v|^q/C - C)
  double upper_slack = 0.0;      // min of C(|v|^q+1) - W0
  double derivative_slack = 0.0; // min of C(1+|v|^(q-1)) - |DW0|
  double monotone_slack = 0.0;   // min of (DW0(v)-DW0(z)).(v-z) + mu |v-z|^2
  double min_value = 0.0;        // min of W0 (must be >= 0)
};

// Samples the growth, nonnegativity and monotonicity conditions on random
// points with |v| <= radius.
GrowthReport sample_growth(const EnergySpec& spec, int m, int samples, double radius,
                           std::uint64_t seed);

}  // namespace rateind
