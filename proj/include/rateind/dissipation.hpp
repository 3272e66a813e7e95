#pragma once

#include <span>
#include <string>
#include <vector>

namespace rateind {

enum class DissipationKind { euclidean, weighted_l1 };

std::string to_string(DissipationKind kind);
DissipationKind dissipation_kind_from_string(const std::string& s);

/// Positively 1-homogeneous dissipation density.
///   euclidean:   R1(w) = c |w|
///   weighted_l1: R1(w) = sum_a c_a |w_a|
class DissipationSpec {
 public:
  static DissipationSpec euclidean(double c);
  static DissipationSpec weighted_l1(std::vector<double> c);

  DissipationKind kind() const { return kind_; }
  const std::vector<double>& yield() const { return c_; }
  double c() const { return c_.front(); }

  // sup{|s| : s in dR1(0)}: the bound on any admissible driving force.
  double yield_radius() const;
  // Scale used for the default residual tolerance.
  double yield_scale() const;

  // Component count this dissipation requires; 0 means any.
  int required_components() const;

 private:
  DissipationSpec() = default;
  DissipationKind kind_ = DissipationKind::euclidean;
  std::vector<double> c_;
};

double r1_eval(const DissipationSpec& spec, std::span<const double> w);

// argmin_p tau R1(p) + |p - z|^2 / 2.
void prox_r1(const DissipationSpec& spec, std::span<const double> z, double tau,
             std::span<double> out);

// dist(g, dR1(delta)); zero iff g is in the subdifferential at delta.
double subdiff_residual(const DissipationSpec& spec, std::span<const double> g,
                        std::span<const double> delta);

}  // namespace rateind
