#pragma once

#include <string_view>
#include <vector>

#include "rotorlab/geometry.hpp"

namespace rotorlab {

/// Potential energy depending on theta only (phi and psi stay cyclic).
///
///   Zero        V = 0
///   CosineWell  V = V0 (1 - cos theta)      sphere, torus
///               V = V0 (cosh theta - 1)     pseudosphere
///   Harmonic    V = V0 theta^2              (theta wrapped to (-pi, pi] on the torus)
///   Tabulated   piecewise-linear through (theta_i, V_i)
class Potential {
 public:
  enum class Kind { Zero, CosineWell, Harmonic, Tabulated };

  static Potential zero();
  static Potential cosine_well(double V0);
  static Potential harmonic(double V0);
  /// Nodes must be strictly increasing with at least two entries.
  static Potential tabulated(std::vector<double> theta, std::vector<double> values);

  Kind kind() const { return kind_; }
  double V0() const { return V0_; }
  const std::vector<double>& table_theta() const { return theta_; }
  const std::vector<double>& table_values() const { return values_; }

  /// Throws DomainError when a tabulated potential is asked outside its table.
  double value(const ManifoldSpec& spec, double theta) const;
  double derivative(const ManifoldSpec& spec, double theta) const;

 private:
  Potential(Kind kind, double V0) : kind_(kind), V0_(V0) {}

  Kind kind_;
  double V0_ = 0.0;
  std::vector<double> theta_;
  std::vector<double> values_;
};

std::string_view to_string(Potential::Kind kind);

}  // namespace rotorlab
