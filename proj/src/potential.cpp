#include "rotorlab/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "rotorlab/errors.hpp"

namespace rotorlab {

namespace {

double wrap_to_pi(double theta) {
  const double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(theta, two_pi);
  if (w <= -std::numbers::pi) w += two_pi;
  return w;
}

}  // namespace

Potential Potential::zero() { return {Kind::Zero, 0.0}; }

Potential Potential::cosine_well(double V0) {
  if (!std::isfinite(V0)) throw ConfigError("cosine well depth must be finite");
  return {Kind::CosineWell, V0};
}

Potential Potential::harmonic(double V0) {
  if (!std::isfinite(V0)) throw ConfigError("harmonic stiffness must be finite");
  return {Kind::Harmonic, V0};
}

Potential Potential::tabulated(std::vector<double> theta, std::vector<double> values) {
  if (theta.size() < 2 || theta.size() != values.size())
    throw ConfigError("tabulated potential needs matching theta/value arrays of length >= 2");
  for (std::size_t i = 0; i < theta.size(); ++i) {
    if (!std::isfinite(theta[i]) || !std::isfinite(values[i]))
      throw ConfigError("tabulated potential contains non-finite entries");
    if (i > 0 && !(theta[i] > theta[i - 1])) throw ConfigError("tabulated theta grid must be strictly increasing");
  }
  Potential p{Kind::Tabulated, 0.0};
  p.theta_ = std::move(theta);
  p.values_ = std::move(values);
  return p;
}

double Potential::value(const ManifoldSpec& spec, double theta) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::CosineWell:
      if (spec.kind() == ManifoldKind::Pseudosphere) return V0_ * (std::cosh(theta) - 1.0);
      return V0_ * (1.0 - std::cos(theta));
    case Kind::Harmonic: {
      const double x = spec.kind() == ManifoldKind::Torus ? wrap_to_pi(theta) : theta;
      return V0_ * x * x;
    }
    case Kind::Tabulated: {
      if (theta < theta_.front() || theta > theta_.back())
        throw DomainError("theta = " + std::to_string(theta) + " outside the tabulated potential");
      auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
      std::size_t i = it == theta_.end() ? theta_.size() - 2 : static_cast<std::size_t>(it - theta_.begin()) - 1;
      const double t = (theta - theta_[i]) / (theta_[i + 1] - theta_[i]);
      return values_[i] + t * (values_[i + 1] - values_[i]);
    }
  }
  return 0.0;
}

double Potential::derivative(const ManifoldSpec& spec, double theta) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::CosineWell:
      if (spec.kind() == ManifoldKind::Pseudosphere) return V0_ * std::sinh(theta);
      return V0_ * std::sin(theta);
    case Kind::Harmonic: {
      const double x = spec.kind() == ManifoldKind::Torus ? wrap_to_pi(theta) : theta;
      return 2.0 * V0_ * x;
    }
    case Kind::Tabulated: {
      if (theta < theta_.front() || theta > theta_.back())
        throw DomainError("theta = " + std::to_string(theta) + " outside the tabulated potential");
      auto it = std::upper_bound(theta_.begin(), theta_.end(), theta);
      std::size_t i = it == theta_.end() ? theta_.size() - 2 : static_cast<std::size_t>(it - theta_.begin()) - 1;
      return (values_[i + 1] - values_[i]) / (theta_[i + 1] - theta_[i]);
    }
  }
  return 0.0;
}

std::string_view to_string(Potential::Kind kind) {
  switch (kind) {
    case Potential::Kind::Zero:
      return "zero";
    case Potential::Kind::CosineWell:
      return "cosine_well";
    case Potential::Kind::Harmonic:
      return "harmonic";
    case Potential::Kind::Tabulated:
      return "tabulated";
  }
  return "unknown";
}

}  // namespace rotorlab
