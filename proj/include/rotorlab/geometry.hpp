#pragma once

// Base surfaces (sphere, pseudosphere, injected torus) described through a
// common surface-of-revolution profile, and the metric of the three-degree-
// of-freedom configuration space (theta, phi, psi) of a point rotor on them.
//
// Conventions used throughout the library:
//   * theta is the dimensionless meridian coordinate; arc length is r = R*theta.
//   * The base metric is  R^2 dtheta^2 + h(theta)^2 dphi^2.
//   * The co-moving rotation rate is  Omega = dpsi/dt + c(theta) dphi/dt.
//   * Kinetic energy is T = (M/2) G_ij qdot^i qdot^j, so G carries I/M.

#include <array>
#include <string_view>

#include "rotorlab/linalg.hpp"

namespace rotorlab {

enum class ManifoldKind { Sphere, Pseudosphere, Torus };

enum class Topology {
  /// Open interval, h vanishes at both ends (sphere).
  SingularBoth,
  /// Half-line, h vanishes at the left end only (pseudosphere).
  SingularLeft,
  /// Circle of length 2*pi (torus).
  Periodic,
};

struct ThetaDomain {
  double lo;
  double hi;  // +infinity for the pseudosphere
  Topology topology;
};

/// Distance from a singular endpoint below which theta counts as "at the pole".
inline constexpr double kEndpointTolerance = 1e-9;

std::string_view to_string(ManifoldKind kind);
ManifoldKind manifold_kind_from_string(std::string_view name);

class ManifoldSpec {
 public:
  static ManifoldSpec sphere(double R);
  static ManifoldSpec pseudosphere(double R);
  /// Torus with central radius L and tube radius R; requires L > R.
  static ManifoldSpec torus(double L, double R);

  ManifoldKind kind() const { return kind_; }
  double R() const { return R_; }
  /// Central radius; zero for the constant-curvature surfaces.
  double L() const { return L_; }
  ThetaDomain theta_domain() const;

 private:
  ManifoldSpec(ManifoldKind kind, double R, double L) : kind_(kind), R_(R), L_(L) {}

  ManifoldKind kind_;
  double R_;
  double L_;
};

struct RotorParams {
  double M = 1.0;
  double I = 1.0;
  double hbar = 1.0;
  /// Sign of the rotational kinetic term; -1 only on the pseudosphere.
  int sig = 1;

  /// Throws ConfigError when the parameters are not admissible on `spec`.
  void validate(const ManifoldSpec& spec) const;
  double inertia_ratio() const { return I / M; }
};

/// Surface-of-revolution data at one theta.
struct Profile {
  double h;   // azimuthal metric coefficient (length)
  double dh;  // dh/dtheta
  double c;   // frame-rotation coupling in Omega
  double dc;  // dc/dtheta
};

enum class ChartPoint { Interior, Pole, Outside };

/// Where `theta` lies relative to the chart of `spec`.
ChartPoint classify(const ManifoldSpec& spec, double theta);

/// Throws DomainError at or beyond a singular endpoint.
Profile profile(const ManifoldSpec& spec, double theta);

/// d^2 h / dtheta^2, same domain rules as profile().
double profile_h_second_derivative(const ManifoldSpec& spec, double theta);

struct MetricField {
  Mat3 G;
  Mat3 Ginv;
  double sqrt_abs_det;
  /// Closed form sig * (I/M) * R^2 * h^2.
  double det;
};

/// Configuration-space metric in (theta, phi, psi). Throws SingularMetric at a
/// pole and DomainError outside the chart.
MetricField metric_tensor(const ManifoldSpec& spec, const RotorParams& rotor, double theta);

/// Embedding into R^3 (Euclidean for sphere and torus, Minkowski for the
/// hyperboloid).
Vec3 embed(const ManifoldSpec& spec, double theta, double phi);

/// Defining polynomial of the surface evaluated at `point`; zero on-surface.
/// Throws HemisphereError for a point on the lower hyperboloid sheet.
double implicit_residual(const ManifoldSpec& spec, const Vec3& point);

enum class RadialCoordinate {
  /// Frame expressed against d/dr, r = R theta (sphere, pseudosphere).
  ArcLength,
  /// Frame expressed against d/dtheta (torus).
  Angle,
};

/// Orthonormal reference frame (E_radial, E_azimuthal) in components of the
/// coordinate basis vectors of `coordinate`.
struct FrameVectors {
  RadialCoordinate coordinate;
  std::array<double, 2> radial;
  std::array<double, 2> azimuthal;
  /// Diagonal base metric in the same coordinates.
  std::array<double, 2> base_metric;
};

FrameVectors frame_vectors(const ManifoldSpec& spec, double theta);

/// Scalar curvature 2K of the base surface (K the Gaussian curvature).
double scalar_curvature(const ManifoldSpec& spec, double theta);

}  // namespace rotorlab
