#pragma once

// Euler-angle parameterization of SO(3), the analogous hyperbolic
// parameterization of SO(1,2), and the co-moving velocities U^{-1} dU/dt.
//
// On the sphere (phi, theta, psi) are precession, nutation and proper
// rotation; on the pseudosphere the middle angle is the rapidity chi = r/R.

#include "rotorlab/linalg.hpp"

namespace rotorlab {

struct EulerAngles {
  double phi = 0.0;
  double theta = 0.0;
  double psi = 0.0;
};

struct BodyRates {
  double dphi = 0.0;
  double dtheta = 0.0;
  double dpsi = 0.0;
};

enum class VelocityFlavor {
  /// so(3): omega-hat is antisymmetric.
  Rotational,
  /// so(1,2): eta * lambda-hat is antisymmetric, eta = diag(1, 1, -1).
  Lorentzian,
};

struct CoMovingVelocity {
  double w1 = 0.0;
  double w2 = 0.0;
  double w3 = 0.0;
  VelocityFlavor flavor = VelocityFlavor::Rotational;
};

/// Minkowski form diag(1, 1, -1) preserved by SO(1,2).
Mat3 minkowski_eta();

/// Rz(phi) Rx(theta) Rz(psi).
Mat3 euler_matrix(const EulerAngles& angles);
/// Rz(phi) B(chi) Rz(psi), with B the boost in the (y, z) plane; chi = angles.theta.
Mat3 lorentz_matrix(const EulerAngles& angles);

/// Time derivative of euler_matrix / lorentz_matrix along `rates`.
Mat3 euler_matrix_rate(const EulerAngles& angles, const BodyRates& rates);
Mat3 lorentz_matrix_rate(const EulerAngles& angles, const BodyRates& rates);

/// Closed-form co-moving (pseudo-)angular velocity.
CoMovingVelocity co_moving_velocity(const EulerAngles& angles, const BodyRates& rates, VelocityFlavor flavor);

/// Matrix form of `v`:
///   Rotational  [[0,-w3, w2],[ w3, 0,-w1],[-w2, w1, 0]]
///   Lorentzian  [[0,-w3, w2],[ w3, 0, w1],[ w2, w1, 0]]
Mat3 co_moving_matrix(const CoMovingVelocity& v);

/// Inverse of co_moving_matrix. Reads the independent entries only; use
/// algebra_defect() to measure how far `m` is from the algebra.
CoMovingVelocity co_moving_components(const Mat3& m, VelocityFlavor flavor);

/// Max-norm of the part of `m` outside so(3) or so(1,2).
double algebra_defect(const Mat3& m, VelocityFlavor flavor);

/// Group inverse: transpose for SO(3), eta U^T eta for SO(1,2).
Mat3 group_inverse(const Mat3& u, VelocityFlavor flavor);

/// U^{-1} dU/dt from a group element and its time derivative.
CoMovingVelocity co_moving_from_matrices(const Mat3& u, const Mat3& du, VelocityFlavor flavor);

/// (I1 w1^2 + I2 w2^2 + I3 w3^2) / 2.
double kinetic_energy_group(const CoMovingVelocity& v, double I1, double I2, double I3);

}  // namespace rotorlab
