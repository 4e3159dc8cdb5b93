#include "rotorlab/groups.hpp"

#include <algorithm>
#include <cmath>

namespace rotorlab {

namespace {

Mat3 rotation_z_rate(double angle, double rate) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Mat3{{{-s * rate, -c * rate, 0.0}, {c * rate, -s * rate, 0.0}, {0.0, 0.0, 0.0}}};
}

Mat3 rotation_x_rate(double angle, double rate) {
  const double c = std::cos(angle), s = std::sin(angle);
  return Mat3{{{0.0, 0.0, 0.0}, {0.0, -s * rate, -c * rate}, {0.0, c * rate, -s * rate}}};
}

Mat3 boost_yz_rate(double chi, double rate) {
  const double ch = std::cosh(chi), sh = std::sinh(chi);
  return Mat3{{{0.0, 0.0, 0.0}, {0.0, sh * rate, ch * rate}, {0.0, ch * rate, sh * rate}}};
}

Mat3 add(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) c[i][j] = a[i][j] + b[i][j];
  return c;
}

// d/dt (A B C) by the product rule.
Mat3 product_rate(const Mat3& a, const Mat3& da, const Mat3& b, const Mat3& db, const Mat3& c, const Mat3& dc) {
  return add(add(da * b * c, a * db * c), a * b * dc);
}

}  // namespace

Mat3 minkowski_eta() { return Mat3{{{1.0, 0.0, 0.0}, {0.0, 1.0, 0.0}, {0.0, 0.0, -1.0}}}; }

Mat3 euler_matrix(const EulerAngles& a) { return rotation_z(a.phi) * rotation_x(a.theta) * rotation_z(a.psi); }

Mat3 lorentz_matrix(const EulerAngles& a) { return rotation_z(a.phi) * boost_yz(a.theta) * rotation_z(a.psi); }

Mat3 euler_matrix_rate(const EulerAngles& a, const BodyRates& r) {
  return product_rate(rotation_z(a.phi), rotation_z_rate(a.phi, r.dphi), rotation_x(a.theta),
                      rotation_x_rate(a.theta, r.dtheta), rotation_z(a.psi), rotation_z_rate(a.psi, r.dpsi));
}

Mat3 lorentz_matrix_rate(const EulerAngles& a, const BodyRates& r) {
  return product_rate(rotation_z(a.phi), rotation_z_rate(a.phi, r.dphi), boost_yz(a.theta),
                      boost_yz_rate(a.theta, r.dtheta), rotation_z(a.psi), rotation_z_rate(a.psi, r.dpsi));
}

CoMovingVelocity co_moving_velocity(const EulerAngles& a, const BodyRates& r, VelocityFlavor flavor) {
  const double cp = std::cos(a.psi), sp = std::sin(a.psi);
  CoMovingVelocity v;
  v.flavor = flavor;
  if (flavor == VelocityFlavor::Rotational) {
    const double st = std::sin(a.theta), ct = std::cos(a.theta);
    v.w1 = cp * r.dtheta + st * sp * r.dphi;
    v.w2 = -sp * r.dtheta + st * cp * r.dphi;
    v.w3 = r.dpsi + ct * r.dphi;
  } else {
    const double sh = std::sinh(a.theta), ch = std::cosh(a.theta);
    v.w1 = cp * r.dtheta + sh * sp * r.dphi;
    v.w2 = sp * r.dtheta - sh * cp * r.dphi;
    v.w3 = r.dpsi + ch * r.dphi;
  }
  return v;
}

Mat3 co_moving_matrix(const CoMovingVelocity& v) {
  if (v.flavor == VelocityFlavor::Rotational)
    return Mat3{{{0.0, -v.w3, v.w2}, {v.w3, 0.0, -v.w1}, {-v.w2, v.w1, 0.0}}};
  return Mat3{{{0.0, -v.w3, v.w2}, {v.w3, 0.0, v.w1}, {v.w2, v.w1, 0.0}}};
}

CoMovingVelocity co_moving_components(const Mat3& m, VelocityFlavor flavor) {
  CoMovingVelocity v;
  v.flavor = flavor;
  v.w3 = 0.5 * (m[1][0] - m[0][1]);
  if (flavor == VelocityFlavor::Rotational) {
    v.w1 = 0.5 * (m[2][1] - m[1][2]);
    v.w2 = 0.5 * (m[0][2] - m[2][0]);
  } else {
    v.w1 = 0.5 * (m[1][2] + m[2][1]);
    v.w2 = 0.5 * (m[0][2] + m[2][0]);
  }
  return v;
}

double algebra_defect(const Mat3& m, VelocityFlavor flavor) {
  return max_abs_diff(m, co_moving_matrix(co_moving_components(m, flavor)));
}

Mat3 group_inverse(const Mat3& u, VelocityFlavor flavor) {
  if (flavor == VelocityFlavor::Rotational) return transpose(u);
  const Mat3 eta = minkowski_eta();
  return eta * transpose(u) * eta;
}

CoMovingVelocity co_moving_from_matrices(const Mat3& u, const Mat3& du, VelocityFlavor flavor) {
  return co_moving_components(group_inverse(u, flavor) * du, flavor);
}

double kinetic_energy_group(const CoMovingVelocity& v, double I1, double I2, double I3) {
  return 0.5 * (I1 * v.w1 * v.w1 + I2 * v.w2 * v.w2 + I3 * v.w3 * v.w3);
}

}  // namespace rotorlab
