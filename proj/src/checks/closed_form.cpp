#include "rotorlab/checks/closed_form.hpp"

#include <cmath>

namespace rotorlab::closed_form {

LaplacianCoefficients sphere_laplacian(double R, double M, double I, double t) {
  const double R2 = R * R, s = std::sin(t), c = std::cos(t), s2 = s * s;
  return {1.0 / R2, 1.0 / (R2 * s2), -2.0 * c / (R2 * s2), (M * R2 * s2 + I * c * c) / (I * R2 * s2),
          (1.0 / R2) * (c / s)};
}

LaplacianCoefficients pseudosphere_laplacian(double R, double M, double I, double t) {
  const double R2 = R * R, sh = std::sinh(t), ch = std::cosh(t), cth = ch / sh;
  return {1.0 / R2, 1.0 / (R2 * sh * sh), -2.0 * ch / (R2 * sh * sh), M / I + cth * cth / R2, cth / R2};
}

LaplacianCoefficients pseudosphere_laplacian_negative(double R, double M, double I, double t) {
  const double R2 = R * R, sh = std::sinh(t), ch = std::cosh(t), cth = ch / sh;
  return {1.0 / R2, 1.0 / (R2 * sh * sh), -2.0 * ch / (R2 * sh * sh), -M / I + cth * cth / R2, cth / R2};
}

LaplacianCoefficients torus_laplacian(double L, double R, double M, double I, double t) {
  const double s = std::sin(t), w = L + R * std::cos(t), w2 = w * w;
  return {1.0 / (R * R), 1.0 / w2, -2.0 * s / w2, M / I + s * s / w2, -s / (R * w)};
}

LaplacianCoefficients sphere_laplacian_resonance(double R, double t) {
  const double R2 = R * R, s = std::sin(t), c = std::cos(t);
  return {1.0 / R2, 1.0 / (R2 * s * s), -2.0 * c / (R2 * s * s), 1.0 / (R2 * s * s), (1.0 / R2) * (c / s)};
}

LaplacianCoefficients pseudosphere_laplacian_resonance(double R, double t) {
  const double R2 = R * R, sh = std::sinh(t), ch = std::cosh(t);
  return {1.0 / R2, 1.0 / (R2 * sh * sh), -2.0 * ch / (R2 * sh * sh), (1.0 / R2) * std::cosh(2.0 * t) / (sh * sh),
          (1.0 / R2) * (ch / sh)};
}

LaplacianCoefficients pseudosphere_laplacian_resonance_negative(double R, double t) {
  const double R2 = R * R, sh = std::sinh(t), ch = std::cosh(t);
  return {1.0 / R2, 1.0 / (R2 * sh * sh), -2.0 * ch / (R2 * sh * sh), 1.0 / (R2 * sh * sh), (1.0 / R2) * (ch / sh)};
}

LaplacianCoefficients sphere_laplacian_arc(double R, double M, double I, double r) {
  const double R2 = R * R, s = std::sin(r / R), c = std::cos(r / R), s2 = s * s;
  return {1.0, 1.0 / (R2 * s2), -2.0 * c / (R2 * s2), (M * R2 * s2 + I * c * c) / (I * R2 * s2), (1.0 / R) * (c / s)};
}

LaplacianCoefficients pseudosphere_laplacian_arc(double R, double M, double I, double r) {
  const double R2 = R * R, sh = std::sinh(r / R), ch = std::cosh(r / R), sh2 = sh * sh;
  return {1.0, 1.0 / (R2 * sh2), -2.0 * ch / (R2 * sh2), (M * R2 * sh2 + I * ch * ch) / (I * R2 * sh2),
          (1.0 / R) * (ch / sh)};
}

LaplacianCoefficients pseudosphere_laplacian_arc_negative(double R, double M, double I, double r) {
  const double R2 = R * R, sh = std::sinh(r / R), ch = std::cosh(r / R), sh2 = sh * sh;
  return {1.0, 1.0 / (R2 * sh2), -2.0 * ch / (R2 * sh2), (I * ch * ch - M * R2 * sh2) / (I * R2 * sh2),
          (1.0 / R) * (ch / sh)};
}

Mat3 torus_metric(double L, double R, double M, double I, double t) {
  const double s = std::sin(t), w = L + R * std::cos(t), k = I / M;
  return {{{R * R, 0.0, 0.0}, {0.0, w * w + k * s * s, k * s}, {0.0, k * s, k}}};
}

Mat3 torus_metric_inverse(double L, double R, double M, double I, double t) {
  const double s = std::sin(t), w = L + R * std::cos(t), w2 = w * w;
  return {{{1.0 / (R * R), 0.0, 0.0}, {0.0, 1.0 / w2, -s / w2}, {0.0, -s / w2, M / I + s * s / w2}}};
}

// From T = (M/2)(dr^2 + R^2 sin^2 dphi^2) + (I/2)(dpsi + cos dphi)^2 with dr = R dtheta.
Mat3 sphere_metric(double R, double M, double I, double t) {
  const double s = std::sin(t), c = std::cos(t), k = I / M;
  return {{{R * R, 0.0, 0.0}, {0.0, R * R * s * s + k * c * c, k * c}, {0.0, k * c, k}}};
}

Mat3 pseudosphere_metric(double R, double M, double I, double t) {
  const double sh = std::sinh(t), ch = std::cosh(t), k = I / M;
  return {{{R * R, 0.0, 0.0}, {0.0, R * R * sh * sh + k * ch * ch, k * ch}, {0.0, k * ch, k}}};
}

double sphere_volume_density(double R, double M, double I, double t) {
  return R * (std::sqrt(I / M) * R * std::sin(t));
}

double pseudosphere_volume_density(double R, double M, double I, double t) {
  return R * (std::sqrt(I / M) * R * std::sinh(t));
}

double torus_volume_density(double L, double R, double M, double I, double t) {
  return std::sqrt(I / M) * R * (L + R * std::cos(t));
}

double sphere_kinetic_energy(double R, double M, double I, double t, const Vec3& q) {
  const double dr = R * q[0];
  const double s = std::sin(t), omega = q[2] + std::cos(t) * q[1];
  return 0.5 * M * (dr * dr + R * R * s * s * q[1] * q[1]) + 0.5 * I * omega * omega;
}

double pseudosphere_kinetic_energy(double R, double M, double I, double t, const Vec3& q) {
  const double dr = R * q[0];
  const double sh = std::sinh(t), omega = q[2] + std::cosh(t) * q[1];
  return 0.5 * M * (dr * dr + R * R * sh * sh * q[1] * q[1]) + 0.5 * I * omega * omega;
}

double symmetric_top_level(int j, int s, double MR2_over_I) {
  return static_cast<double>(j) * (j + 1) - static_cast<double>(s) * s + MR2_over_I * s * s;
}

}  // namespace rotorlab::closed_form
