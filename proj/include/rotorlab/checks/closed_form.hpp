#pragma once

// Per-geometry formulas written out by hand, term by term, independently of
// the generic metric machinery. The invariant suite compares the generated
// quantities against these.

#include "rotorlab/linalg.hpp"
#include "rotorlab/operators.hpp"

namespace rotorlab::closed_form {

// Laplacians in theta form, sig = +1 unless stated.
LaplacianCoefficients sphere_laplacian(double R, double M, double I, double theta);
LaplacianCoefficients pseudosphere_laplacian(double R, double M, double I, double theta);
LaplacianCoefficients pseudosphere_laplacian_negative(double R, double M, double I, double theta);
LaplacianCoefficients torus_laplacian(double L, double R, double M, double I, double theta);

// Resonance case I = M R^2.
LaplacianCoefficients sphere_laplacian_resonance(double R, double theta);
LaplacianCoefficients pseudosphere_laplacian_resonance(double R, double theta);
LaplacianCoefficients pseudosphere_laplacian_resonance_negative(double R, double theta);

// Against r = R theta.
LaplacianCoefficients sphere_laplacian_arc(double R, double M, double I, double r);
LaplacianCoefficients pseudosphere_laplacian_arc(double R, double M, double I, double r);
LaplacianCoefficients pseudosphere_laplacian_arc_negative(double R, double M, double I, double r);

// Configuration metric in (theta, phi, psi) and its inverse.
Mat3 torus_metric(double L, double R, double M, double I, double theta);
Mat3 torus_metric_inverse(double L, double R, double M, double I, double theta);
Mat3 sphere_metric(double R, double M, double I, double theta);
Mat3 pseudosphere_metric(double R, double M, double I, double theta);

// sqrt|G| against d(theta) d(phi) d(psi); the r-form measure times dr/dtheta = R.
double sphere_volume_density(double R, double M, double I, double theta);
double pseudosphere_volume_density(double R, double M, double I, double theta);
double torus_volume_density(double L, double R, double M, double I, double theta);

// Kinetic energy written in coordinates, rates (dtheta, dphi, dpsi).
double sphere_kinetic_energy(double R, double M, double I, double theta, const Vec3& rates);
double pseudosphere_kinetic_energy(double R, double M, double I, double theta, const Vec3& rates);

/// Symmetric top eigenvalues j(j+1) - s^2 + (M R^2 / I) s^2, j >= max(|m|, |s|).
double symmetric_top_level(int j, int s, double MR2_over_I);

}  // namespace rotorlab::closed_form
