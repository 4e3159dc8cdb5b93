#pragma once

// Laplace-Beltrami operator on the configuration space and its reduction,
// for wave functions f(theta) exp(i m phi) exp(i s psi), to a radial
// Sturm-Liouville problem
//
//   f'' + drift f' - q f + energy_scale * E * f = 0,
//
// which in self-adjoint form reads  -(h f')'/h + q f = eps f,  eps = energy_scale * E.

#include <functional>

#include "rotorlab/geometry.hpp"
#include "rotorlab/potential.hpp"

namespace rotorlab {

/// Delta = a_tt d2/dtheta2 + b_t d/dtheta + a_pp d2/dphi2 + a_ps d2/dphi dpsi + a_ss d2/dpsi2.
/// The cross coefficient already contains the factor 2 of the symmetric sum.
struct LaplacianCoefficients {
  double a_tt;
  double a_pp;
  double a_ps;
  double a_ss;
  double b_t;

  /// Same operator written against r = R theta (only the theta terms change).
  LaplacianCoefficients in_arc_length(double R) const;
};

/// Coefficients of (1/sqrt|G|) d_i (sqrt|G| G^ij d_j). Throws SingularMetric at poles.
LaplacianCoefficients laplacian_coefficients(const ManifoldSpec& spec, const RotorParams& rotor, double theta);

enum class BoundaryKind {
  /// h -> 0 at the endpoint; regular solution selected by zero flux.
  SingularRegularized,
  /// Unbounded side, cut at a finite theta_max with f = 0.
  TruncatedDirichlet,
  Periodic,
};

struct RadialDomain {
  double lo;
  double hi;  // +infinity on the pseudosphere, cut by the grid
  BoundaryKind left;
  BoundaryKind right;
};

struct RadialProblem {
  int m = 0;
  int s = 0;
  /// Sturm-Liouville weight, proportional to h(theta).
  std::function<double(double)> weight;
  /// Coefficient of f' (equals weight'/weight).
  std::function<double(double)> drift;
  /// Effective potential, including energy_scale * V(theta).
  std::function<double(double)> q;
  /// 2 M R^2 / hbar^2.
  double energy_scale = 1.0;
  RadialDomain domain{};

  /// f'' + drift f' - q f at theta, for given point values of f and its derivatives.
  double apply(double f, double df, double d2f, double theta) const;
};

RadialProblem radial_problem(const ManifoldSpec& spec, const RotorParams& rotor, int m, int s, const Potential& V);

/// Delta(f e^{i m phi} e^{i s psi}) / (e^{i m phi} e^{i s psi}) at theta, with the
/// theta derivatives of `f` taken by central differences at spacings delta,
/// delta/2, delta/4 and Richardson-combined. Throws GridTooCoarse when the
/// differences do not shrink quadratically.
double apply_separated(const ManifoldSpec& spec, const RotorParams& rotor, int m, int s,
                       const std::function<double(double)>& f, double theta, double delta = 1e-3);

}  // namespace rotorlab
