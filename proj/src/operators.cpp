#include "rotorlab/operators.hpp"

#include <cmath>
#include <limits>

#include "rotorlab/errors.hpp"

namespace rotorlab {

LaplacianCoefficients LaplacianCoefficients::in_arc_length(double R) const {
  LaplacianCoefficients c = *this;
  c.a_tt = a_tt * R * R;
  c.b_t = b_t * R;
  return c;
}

LaplacianCoefficients laplacian_coefficients(const ManifoldSpec& spec, const RotorParams& rotor, double theta) {
  const MetricField g = metric_tensor(spec, rotor, theta);
  const Profile p = profile(spec, theta);
  const double R = spec.R();
  LaplacianCoefficients c{};
  c.a_tt = g.Ginv[0][0];
  c.a_pp = g.Ginv[1][1];
  c.a_ps = 2.0 * g.Ginv[1][2];
  c.a_ss = g.Ginv[2][2];
  // sqrt|G| G^tt = sqrt(I/M) |h| / R, so the first-order term is h'/(h R^2).
  c.b_t = p.dh / (p.h * R * R);
  return c;
}

double RadialProblem::apply(double f, double df, double d2f, double theta) const {
  return d2f + drift(theta) * df - q(theta) * f;
}

RadialProblem radial_problem(const ManifoldSpec& spec, const RotorParams& rotor, int m, int s, const Potential& V) {
  rotor.validate(spec);
  RadialProblem rp;
  rp.m = m;
  rp.s = s;
  const double R = spec.R();
  rp.energy_scale = 2.0 * rotor.M * R * R / (rotor.hbar * rotor.hbar);

  rp.weight = [spec](double theta) { return profile(spec, theta).h; };
  rp.drift = [spec](double theta) {
    const Profile p = profile(spec, theta);
    return p.dh / p.h;
  };
  const double mm = m, ss = s, es = rp.energy_scale;
  rp.q = [spec, rotor, mm, ss, es, V](double theta) {
    const LaplacianCoefficients c = laplacian_coefficients(spec, rotor, theta);
    const double R2 = spec.R() * spec.R();
    // d2/dphi2 -> -m^2, d2/dphi dpsi -> -m s, d2/dpsi2 -> -s^2
    return R2 * (mm * mm * c.a_pp + mm * ss * c.a_ps + ss * ss * c.a_ss) + es * V.value(spec, theta);
  };

  const ThetaDomain d = spec.theta_domain();
  switch (d.topology) {
    case Topology::SingularBoth:
      rp.domain = {d.lo, d.hi, BoundaryKind::SingularRegularized, BoundaryKind::SingularRegularized};
      break;
    case Topology::SingularLeft:
      rp.domain = {d.lo, d.hi, BoundaryKind::SingularRegularized, BoundaryKind::TruncatedDirichlet};
      break;
    case Topology::Periodic:
      rp.domain = {d.lo, d.hi, BoundaryKind::Periodic, BoundaryKind::Periodic};
      break;
  }
  return rp;
}

double apply_separated(const ManifoldSpec& spec, const RotorParams& rotor, int m, int s,
                       const std::function<double(double)>& f, double theta, double delta) {
  const LaplacianCoefficients c = laplacian_coefficients(spec, rotor, theta);
  const double f0 = f(theta);
  const double mm = m, ss = s;
  const double angular = -(mm * mm * c.a_pp + mm * ss * c.a_ps + ss * ss * c.a_ss) * f0;

  auto evaluate = [&](double d) {
    const double fp = f(theta + d), fm = f(theta - d);
    const double d1 = (fp - fm) / (2.0 * d);
    const double d2 = (fp - 2.0 * f0 + fm) / (d * d);
    return c.a_tt * d2 + c.b_t * d1 + angular;
  };

  const double l1 = evaluate(delta);
  const double l2 = evaluate(0.5 * delta);
  const double l4 = evaluate(0.25 * delta);
  const double diff_coarse = l1 - l2;
  const double diff_fine = l2 - l4;

  // Differences at the rounding floor of a second difference carry no signal.
  const double eps = std::numeric_limits<double>::epsilon();
  const double noise = 64.0 * eps * (std::abs(f0) + 1e-300) * c.a_tt * 16.0 / (delta * delta) + 64.0 * eps * std::abs(l4);
  if (std::abs(diff_coarse) > noise && std::abs(diff_fine) > noise) {
    const double ratio = diff_coarse / diff_fine;
    if (!(ratio > 2.5 && ratio < 6.5))
      throw GridTooCoarse("central differences do not converge quadratically (ratio " + std::to_string(ratio) + ")");
  }
  return (4.0 * l4 - l2) / 3.0;
}

}  // namespace rotorlab
