#include "rotorlab/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "rotorlab/errors.hpp"

namespace rotorlab {

namespace {

std::string describe(const ManifoldSpec& spec, double theta) {
  std::ostringstream os;
  os << to_string(spec.kind()) << ": theta = " << theta;
  return os.str();
}

void require_chart(const ManifoldSpec& spec, double theta, bool pole_is_singular_metric) {
  switch (classify(spec, theta)) {
    case ChartPoint::Interior:
      return;
    case ChartPoint::Pole:
      if (pole_is_singular_metric) throw SingularMetric("metric degenerates at pole (" + describe(spec, theta) + ")");
      throw DomainError("theta at a singular endpoint (" + describe(spec, theta) + ")");
    case ChartPoint::Outside:
      throw DomainError("theta outside the chart (" + describe(spec, theta) + ")");
  }
}

Profile raw_profile(const ManifoldSpec& spec, double theta) {
  const double R = spec.R();
  switch (spec.kind()) {
    case ManifoldKind::Sphere:
      return {R * std::sin(theta), R * std::cos(theta), std::cos(theta), -std::sin(theta)};
    case ManifoldKind::Pseudosphere:
      return {R * std::sinh(theta), R * std::cosh(theta), std::cosh(theta), std::sinh(theta)};
    case ManifoldKind::Torus:
      return {spec.L() + R * std::cos(theta), -R * std::sin(theta), std::sin(theta), std::cos(theta)};
  }
  return {};
}

}  // namespace

std::string_view to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::Sphere:
      return "sphere";
    case ManifoldKind::Pseudosphere:
      return "pseudosphere";
    case ManifoldKind::Torus:
      return "torus";
  }
  return "unknown";
}

ManifoldKind manifold_kind_from_string(std::string_view name) {
  if (name == "sphere") return ManifoldKind::Sphere;
  if (name == "pseudosphere") return ManifoldKind::Pseudosphere;
  if (name == "torus") return ManifoldKind::Torus;
  throw ConfigError("unknown manifold kind '" + std::string(name) + "'");
}

ManifoldSpec ManifoldSpec::sphere(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("sphere radius R must be positive");
  return {ManifoldKind::Sphere, R, 0.0};
}

ManifoldSpec ManifoldSpec::pseudosphere(double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("pseudoradius R must be positive");
  return {ManifoldKind::Pseudosphere, R, 0.0};
}

ManifoldSpec ManifoldSpec::torus(double L, double R) {
  if (!(R > 0.0) || !std::isfinite(R)) throw ConfigError("torus tube radius R must be positive");
  // The quartic self-intersects for L <= R.
  if (!(L > R) || !std::isfinite(L)) throw ConfigError("torus central radius L must exceed R");
  return {ManifoldKind::Torus, R, L};
}

ThetaDomain ManifoldSpec::theta_domain() const {
  switch (kind_) {
    case ManifoldKind::Sphere:
      return {0.0, std::numbers::pi, Topology::SingularBoth};
    case ManifoldKind::Pseudosphere:
      return {0.0, std::numeric_limits<double>::infinity(), Topology::SingularLeft};
    case ManifoldKind::Torus:
      return {0.0, 2.0 * std::numbers::pi, Topology::Periodic};
  }
  return {};
}

void RotorParams::validate(const ManifoldSpec& spec) const {
  if (!(M > 0.0) || !std::isfinite(M)) throw ConfigError("mass M must be positive");
  if (!(I > 0.0) || !std::isfinite(I)) throw ConfigError("moment of inertia I must be positive");
  if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
  if (sig != 1 && sig != -1) throw ConfigError("signature sign must be +1 or -1");
  if (sig == -1 && spec.kind() != ManifoldKind::Pseudosphere)
    throw ConfigError("negative rotational signature is only defined on the pseudosphere");
}

ChartPoint classify(const ManifoldSpec& spec, double theta) {
  if (!std::isfinite(theta)) return ChartPoint::Outside;
  switch (spec.kind()) {
    case ManifoldKind::Sphere:
      if (theta < 0.0 || theta > std::numbers::pi) return ChartPoint::Outside;
      if (theta <= kEndpointTolerance || std::numbers::pi - theta <= kEndpointTolerance) return ChartPoint::Pole;
      return ChartPoint::Interior;
    case ManifoldKind::Pseudosphere:
      if (theta < 0.0) return ChartPoint::Outside;
      if (theta <= kEndpointTolerance) return ChartPoint::Pole;
      return ChartPoint::Interior;
    case ManifoldKind::Torus:
      return ChartPoint::Interior;
  }
  return ChartPoint::Outside;
}

Profile profile(const ManifoldSpec& spec, double theta) {
  require_chart(spec, theta, false);
  return raw_profile(spec, theta);
}

double profile_h_second_derivative(const ManifoldSpec& spec, double theta) {
  require_chart(spec, theta, false);
  const double R = spec.R();
  switch (spec.kind()) {
    case ManifoldKind::Sphere:
      return -R * std::sin(theta);
    case ManifoldKind::Pseudosphere:
      return R * std::sinh(theta);
    case ManifoldKind::Torus:
      return -R * std::cos(theta);
  }
  return 0.0;
}

MetricField metric_tensor(const ManifoldSpec& spec, const RotorParams& rotor, double theta) {
  require_chart(spec, theta, true);
  const Profile p = raw_profile(spec, theta);
  if (p.h == 0.0) throw SingularMetric("h vanishes (" + describe(spec, theta) + ")");

  const double R = spec.R();
  const double k = rotor.sig * rotor.inertia_ratio();  // signed I/M
  const double h2 = p.h * p.h;

  MetricField f{};
  f.G = Mat3{{{R * R, 0.0, 0.0}, {0.0, h2 + k * p.c * p.c, k * p.c}, {0.0, k * p.c, k}}};
  const double cross = -p.c / h2;
  f.Ginv = Mat3{{{1.0 / (R * R), 0.0, 0.0}, {0.0, 1.0 / h2, cross}, {0.0, cross, 1.0 / k + p.c * p.c / h2}}};
  f.det = k * R * R * h2;
  f.sqrt_abs_det = std::sqrt(rotor.inertia_ratio()) * R * std::abs(p.h);
  return f;
}

Vec3 embed(const ManifoldSpec& spec, double theta, double phi) {
  if (classify(spec, theta) == ChartPoint::Outside || !std::isfinite(phi))
    throw DomainError("embedding outside the chart (" + describe(spec, theta) + ")");
  const double R = spec.R();
  switch (spec.kind()) {
    case ManifoldKind::Sphere:
      return {R * std::sin(theta) * std::cos(phi), R * std::sin(theta) * std::sin(phi), R * std::cos(theta)};
    case ManifoldKind::Pseudosphere:
      return {R * std::sinh(theta) * std::cos(phi), R * std::sinh(theta) * std::sin(phi), R * std::cosh(theta)};
    case ManifoldKind::Torus: {
      const double rho = spec.L() + R * std::cos(theta);
      return {rho * std::cos(phi), rho * std::sin(phi), R * std::sin(theta)};
    }
  }
  return {};
}

double implicit_residual(const ManifoldSpec& spec, const Vec3& point) {
  const double R = spec.R();
  const double x2 = point[0] * point[0], y2 = point[1] * point[1], z2 = point[2] * point[2];
  switch (spec.kind()) {
    case ManifoldKind::Sphere:
      return x2 + y2 + z2 - R * R;
    case ManifoldKind::Pseudosphere: {
      const double res = -x2 - y2 + z2 - R * R;
      const double scale = R * R + x2 + y2 + z2;
      if (point[2] <= 0.0 && std::abs(res) <= 1e-9 * scale)
        throw HemisphereError("point lies on the lower sheet of the hyperboloid (z <= 0)");
      return res;
    }
    case ManifoldKind::Torus: {
      const double L = spec.L();
      const double a = x2 + y2 + z2 + L * L - R * R;
      return a * a - 4.0 * L * L * (x2 + y2);
    }
  }
  return 0.0;
}

FrameVectors frame_vectors(const ManifoldSpec& spec, double theta) {
  require_chart(spec, theta, true);
  const Profile p = raw_profile(spec, theta);
  if (p.h == 0.0) throw SingularMetric("frame is singular where h vanishes");
  FrameVectors f{};
  if (spec.kind() == ManifoldKind::Torus) {
    f.coordinate = RadialCoordinate::Angle;
    f.radial = {1.0 / spec.R(), 0.0};
    f.base_metric = {spec.R() * spec.R(), p.h * p.h};
  } else {
    f.coordinate = RadialCoordinate::ArcLength;
    f.radial = {1.0, 0.0};
    f.base_metric = {1.0, p.h * p.h};
  }
  f.azimuthal = {0.0, 1.0 / p.h};
  return f;
}

double scalar_curvature(const ManifoldSpec& spec, double theta) {
  const Profile p = profile(spec, theta);
  const double R = spec.R();
  // K = -h''(r)/h(r) with r = R theta.
  const double gaussian = -profile_h_second_derivative(spec, theta) / (R * R * p.h);
  return 2.0 * gaussian;
}

}  // namespace rotorlab
