#include "rotorlab/classical.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace rotorlab {

namespace {

// h(theta) continued past the poles (negative beyond them), for the pole guard.
double signed_h(const ManifoldSpec& spec, double theta) {
  switch (spec.kind()) {
    case ManifoldKind::Sphere:
      return spec.R() * std::sin(theta);
    case ManifoldKind::Pseudosphere:
      return spec.R() * std::sinh(theta);
    case ManifoldKind::Torus:
      return spec.L() + spec.R() * std::cos(theta);
  }
  return 0.0;
}

double relative_drift(double value, double reference) {
  return reference != 0.0 ? (value - reference) / std::abs(reference) : value - reference;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

void record(TrajectoryRecord& rec, const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, double t,
            const State& s) {
  const double H = hamiltonian(spec, rotor, V, s);
  rec.times.push_back(t);
  rec.states.push_back(s);
  rec.energy.push_back(H);
  const State& s0 = rec.states.front();
  rec.energy_drift.push_back(relative_drift(H, rec.energy.front()));
  rec.p_phi_drift.push_back(relative_drift(s.p[1], s0.p[1]));
  rec.p_psi_drift.push_back(relative_drift(s.p[2], s0.p[2]));
}

State midpoint_of(const State& a, const State& b) {
  State m;
  for (int i = 0; i < 3; ++i) {
    m.q[i] = 0.5 * (a.q[i] + b.q[i]);
    m.p[i] = 0.5 * (a.p[i] + b.p[i]);
  }
  return m;
}

State advance(const State& z, const State& rate, double dt) {
  State out;
  for (int i = 0; i < 3; ++i) {
    out.q[i] = z.q[i] + dt * rate.q[i];
    out.p[i] = z.p[i] + dt * rate.p[i];
  }
  return out;
}

}  // namespace

Vec3 momenta_from_rates(const ManifoldSpec& spec, const RotorParams& rotor, double theta, const Vec3& rates) {
  const MetricField g = metric_tensor(spec, rotor, theta);
  Vec3 p = g.G * rates;
  for (double& v : p) v *= rotor.M;
  return p;
}

Vec3 rates_from_momenta(const ManifoldSpec& spec, const RotorParams& rotor, double theta, const Vec3& momenta) {
  const MetricField g = metric_tensor(spec, rotor, theta);
  Vec3 r = g.Ginv * momenta;
  for (double& v : r) v /= rotor.M;
  return r;
}

double kinetic_energy(const ManifoldSpec& spec, const RotorParams& rotor, double theta, const Vec3& rates) {
  const MetricField g = metric_tensor(spec, rotor, theta);
  return 0.5 * rotor.M * dot(rates, g.G * rates);
}

double hamiltonian(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, const State& state) {
  const MetricField g = metric_tensor(spec, rotor, state.q[0]);
  return dot(state.p, g.Ginv * state.p) / (2.0 * rotor.M) + V.value(spec, state.q[0]);
}

State hamiltonian_flow(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, const State& state) {
  const double theta = state.q[0];
  const MetricField g = metric_tensor(spec, rotor, theta);
  const Profile pr = profile(spec, theta);
  const double h = pr.h, h2 = h * h, h3 = h2 * h;

  // d/dtheta of the inverse metric; the theta-theta entry is constant.
  const double dpp = -2.0 * pr.dh / h3;
  const double dps = -pr.dc / h2 + 2.0 * pr.c * pr.dh / h3;
  const double dss = 2.0 * pr.c * pr.dc / h2 - 2.0 * pr.c * pr.c * pr.dh / h3;
  const double pp = state.p[1], ps = state.p[2];
  const double quad = dpp * pp * pp + 2.0 * dps * pp * ps + dss * ps * ps;

  State rate;
  rate.q = g.Ginv * state.p;
  for (double& v : rate.q) v /= rotor.M;
  rate.p = {-quad / (2.0 * rotor.M) - V.derivative(spec, theta), 0.0, 0.0};
  return rate;
}

double TrajectoryRecord::max_abs_energy_drift() const { return max_abs(energy_drift); }
double TrajectoryRecord::max_abs_p_phi_drift() const { return max_abs(p_phi_drift); }
double TrajectoryRecord::max_abs_p_psi_drift() const { return max_abs(p_psi_drift); }

TrajectoryRecord integrate(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V,
                           const State& initial, double dt, std::size_t steps, const IntegratorOptions& options) {
  rotor.validate(spec);
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("time step must be positive");
  const std::size_t every = std::max<std::size_t>(1, options.record_every);
  const double h_min = options.h_min_factor * spec.R();

  TrajectoryRecord rec;
  if (signed_h(spec, initial.q[0]) < h_min) {
    std::ostringstream os;
    os << "initial theta = " << initial.q[0] << " is at a pole of the chart";
    throw PoleApproach(os.str(), std::move(rec));
  }
  record(rec, spec, rotor, V, 0.0, initial);

  auto halt_pole = [&](double t, double theta) {
    std::ostringstream os;
    os << "trajectory approached a pole at t = " << t << " (theta = " << theta << ")";
    throw PoleApproach(os.str(), std::move(rec));
  };

  State z = initial;
  double t = 0.0;
  for (std::size_t step = 1; step <= steps; ++step) {
    State next = advance(z, hamiltonian_flow(spec, rotor, V, z), dt);
    double change = std::numeric_limits<double>::infinity();
    int it = 0;
    for (; it < options.max_iterations; ++it) {
      const State mid = midpoint_of(z, next);
      if (signed_h(spec, mid.q[0]) < h_min) halt_pole(t + 0.5 * dt, mid.q[0]);
      const State candidate = advance(z, hamiltonian_flow(spec, rotor, V, mid), dt);
      change = 0.0;
      double scale = 1.0;
      for (int i = 0; i < 3; ++i) {
        change = std::max({change, std::abs(candidate.q[i] - next.q[i]), std::abs(candidate.p[i] - next.p[i])});
        scale = std::max({scale, std::abs(candidate.q[i]), std::abs(candidate.p[i])});
      }
      next = candidate;
      change /= scale;
      // Keep iterating past the tolerance down to the rounding floor.
      if (change <= 4.0 * std::numeric_limits<double>::epsilon()) break;
      if (change <= options.tolerance && it >= 8) break;
    }
    if (!(change <= options.tolerance)) {
      std::ostringstream os;
      os << "implicit midpoint stage did not converge at t = " << t << " (last change " << change << ")";
      throw StepRejected(os.str(), std::move(rec));
    }
    z = next;
    t = static_cast<double>(step) * dt;
    if (signed_h(spec, z.q[0]) < h_min) {
      halt_pole(t, z.q[0]);
    }
    if (step % every == 0 || step == steps) record(rec, spec, rotor, V, t, z);
  }
  return rec;
}

RadialMomentum::RadialMomentum(ManifoldSpec spec, RotorParams rotor, Potential V, double E, double mu, double sigma,
                               const HjOptions& options)
    : spec_(spec), rotor_(rotor), V_(std::move(V)), E_(E), mu_(mu), sigma_(sigma) {
  rotor_.validate(spec_);
  if (!std::isfinite(E) || !std::isfinite(mu) || !std::isfinite(sigma))
    throw ConfigError("E, mu and sigma must be finite");

  const ThetaDomain d = spec_.theta_domain();
  const bool periodic = d.topology == Topology::Periodic;
  double lo = 0.0, hi = 0.0;
  switch (d.topology) {
    case Topology::SingularBoth:
      lo = 10.0 * kEndpointTolerance;
      hi = d.hi - 10.0 * kEndpointTolerance;
      break;
    case Topology::SingularLeft:
      lo = 10.0 * kEndpointTolerance;
      hi = options.theta_max;
      break;
    case Topology::Periodic:
      lo = -std::numbers::pi;
      hi = std::numbers::pi;
      break;
  }
  const std::size_t n = std::max<std::size_t>(options.samples, 16);
  std::vector<double> theta(n + 1), value(n + 1);
  bool any_allowed = false;
  for (std::size_t i = 0; i <= n; ++i) {
    theta[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n);
    value[i] = p_squared(theta[i]);
    any_allowed = any_allowed || value[i] >= 0.0;
  }
  if (!any_allowed) throw NoAllowedRegion("p_theta^2 < 0 over the whole chart: no classically allowed motion");

  // Bisection on the sign; the returned point sits on the allowed side.
  auto refine = [&](double a, double b) {
    double fa = p_squared(a);
    for (int it = 0; it < 200 && b - a > 0.0; ++it) {
      const double mid = 0.5 * (a + b);
      if (mid <= std::min(a, b) || mid >= std::max(a, b)) break;
      const double fm = p_squared(mid);
      if ((fm >= 0.0) == (fa >= 0.0)) {
        a = mid;
        fa = fm;
      } else {
        b = mid;
      }
    }
    return fa >= 0.0 ? a : b;
  };

  double start = value[0] >= 0.0 ? lo : std::numeric_limits<double>::quiet_NaN();
  bool start_turning = false;
  for (std::size_t i = 0; i < n; ++i) {
    const bool a_ok = value[i] >= 0.0, b_ok = value[i + 1] >= 0.0;
    if (a_ok == b_ok) continue;
    const double tp = refine(theta[i], theta[i + 1]);
    turning_.push_back(tp);
    if (!a_ok) {
      start = tp;
      start_turning = true;
    } else {
      intervals_.push_back({start, tp, start_turning, true});
    }
  }
  if (value[n] >= 0.0) intervals_.push_back({start, hi, start_turning, false});

  if (periodic && intervals_.size() >= 2 && value[0] >= 0.0 && value[n] >= 0.0) {
    // The first and last pieces join across theta = +-pi.
    AllowedInterval first = intervals_.front(), last = intervals_.back();
    intervals_.erase(intervals_.begin());
    intervals_.back() = {last.lo, first.hi + 2.0 * std::numbers::pi, last.lo_turning, first.hi_turning};
  }
}

double RadialMomentum::p_squared(double theta) const {
  const MetricField g = metric_tensor(spec_, rotor_, theta);
  const double R2 = spec_.R() * spec_.R();
  const double angular = g.Ginv[1][1] * mu_ * mu_ + 2.0 * g.Ginv[1][2] * mu_ * sigma_ + g.Ginv[2][2] * sigma_ * sigma_;
  return 2.0 * rotor_.M * R2 * (E_ - V_.value(spec_, theta)) - R2 * angular;
}

double RadialMomentum::operator()(double theta) const { return std::sqrt(std::max(0.0, p_squared(theta))); }

template <class F>
double RadialMomentum::integrate_with_endpoint_map(const AllowedInterval& iv, double hi, F&& integrand) const {
  using boost::math::quadrature::gauss_kronrod;
  const double lo = iv.lo;
  const double width = hi - lo;
  if (!(width > 0.0)) return 0.0;
  constexpr unsigned depth = 20;
  constexpr double tol = 1e-13;
  // Cosine maps cancel the inverse-square-root behaviour at turning points.
  if (iv.lo_turning && iv.hi_turning) {
    const double mid = 0.5 * (lo + hi), half = 0.5 * width;
    auto g = [&](double u) { return integrand(std::clamp(mid - half * std::cos(u), lo, hi)) * half * std::sin(u); };
    return gauss_kronrod<double, 31>::integrate(g, 0.0, std::numbers::pi, depth, tol);
  }
  if (iv.lo_turning) {
    auto g = [&](double u) { return integrand(std::clamp(lo + width * (1.0 - std::cos(u)), lo, hi)) * width * std::sin(u); };
    return gauss_kronrod<double, 31>::integrate(g, 0.0, 0.5 * std::numbers::pi, depth, tol);
  }
  if (iv.hi_turning) {
    auto g = [&](double u) { return integrand(std::clamp(hi - width * (1.0 - std::cos(u)), lo, hi)) * width * std::sin(u); };
    return gauss_kronrod<double, 31>::integrate(g, 0.0, 0.5 * std::numbers::pi, depth, tol);
  }
  return gauss_kronrod<double, 31>::integrate(integrand, lo, hi, depth, tol);
}

double RadialMomentum::action(const AllowedInterval& interval) const {
  return integrate_with_endpoint_map(interval, interval.hi, [this](double th) { return (*this)(th); });
}

double RadialMomentum::reduced_action(const AllowedInterval& interval, double theta) const {
  if (theta < interval.lo || theta > interval.hi) throw DomainError("theta outside the allowed interval");
  AllowedInterval part{interval.lo, theta, interval.lo_turning, theta == interval.hi && interval.hi_turning};
  return integrate_with_endpoint_map(part, theta, [this](double th) { return (*this)(th); });
}

double RadialMomentum::period(const AllowedInterval& interval) const {
  if (!interval.bounded()) throw DomainError("period requires an interval bounded by two turning points");
  const double mr2 = rotor_.M * spec_.R() * spec_.R();
  // Nodes that round onto the forbidden side carry vanishing weight; drop them.
  const double half = integrate_with_endpoint_map(interval, interval.hi, [&](double th) {
    const double p = (*this)(th);
    return p > 0.0 ? mr2 / p : 0.0;
  });
  return 2.0 * half;
}

RadialMomentum hj_radial_momentum(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, double E,
                                  double mu, double sigma, const HjOptions& options) {
  return RadialMomentum(spec, rotor, V, E, mu, sigma, options);
}

}  // namespace rotorlab
