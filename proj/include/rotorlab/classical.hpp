#pragma once

// Classical rotor dynamics with H = (1/2M) G^ij p_i p_j + V(theta), and the
// Hamilton-Jacobi reduction S = S_theta(theta) + mu phi + sigma psi.

#include <cstddef>
#include <vector>

#include "rotorlab/errors.hpp"
#include "rotorlab/geometry.hpp"
#include "rotorlab/potential.hpp"

namespace rotorlab {

/// Configuration (theta, phi, psi) and conjugate momenta. theta is not wrapped
/// on the torus, so trajectories stay continuous.
struct State {
  Vec3 q{};
  Vec3 p{};
};

/// p = M G qdot.
Vec3 momenta_from_rates(const ManifoldSpec& spec, const RotorParams& rotor, double theta, const Vec3& rates);
/// qdot = G^{-1} p / M.
Vec3 rates_from_momenta(const ManifoldSpec& spec, const RotorParams& rotor, double theta, const Vec3& momenta);
/// (M/2) G_ij qdot^i qdot^j.
double kinetic_energy(const ManifoldSpec& spec, const RotorParams& rotor, double theta, const Vec3& rates);
double hamiltonian(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, const State& state);

/// Right-hand side of Hamilton's equations: (qdot, pdot).
State hamiltonian_flow(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, const State& state);

struct TrajectoryRecord {
  std::vector<double> times;
  std::vector<State> states;
  std::vector<double> energy;
  /// (H - H0) / |H0|, absolute when H0 = 0.
  std::vector<double> energy_drift;
  std::vector<double> p_phi_drift;
  std::vector<double> p_psi_drift;

  double max_abs_energy_drift() const;
  double max_abs_p_phi_drift() const;
  double max_abs_p_psi_drift() const;
};

struct IntegratorOptions {
  /// Store every n-th step (the final state is always stored).
  std::size_t record_every = 1;
  /// Halt when h(theta) < h_min_factor * R.
  double h_min_factor = 1e-6;
  /// Fixed-point convergence of the implicit midpoint stage.
  double tolerance = 1e-13;
  int max_iterations = 100;
};

/// Raised when integration stops early; `partial` holds the trajectory so far.
class DynamicsHalt : public Error {
 public:
  DynamicsHalt(const std::string& what, TrajectoryRecord partial) : Error(what), partial(std::move(partial)) {}
  TrajectoryRecord partial;
};

class PoleApproach : public DynamicsHalt {
 public:
  using DynamicsHalt::DynamicsHalt;
};

class StepRejected : public DynamicsHalt {
 public:
  using DynamicsHalt::DynamicsHalt;
};

/// Implicit midpoint rule, fixed step. Second order, symmetric, symplectic.
TrajectoryRecord integrate(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V,
                           const State& initial, double dt, std::size_t steps, const IntegratorOptions& options = {});

struct AllowedInterval {
  double lo;
  double hi;
  /// Whether each end is a turning point (p_theta = 0) rather than a chart edge.
  bool lo_turning;
  bool hi_turning;
  bool bounded() const { return lo_turning && hi_turning; }
};

struct HjOptions {
  /// Outer search bound on the pseudosphere.
  double theta_max = 12.0;
  std::size_t samples = 4096;
};

/// p_theta(theta) of the separated Hamilton-Jacobi equation at energy E and
/// constants of motion mu = p_phi, sigma = p_psi.
class RadialMomentum {
 public:
  RadialMomentum(ManifoldSpec spec, RotorParams rotor, Potential V, double E, double mu, double sigma,
                 const HjOptions& options = {});

  /// 2 M R^2 (E - V) - R^2 (G^pp mu^2 + 2 G^ps mu sigma + G^ss sigma^2).
  double p_squared(double theta) const;
  /// sqrt of p_squared, zero in the forbidden region.
  double operator()(double theta) const;

  const std::vector<double>& turning_points() const { return turning_; }
  const std::vector<AllowedInterval>& allowed_intervals() const { return intervals_; }

  /// Integral of p_theta over the interval.
  double action(const AllowedInterval& interval) const;
  /// Integral of p_theta from interval.lo to theta.
  double reduced_action(const AllowedInterval& interval, double theta) const;
  /// Oscillation period 2 * integral of M R^2 / p_theta; requires a bounded interval.
  double period(const AllowedInterval& interval) const;

  double energy() const { return E_; }
  double mu() const { return mu_; }
  double sigma() const { return sigma_; }

 private:
  template <class F>
  double integrate_with_endpoint_map(const AllowedInterval& interval, double hi, F&& integrand) const;

  ManifoldSpec spec_;
  RotorParams rotor_;
  Potential V_;
  double E_, mu_, sigma_;
  std::vector<double> turning_;
  std::vector<AllowedInterval> intervals_;
};

/// Throws NoAllowedRegion when p_theta^2 < 0 on the whole search range.
RadialMomentum hj_radial_momentum(const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, double E,
                                  double mu, double sigma, const HjOptions& options = {});

}  // namespace rotorlab
