#include <Eigen/Dense>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rotorlab/classical.hpp"
#include "rotorlab/groups.hpp"
#include "support.hpp"

using namespace rotorlab;
using std::numbers::pi;

TEST_SUITE("classical") {
  TEST_CASE("momenta examples") {
    const ManifoldSpec torus = ManifoldSpec::torus(3.0, 1.0);
    const RotorParams rotor{1.0, 2.0, 1.0, 1};
    const Vec3 zero = momenta_from_rates(torus, rotor, 0.7, {0, 0, 0});
    CHECK(zero == Vec3{0, 0, 0});
    const double w = 1.3;
    const Vec3 p = momenta_from_rates(torus, rotor, pi / 2, {0, w, 0});
    CHECK(std::abs(p[0]) < 1e-15);
    CHECK(p[1] == doctest::Approx(11 * w));
    CHECK(p[2] == doctest::Approx(2 * w));
  }

  TEST_CASE("rates and momenta round-trip") {
    for (const ManifoldSpec& spec :
         {ManifoldSpec::sphere(1.2), ManifoldSpec::pseudosphere(0.8), ManifoldSpec::torus(3.0, 1.5)}) {
      const RotorParams rotor{1.7, 0.6, 1.0, 1};
      for (int i = 0; i < 200; ++i) {
        const double theta = test::uniform(0.05, 3.0);
        const Vec3 rates{test::uniform(-2, 2), test::uniform(-2, 2), test::uniform(-2, 2)};
        const Vec3 back = rates_from_momenta(spec, rotor, theta, momenta_from_rates(spec, rotor, theta, rates));
        for (int k = 0; k < 3; ++k) CHECK(std::abs(back[k] - rates[k]) <= 1e-12 * (1 + std::abs(rates[k])));
      }
    }
    CHECK_THROWS_AS(momenta_from_rates(ManifoldSpec::sphere(1.0), {}, 0.0, {1, 0, 0}), SingularMetric);
  }

  TEST_CASE("Hamiltonian examples") {
    const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
    CHECK(hamiltonian(sphere, {}, Potential::zero(), {{1.0, 0, 0}, {0, 0, 0}}) == 0.0);
    for (double I : {0.3, 1.0, 4.0}) {
      const State s{{pi / 2, 0.4, -1.0}, {0.0, 1.7, 0.0}};
      CHECK(hamiltonian(sphere, {1.0, I, 1.0, 1}, Potential::zero(), s) == doctest::Approx(1.7 * 1.7 / 2).epsilon(1e-14));
    }
  }

  TEST_CASE("Legendre transform identity") {
    const Potential V = Potential::cosine_well(0.8);
    for (const ManifoldSpec& spec :
         {ManifoldSpec::sphere(1.2), ManifoldSpec::pseudosphere(0.8), ManifoldSpec::torus(3.0, 1.5)}) {
      for (int sig : {1, -1}) {
        if (sig < 0 && spec.kind() != ManifoldKind::Pseudosphere) continue;
        const RotorParams rotor{1.3, 0.9, 1.0, sig};
        for (int i = 0; i < 200; ++i) {
          const double theta = test::uniform(0.05, 3.0);
          const Vec3 rates{test::uniform(-2, 2), test::uniform(-2, 2), test::uniform(-2, 2)};
          const State s{{theta, 0.0, 0.0}, momenta_from_rates(spec, rotor, theta, rates)};
          const double expected = kinetic_energy(spec, rotor, theta, rates) + V.value(spec, theta);
          CHECK(std::abs(hamiltonian(spec, rotor, V, s) - expected) <= 1e-12 * (1 + std::abs(expected)));
        }
      }
    }
  }

  TEST_CASE("Hamiltonian flow matches finite differences of H") {
    const Potential V = Potential::cosine_well(0.5);
    const ManifoldSpec spec = ManifoldSpec::torus(3.0, 1.0);
    const RotorParams rotor{1.1, 0.7, 1.0, 1};
    const State s{{0.8, 0.1, 0.2}, {0.3, 2.0, -0.6}};
    const State f = hamiltonian_flow(spec, rotor, V, s);
    const double d = 1e-6;
    for (int k = 0; k < 3; ++k) {
      State a = s, b = s;
      a.p[k] += d;
      b.p[k] -= d;
      CHECK(f.q[k] == doctest::Approx((hamiltonian(spec, rotor, V, a) - hamiltonian(spec, rotor, V, b)) / (2 * d)).epsilon(1e-8));
    }
    State a = s, b = s;
    a.q[0] += d;
    b.q[0] -= d;
    CHECK(f.p[0] == doctest::Approx(-(hamiltonian(spec, rotor, V, a) - hamiltonian(spec, rotor, V, b)) / (2 * d)).epsilon(1e-7));
    CHECK(f.p[1] == 0.0);
    CHECK(f.p[2] == 0.0);
  }

  TEST_CASE("equatorial geodesic stays on the equator") {
    const TrajectoryRecord r =
        integrate(ManifoldSpec::sphere(1.0), {1.0, 0.5, 1.0, 1}, Potential::zero(), {{pi / 2, 0, 0}, {0, 1.3, 0}}, 1e-3, 5000);
    for (const State& s : r.states) CHECK(std::abs(s.q[0] - pi / 2) < 1e-12);
    CHECK(r.states.back().q[1] == doctest::Approx(1.3 * 5.0).epsilon(1e-10));
  }

  TEST_CASE("meridian launch is free motion until the pole guard") {
    const double M = 1.4, R = 0.9, pt = 0.8, theta0 = 0.5;
    IntegratorOptions o;
    o.record_every = 7;
    try {
      integrate(ManifoldSpec::sphere(R), {M, 0.5, 1.0, 1}, Potential::zero(), {{theta0, 0, 0}, {pt, 0, 0}}, 1e-3, 100000, o);
      FAIL("expected a pole approach");
    } catch (const PoleApproach& halt) {
      const TrajectoryRecord& r = halt.partial;
      REQUIRE(r.states.size() > 10);
      for (std::size_t i = 0; i < r.states.size(); ++i)
        CHECK(r.states[i].q[0] == doctest::Approx(theta0 + pt / (M * R * R) * r.times[i]).epsilon(1e-10));
      CHECK(pi - r.states.back().q[0] < 0.01);
    }
  }

  TEST_CASE("integrate validates its inputs") {
    const ManifoldSpec s = ManifoldSpec::sphere(1.0);
    CHECK_THROWS_AS(integrate(s, {}, Potential::zero(), {{1, 0, 0}, {0, 1, 0}}, -1e-3, 10), ConfigError);
    CHECK_THROWS_AS(integrate(s, {}, Potential::zero(), {{0, 0, 0}, {0, 1, 0}}, 1e-3, 10), Error);
  }

  TEST_CASE("energy drift is small and second order, cyclic momenta are exact") {
    const ManifoldSpec spec = ManifoldSpec::pseudosphere(1.0);
    const RotorParams rotor{1.0, 0.7, 1.0, 1};
    const State s0{{1.0, 0, 0}, {0.3, 1.0, 0.5}};
    const TrajectoryRecord a = integrate(spec, rotor, Potential::cosine_well(1.0), s0, 2e-3, 5000);
    const TrajectoryRecord b = integrate(spec, rotor, Potential::cosine_well(1.0), s0, 1e-3, 10000);
    CHECK(a.max_abs_energy_drift() < 5e-6);
    CHECK(a.max_abs_energy_drift() / b.max_abs_energy_drift() == doctest::Approx(4.0).epsilon(0.1));
    CHECK(b.max_abs_p_phi_drift() <= 1e-10);
    CHECK(b.max_abs_p_psi_drift() <= 1e-10);
    CHECK(b.times.back() == doctest::Approx(10.0));
  }

  TEST_CASE("time reversibility") {
    const ManifoldSpec spec = ManifoldSpec::torus(3.0, 1.0);
    const RotorParams rotor{1.0, 2.0, 1.0, 1};
    const State s0{{0.3, 0.1, 0.2}, {0.8, 3.0, 0.5}};
    const State s1 = integrate(spec, rotor, Potential::zero(), s0, 1e-2, 300).states.back();
    const State back = integrate(spec, rotor, Potential::zero(), {s1.q, {-s1.p[0], -s1.p[1], -s1.p[2]}}, 1e-2, 300).states.back();
    for (int k = 0; k < 3; ++k) {
      CHECK(back.q[k] == doctest::Approx(s0.q[k]).epsilon(1e-9));
      CHECK(-back.p[k] == doctest::Approx(s0.p[k]).epsilon(1e-9));
    }
  }

  TEST_CASE("kinetic energy along a trajectory equals the group form") {
    for (ManifoldKind kind : {ManifoldKind::Sphere, ManifoldKind::Pseudosphere}) {
      const bool sph = kind == ManifoldKind::Sphere;
      const double M = 1.2, R = 0.9, I = 0.4;
      const ManifoldSpec spec = sph ? ManifoldSpec::sphere(R) : ManifoldSpec::pseudosphere(R);
      const RotorParams rotor{M, I, 1.0, 1};
      const TrajectoryRecord r =
          integrate(spec, rotor, Potential::cosine_well(0.6), {{1.0, 0.2, -0.3}, {0.4, 0.8, 0.3}}, 1e-3, 3000, {10});
      for (const State& s : r.states) {
        const Vec3 v = rates_from_momenta(spec, rotor, s.q[0], s.p);
        const double T = kinetic_energy(spec, rotor, s.q[0], v);
        const CoMovingVelocity w = co_moving_velocity({s.q[1], s.q[0], s.q[2]}, {v[1], v[0], v[2]},
                                                      sph ? VelocityFlavor::Rotational : VelocityFlavor::Lorentzian);
        CHECK(kinetic_energy_group(w, M * R * R, M * R * R, I) == doctest::Approx(T).epsilon(1e-10));
      }
    }
  }

  TEST_CASE("Hamilton-Jacobi: free meridian motion") {
    const double M = 1.3, R = 0.7, E = 2.0;
    const RadialMomentum p = hj_radial_momentum(ManifoldSpec::sphere(R), {M, 0.5, 1.0, 1}, Potential::zero(), E, 0, 0);
    CHECK(p.turning_points().empty());
    for (double theta : {0.1, 1.0, 3.0}) CHECK(p(theta) == doctest::Approx(std::sqrt(2 * M * E) * R).epsilon(1e-14));
    REQUIRE(p.allowed_intervals().size() == 1);
    CHECK_FALSE(p.allowed_intervals()[0].lo_turning);
    const AllowedInterval iv = p.allowed_intervals()[0];
    CHECK(p.action(iv) == doctest::Approx(std::sqrt(2 * M * E) * R * (iv.hi - iv.lo)).epsilon(1e-10));
  }

  TEST_CASE("Hamilton-Jacobi: sphere turning points from the centrifugal barrier") {
    const double M = 1.3, R = 0.9, E = 2.0, mu = 0.7;
    const RadialMomentum p = hj_radial_momentum(ManifoldSpec::sphere(R), {M, 0.5, 1.0, 1}, Potential::zero(), E, mu, 0);
    const double t = std::asin(mu / std::sqrt(2 * M * E * R * R));
    REQUIRE(p.turning_points().size() == 2);
    CHECK(p.turning_points()[0] == doctest::Approx(t).epsilon(1e-10));
    CHECK(p.turning_points()[1] == doctest::Approx(pi - t).epsilon(1e-10));
    REQUIRE(p.allowed_intervals().size() == 1);
    const AllowedInterval iv = p.allowed_intervals()[0];
    CHECK(iv.bounded());
    CHECK(p.reduced_action(iv, iv.hi) == doctest::Approx(p.action(iv)).epsilon(1e-10));
    CHECK(p.reduced_action(iv, iv.lo) == doctest::Approx(0.0));
    // Period of free motion on a great circle: 2 pi R sqrt(M / 2E) regardless of mu.
    CHECK(p.period(iv) == doctest::Approx(2 * pi * R * std::sqrt(M / (2 * E))).epsilon(1e-8));
  }

  TEST_CASE("Hamilton-Jacobi: no allowed region") {
    CHECK_THROWS_AS(hj_radial_momentum(ManifoldSpec::sphere(1.0), {}, Potential::zero(), 0.1, 3.0, 0), NoAllowedRegion);
  }

  TEST_CASE("turning points match trajectory extrema") {
    const ManifoldSpec spec = ManifoldSpec::torus(3.0, 1.0);
    const RotorParams rotor{1.0, 2.0, 1.0, 1};
    const State s0{{0.2, 0, 0}, {0.5, 3.0, 0.3}};
    const double E = hamiltonian(spec, rotor, Potential::zero(), s0);
    const RadialMomentum p = hj_radial_momentum(spec, rotor, Potential::zero(), E, s0.p[1], s0.p[2]);
    REQUIRE(p.allowed_intervals().size() == 1);
    const AllowedInterval iv = p.allowed_intervals()[0];
    REQUIRE(iv.bounded());
    const TrajectoryRecord r = integrate(spec, rotor, Potential::zero(), s0, 2e-4, 100000);
    // Parabolic refinement around each sampled extremum.
    double lo = 1e300, hi = -1e300;
    for (std::size_t i = 1; i + 1 < r.states.size(); ++i) {
      const double a = r.states[i - 1].q[0], b = r.states[i].q[0], c = r.states[i + 1].q[0];
      if ((b >= a && b >= c) || (b <= a && b <= c)) {
        const double den = a - 2 * b + c;
        const double x = den != 0.0 ? b - (c - a) * (c - a) / (8 * den) : b;
        lo = std::min(lo, x);
        hi = std::max(hi, x);
      }
    }
    CHECK(std::abs(lo - iv.lo) < 1e-6);
    CHECK(std::abs(hi - iv.hi) < 1e-6);
  }
}
