#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>

#include "doctest.h"
#include "rotorlab/errors.hpp"
#include "rotorlab/spectral.hpp"
#include "support.hpp"

using namespace rotorlab;
using std::numbers::pi;

namespace {

Eigen::MatrixXd dense(const TridiagonalMatrix& t) {
  const Matrix m = t.to_dense();
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

SolveOptions quick(std::size_t k = 6, bool richardson = false) {
  SolveOptions o;
  o.k = k;
  o.richardson = richardson;
  return o;
}

}  // namespace

TEST_SUITE("spectral") {
  TEST_CASE("grids") {
    const Grid g = make_grid(ManifoldSpec::sphere(1.0), 100);
    CHECK(g.n == 100);
    CHECK(g.nodes.front() > 0.0);
    CHECK(g.nodes.back() < pi);
    CHECK(g.spacing == doctest::Approx(pi / 100));
    CHECK(make_grid(ManifoldSpec::sphere(1.0)).n == kDefaultCellCenteredNodes);
    CHECK(make_grid(ManifoldSpec::torus(3.0, 1.0)).n == kDefaultPeriodicNodes);
    CHECK(make_grid(ManifoldSpec::pseudosphere(1.0), 64, 5.0).theta_max == 5.0);
    CHECK_THROWS_AS(make_grid(ManifoldSpec::sphere(1.0), 15), ConfigError);
    const Grid c = coarsen(g);
    CHECK(c.n == 50);
    CHECK(c.theta_max == g.theta_max);
  }

  TEST_CASE("layout must match the boundary classification") {
    const RadialProblem p = radial_problem(ManifoldSpec::sphere(1.0), {}, 0, 0, Potential::zero());
    CHECK_THROWS_AS(discretize(p, Grid::periodic(32)), IncompatibleLayout);
    CHECK_THROWS_AS(discretize(p, Grid::cell_centered(0.1, pi, 32)), IncompatibleLayout);
    const RadialProblem t = radial_problem(ManifoldSpec::torus(3.0, 1.0), {}, 0, 0, Potential::zero());
    CHECK_THROWS_AS(discretize(t, Grid::cell_centered(0.0, pi, 32)), IncompatibleLayout);
  }

  TEST_CASE("three-node periodic circulant") {
    RadialProblem p;
    p.weight = [](double) { return 1.0; };
    p.drift = [](double) { return 0.0; };
    p.q = [](double) { return 0.0; };
    p.domain = {0.0, 2 * pi, BoundaryKind::Periodic, BoundaryKind::Periodic};
    const Grid g = Grid::periodic(3);
    const TridiagonalMatrix a = discretize(p, g);
    const EigenPairs e = eigen_symmetric(a, 3);
    const double d2 = g.spacing * g.spacing;
    CHECK(std::abs(e.values[0]) < 1e-14);
    CHECK(e.values[1] == doctest::Approx(3 / d2).epsilon(1e-13));
    CHECK(e.values[2] == doctest::Approx(3 / d2).epsilon(1e-13));
  }

  TEST_CASE("discretized matrices are exactly symmetric") {
    for (const ManifoldSpec& spec :
         {ManifoldSpec::sphere(1.0), ManifoldSpec::pseudosphere(1.0), ManifoldSpec::torus(3.0, 1.0)}) {
      const RadialProblem p = radial_problem(spec, {1.0, 0.6, 1.0, 1}, 1, -2, Potential::cosine_well(0.5));
      const Eigen::MatrixXd a = dense(discretize(p, make_grid(spec, 64, 6.0)));
      CHECK((a - a.transpose()).cwiseAbs().maxCoeff() == 0.0);
    }
  }

  TEST_CASE("the constant function is in the kernel for m = s = 0") {
    // In symmetrized variables the constant f is g = sqrt(h).
    for (const ManifoldSpec& spec : {ManifoldSpec::sphere(1.3), ManifoldSpec::torus(3.0, 1.0)}) {
      const RadialProblem p = radial_problem(spec, {}, 0, 0, Potential::zero());
      const Grid grid = make_grid(spec, 400);
      const TridiagonalMatrix a = discretize(p, grid);
      std::vector<double> g(grid.n);
      double gmax = 0.0;
      for (std::size_t i = 0; i < grid.n; ++i) gmax = std::max(gmax, g[i] = std::sqrt(p.weight(grid.nodes[i])));
      const std::vector<double> r = a.multiply(g);
      for (double x : r) CHECK(std::abs(x) <= 1e-12 * a.norm() * gmax);
    }
  }

  TEST_CASE("Legendre spectrum on the sphere in resonance") {
    const double R = 1.3, M = 0.7;
    const ManifoldSpec spec = ManifoldSpec::sphere(R);
    const SpectrumResult r =
        solve_spectrum(spec, {M, M * R * R, 1.0, 1}, 0, 0, Potential::zero(), make_grid(spec, 2000), quick());
    for (int j = 0; j < 6; ++j) {
      const double exact = j * (j + 1);
      CHECK(std::abs(r.eigenvalues_dimensionless[j] - exact) <= 1e-4 * std::max(1.0, exact));
      CHECK(r.eigenvalues_physical[j] == doctest::Approx(r.eigenvalues_dimensionless[j] / r.energy_scale));
    }
    CHECK(r.energy_scale == doctest::Approx(2 * M * R * R));
  }

  TEST_CASE("symmetric top spectrum and a dense oracle") {
    const double I = 0.45;
    const ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    for (auto [m, s] : {std::pair{1, 1}, std::pair{2, -1}, std::pair{0, 2}}) {
      const int j0 = std::max(std::abs(m), std::abs(s));
      const Grid grid = make_grid(spec, 1000);
      const SpectrumResult r = solve_spectrum(spec, {1.0, I, 1.0, 1}, m, s, Potential::zero(), grid, quick(4));
      const Eigen::MatrixXd a = dense(discretize(radial_problem(spec, {1.0, I, 1.0, 1}, m, s, Potential::zero()), grid));
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a, Eigen::EigenvaluesOnly);
      for (int j = 0; j < 4; ++j) {
        const int J = j0 + j;
        const double exact = J * (J + 1) - s * s + s * s / I;
        CHECK(std::abs(r.eigenvalues_dimensionless[j] - exact) <= 1e-4 * exact);
        CHECK(std::abs(r.eigenvalues_dimensionless[j] - es.eigenvalues()(j)) <= 1e-10 * es.eigenvalues().maxCoeff());
      }
    }
  }

  TEST_CASE("Richardson estimate is filled from the half grid") {
    const ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    const SpectrumResult r = solve_spectrum(spec, {}, 0, 0, Potential::zero(), make_grid(spec, 800), quick(3, true));
    REQUIRE(r.convergence.size() == 3);
    REQUIRE(r.coarse_eigenvalues.size() == 3);
    for (int j = 0; j < 3; ++j)
      CHECK(r.convergence[j] ==
            doctest::Approx(std::abs(r.eigenvalues_dimensionless[j] - r.coarse_eigenvalues[j]) / 3));
  }

  TEST_CASE("torus ground state is the constant mode") {
    const ManifoldSpec spec = ManifoldSpec::torus(3.0, 1.0);
    const SpectrumResult r = solve_spectrum(spec, {1.0, 2.0, 1.0, 1}, 0, 0, Potential::zero(), make_grid(spec, 256), quick(1));
    CHECK(std::abs(r.eigenvalues_dimensionless[0]) < 1e-8);
    const double f0 = r.eigenfunctions(0, 0);
    for (std::size_t i = 0; i < r.nodes.size(); ++i) CHECK(r.eigenfunctions(i, 0) == doctest::Approx(f0).epsilon(1e-8));
    // sum f^2 h delta = 1 with h = L + R cos theta integrates to 2 pi L.
    CHECK(f0 * f0 * 2 * pi * 3.0 == doctest::Approx(1.0).epsilon(1e-10));
  }

  TEST_CASE("eigenfunctions are orthonormal in the weight h") {
    const ManifoldSpec spec = ManifoldSpec::pseudosphere(1.0);
    const Grid grid = make_grid(spec, 600, 8.0);
    const SpectrumResult r = solve_spectrum(spec, {}, 1, 0, Potential::cosine_well(1.0), grid, quick(5));
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i)
          sum += r.eigenfunctions(i, a) * r.eigenfunctions(i, b) * profile(spec, grid.nodes[i]).h * grid.spacing;
        CHECK(std::abs(sum - (a == b ? 1.0 : 0.0)) < 1e-8);
      }
  }

  TEST_CASE("normalization conventions differ by a constant only") {
    for (const ManifoldSpec& spec : {ManifoldSpec::sphere(1.4), ManifoldSpec::torus(3.0, 1.2)}) {
      const RotorParams rotor{1.3, 0.8, 1.0, 1};
      const Grid grid = make_grid(spec, 128);
      double ratio0 = 0.0;
      for (auto [m, s] : {std::pair{0, 0}, std::pair{1, 2}}) {
        SolveOptions u = quick(3), g = quick(3);
        u.norm = NormConvention::UnitVolume;
        g.norm = NormConvention::GeometricVolume;
        const SpectrumResult a = solve_spectrum(spec, rotor, m, s, Potential::zero(), grid, u);
        const SpectrumResult b = solve_spectrum(spec, rotor, m, s, Potential::zero(), grid, g);
        CHECK(a.eigenvalues_dimensionless == b.eigenvalues_dimensionless);
        const double ratio = a.wavefunction_scale / b.wavefunction_scale;
        CHECK(ratio > 0.0);
        if (ratio0 == 0.0) ratio0 = ratio;
        CHECK(ratio == doctest::Approx(ratio0).epsilon(1e-14));
      }
    }
  }

  TEST_CASE("negative signature keeps a real spectrum") {
    const ManifoldSpec spec = ManifoldSpec::pseudosphere(1.0);
    const SpectrumResult r =
        solve_spectrum(spec, {1.0, 1.0, 1.0, -1}, 1, 1, Potential::cosine_well(2.0), make_grid(spec, 400, 6.0), quick(4));
    CHECK(r.eigenvalues_dimensionless.size() == 4);
    CHECK(std::is_sorted(r.eigenvalues_dimensionless.begin(), r.eigenvalues_dimensionless.end()));
  }

  TEST_CASE("scattering flag and truncation warning on the pseudosphere") {
    const ManifoldSpec spec = ManifoldSpec::pseudosphere(1.0);
    const SpectrumResult free = solve_spectrum(spec, {}, 0, 0, Potential::zero(), make_grid(spec, 400, 6.0), quick(2));
    CHECK(free.scattering);
    CHECK(free.truncation_warning);
    CHECK_FALSE(free.warnings.empty());
    const SpectrumResult bound =
        solve_spectrum(spec, {}, 0, 0, Potential::cosine_well(1.0), make_grid(spec, 800, 12.0), quick(2));
    CHECK_FALSE(bound.scattering);
    CHECK_FALSE(bound.truncation_warning);
    const SpectrumResult sphere =
        solve_spectrum(ManifoldSpec::sphere(1.0), {}, 0, 0, Potential::zero(), make_grid(ManifoldSpec::sphere(1.0), 64), quick(2));
    CHECK_FALSE(sphere.scattering);
    CHECK_FALSE(sphere.truncation_warning);
  }

  TEST_CASE("pole regularity") {
    const ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    const Grid grid = make_grid(spec, 1000);
    const SpectrumResult r = solve_spectrum(spec, {1.0, 1.0, 1.0, 1}, 2, 0, Potential::zero(), grid, quick(1));
    double fmax = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) fmax = std::max(fmax, std::abs(r.eigenfunctions(i, 0)));
    const double t0 = grid.nodes[0];
    CHECK(std::abs(r.eigenfunctions(0, 0)) / fmax <= t0 * t0);
  }

  TEST_CASE("scan: degeneracy structure of the spherical top") {
    const ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    const ScanTable t = spectrum_scan(spec, {1.0, 1.0, 1.0, 1}, {-1, 1}, {-1, 1}, Potential::zero(), make_grid(spec, 1000),
                                      quick(4), 2);
    CHECK(t.size() == 9);
    for (const auto& [key, cell] : t) {
      REQUIRE(cell.result);
      const int j0 = std::max(std::abs(key.first), std::abs(key.second));
      for (int j = 0; j < 4; ++j) {
        const int J = j0 + j;
        CHECK(std::abs(cell.result->eigenvalues_dimensionless[j] - J * (J + 1)) <= 1e-4 * std::max(1, J * (J + 1)));
      }
    }
  }

  TEST_CASE("scan: symmetry under (m, s) -> (-m, -s)") {
    const ManifoldSpec spec = ManifoldSpec::torus(3.0, 1.0);
    const ScanTable t = spectrum_scan(spec, {1.0, 0.7, 1.0, 1}, {-2, 2}, {-1, 1}, Potential::cosine_well(0.3),
                                      make_grid(spec, 128), quick(3), 3);
    for (const auto& [key, cell] : t) {
      const auto& mirror = t.at({-key.first, -key.second});
      REQUIRE(cell.result);
      REQUIRE(mirror.result);
      for (int j = 0; j < 3; ++j)
        CHECK(cell.result->eigenvalues_dimensionless[j] ==
              doctest::Approx(mirror.result->eigenvalues_dimensionless[j]).epsilon(1e-12));
    }
  }

  TEST_CASE("scan: empty range, per-cell errors and determinism across workers") {
    const ManifoldSpec spec = ManifoldSpec::sphere(1.0);
    const Grid grid = make_grid(spec, 200);
    CHECK(spectrum_scan(spec, {}, {1, 0}, {0, 2}, Potential::zero(), grid).empty());
    CHECK(spectrum_scan(spec, {}, {0, 2}, {3, 2}, Potential::zero(), grid).empty());

    const ScanTable one = spectrum_scan(spec, {1.0, 0.6, 1.0, 1}, {-2, 2}, {-2, 2}, Potential::zero(), grid, quick(3), 1);
    const ScanTable four = spectrum_scan(spec, {1.0, 0.6, 1.0, 1}, {-2, 2}, {-2, 2}, Potential::zero(), grid, quick(3), 4);
    REQUIRE(one.size() == four.size());
    for (const auto& [key, cell] : one) CHECK(cell.result->eigenvalues_dimensionless == four.at(key).result->eigenvalues_dimensionless);

    SolveOptions too_many = quick(500);
    const ScanTable bad = spectrum_scan(spec, {}, {0, 1}, {0, 0}, Potential::zero(), grid, too_many, 2);
    CHECK(bad.size() == 2);
    for (const auto& [key, cell] : bad) {
      CHECK_FALSE(cell.result);
      CHECK_FALSE(cell.error.empty());
    }
  }

  TEST_CASE("single scan cell matches a direct solve") {
    const ManifoldSpec spec = ManifoldSpec::pseudosphere(1.0);
    const Grid grid = make_grid(spec, 300, 8.0);
    const RotorParams rotor{1.0, 0.5, 1.0, 1};
    const SpectrumResult direct = solve_spectrum(spec, rotor, 1, -1, Potential::cosine_well(2.0), grid, quick(3, true));
    const ScanTable t = spectrum_scan(spec, rotor, {1, 1}, {-1, -1}, Potential::cosine_well(2.0), grid, quick(3, true));
    CHECK(t.at({1, -1}).result->eigenvalues_dimensionless == direct.eigenvalues_dimensionless);
    CHECK(t.at({1, -1}).result->convergence == direct.convergence);
  }

  TEST_CASE("thread count from the environment") {
    ::setenv("ROTORLAB_THREADS", "3", 1);
    CHECK(scan_threads_from_environment() == 3);
    ::setenv("ROTORLAB_THREADS", "0", 1);
    CHECK(scan_threads_from_environment() == 1);
    ::unsetenv("ROTORLAB_THREADS");
    CHECK(scan_threads_from_environment() == 1);
  }
}
