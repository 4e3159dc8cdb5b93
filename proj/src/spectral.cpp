#include "rotorlab/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <thread>

#include "rotorlab/errors.hpp"

namespace rotorlab {

namespace {

bool finite_positive(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

Grid Grid::cell_centered(double lo, double hi, std::size_t n) {
  if (n < 3 || !(hi > lo)) throw ConfigError("cell-centered grid needs n >= 3 and hi > lo");
  Grid g;
  g.n = n;
  g.layout = GridLayout::CellCentered;
  g.theta_min = lo;
  g.theta_max = hi;
  g.spacing = (hi - lo) / static_cast<double>(n);
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.nodes[i] = lo + (static_cast<double>(i) + 0.5) * g.spacing;
  return g;
}

Grid Grid::periodic(std::size_t n) {
  if (n < 3) throw ConfigError("periodic grid needs n >= 3");
  Grid g;
  g.n = n;
  g.layout = GridLayout::Periodic;
  g.theta_min = 0.0;
  g.theta_max = 2.0 * std::numbers::pi;
  g.spacing = g.theta_max / static_cast<double>(n);
  g.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) g.nodes[i] = static_cast<double>(i) * g.spacing;
  return g;
}

Grid make_grid(const ManifoldSpec& spec, std::size_t n, double theta_max) {
  const ThetaDomain d = spec.theta_domain();
  if (n == 0) n = d.topology == Topology::Periodic ? kDefaultPeriodicNodes : kDefaultCellCenteredNodes;
  if (n < kMinGridNodes) throw ConfigError("grid needs at least " + std::to_string(kMinGridNodes) + " nodes");
  switch (d.topology) {
    case Topology::SingularBoth:
      return Grid::cell_centered(d.lo, d.hi, n);
    case Topology::SingularLeft:
      if (!finite_positive(theta_max)) throw ConfigError("theta_max must be positive and finite");
      return Grid::cell_centered(d.lo, theta_max, n);
    case Topology::Periodic:
      return Grid::periodic(n);
  }
  return {};
}

Grid coarsen(const Grid& grid) {
  const std::size_t n = grid.n / 2;
  if (grid.layout == GridLayout::Periodic) return Grid::periodic(n);
  return Grid::cell_centered(grid.theta_min, grid.theta_max, n);
}

TridiagonalMatrix discretize(const RadialProblem& problem, const Grid& grid) {
  const bool periodic_domain = problem.domain.left == BoundaryKind::Periodic;
  if ((grid.layout == GridLayout::Periodic) != periodic_domain)
    throw IncompatibleLayout("grid layout does not match the boundary classification of the problem");
  if (grid.layout == GridLayout::CellCentered) {
    if (std::abs(grid.theta_min - problem.domain.lo) > 1e-12 || grid.theta_max > problem.domain.hi + 1e-12)
      throw IncompatibleLayout("cell-centered grid does not start at the singular endpoint");
    if (problem.domain.right == BoundaryKind::SingularRegularized &&
        std::abs(grid.theta_max - problem.domain.hi) > 1e-12)
      throw IncompatibleLayout("grid must span the whole interval between two singular endpoints");
  }

  const std::size_t n = grid.n;
  const double delta = grid.spacing;
  const double inv_d2 = 1.0 / (delta * delta);

  std::vector<double> w(n), q(n);
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = problem.weight(grid.nodes[i]);
    q[i] = problem.q(grid.nodes[i]);
    if (!finite_positive(w[i]) || !std::isfinite(q[i])) {
      std::ostringstream os;
      os << "non-finite or non-positive coefficient at theta = " << grid.nodes[i] << " (weight " << w[i] << ", q "
         << q[i] << ")";
      throw NonFiniteCoefficient(os.str());
    }
  }

  // face[i] sits between node i and node i+1; face_left closes node 0.
  std::vector<double> face(n, 0.0);
  double face_left = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) face[i] = problem.weight(grid.nodes[i] + 0.5 * delta);
  if (grid.layout == GridLayout::Periodic) {
    face[n - 1] = problem.weight(grid.nodes[n - 1] + 0.5 * delta);
    face_left = face[n - 1];
  } else {
    // Singular endpoints carry zero flux; a truncated end is Dirichlet at the face.
    face_left = 0.0;
    face[n - 1] = problem.domain.right == BoundaryKind::TruncatedDirichlet ? problem.weight(grid.theta_max) : 0.0;
  }

  TridiagonalMatrix a;
  a.diag.resize(n);
  a.off.resize(n - 1);
  a.periodic = grid.layout == GridLayout::Periodic;
  for (std::size_t i = 0; i < n; ++i) {
    const double left = i == 0 ? face_left : face[i - 1];
    double right = face[i];
    if (grid.layout == GridLayout::CellCentered && i == n - 1) right *= 2.0;  // half-cell distance to the face
    a.diag[i] = (left + right) * inv_d2 / w[i] + q[i];
  }
  for (std::size_t i = 0; i + 1 < n; ++i) a.off[i] = -face[i] * inv_d2 / std::sqrt(w[i] * w[i + 1]);
  if (a.periodic) a.corner = -face[n - 1] * inv_d2 / std::sqrt(w[n - 1] * w[0]);
  return a;
}

std::string_view to_string(NormConvention c) {
  return c == NormConvention::UnitVolume ? "unit_volume" : "geometric_volume";
}

NormConvention norm_convention_from_string(std::string_view name) {
  if (name == "unit_volume") return NormConvention::UnitVolume;
  if (name == "geometric_volume") return NormConvention::GeometricVolume;
  throw ConfigError("unknown normalization convention '" + std::string(name) + "'");
}

SpectrumResult solve_spectrum(const ManifoldSpec& spec, const RotorParams& rotor, int m, int s, const Potential& V,
                              const Grid& grid, const SolveOptions& options) {
  const RadialProblem problem = radial_problem(spec, rotor, m, s, V);
  const TridiagonalMatrix a = discretize(problem, grid);
  const std::size_t k = options.k;
  if (k == 0 || k > grid.n) throw ConfigError("eigenvalue count k must be in [1, n]");
  const EigenPairs pairs = eigen_symmetric(a, k);

  SpectrumResult r;
  r.m = m;
  r.s = s;
  r.energy_scale = problem.energy_scale;
  r.nodes = grid.nodes;
  r.norm_convention = options.norm;
  r.eigenvalues_dimensionless = pairs.values;
  for (double eps : pairs.values) r.eigenvalues_physical.push_back(eps / problem.energy_scale);

  const std::size_t n = grid.n;
  const double delta = grid.spacing;
  std::vector<double> w(n);
  double weight_integral = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = problem.weight(grid.nodes[i]);
    weight_integral += w[i] * delta;
  }
  r.eigenfunctions = Matrix(n, k);
  for (std::size_t j = 0; j < k; ++j)
    for (std::size_t i = 0; i < n; ++i) r.eigenfunctions(i, j) = pairs.vectors(i, j) / std::sqrt(w[i] * delta);

  // sqrt|G| = sqrt(I/M) R h, and the two cyclic angles contribute (2 pi)^2.
  const double fibre = 4.0 * std::numbers::pi * std::numbers::pi * std::sqrt(rotor.inertia_ratio()) * spec.R();
  if (options.norm == NormConvention::GeometricVolume)
    r.wavefunction_scale = 1.0 / std::sqrt(fibre);
  else
    r.wavefunction_scale = std::sqrt(weight_integral);

  if (options.richardson && grid.n / 2 >= 3 && k <= grid.n / 2) {
    const Grid coarse = coarsen(grid);
    const EigenPairs cp = eigen_symmetric(discretize(problem, coarse), k);
    r.coarse_eigenvalues = cp.values;
    for (std::size_t j = 0; j < k; ++j) r.convergence.push_back(std::abs(pairs.values[j] - cp.values[j]) / 3.0);
  }

  if (spec.kind() == ManifoldKind::Pseudosphere) {
    r.scattering = V.kind() == Potential::Kind::Zero;
    if (r.scattering) r.warnings.emplace_back("free pseudosphere: continuous spectrum, eigenvalues are box states");
    const double outer = grid.theta_min + 0.95 * (grid.theta_max - grid.theta_min);
    double tail = 0.0, total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double mass = r.eigenfunctions(i, 0) * r.eigenfunctions(i, 0) * w[i] * delta;
      total += mass;
      if (grid.nodes[i] >= outer) tail += mass;
    }
    if (tail > 1e-6 * total) {
      r.truncation_warning = true;
      std::ostringstream os;
      os << "lowest state has " << tail / total << " of its norm in the outer 5% of [0, " << grid.theta_max << "]";
      r.warnings.push_back(os.str());
    }
  }
  return r;
}

std::size_t scan_threads_from_environment() {
  if (const char* env = std::getenv("ROTORLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  return 1;
}

ScanTable spectrum_scan(const ManifoldSpec& spec, const RotorParams& rotor, IntRange m_range, IntRange s_range,
                        const Potential& V, const Grid& grid, const SolveOptions& options, std::size_t threads) {
  std::vector<std::pair<int, int>> cells;
  if (!m_range.empty() && !s_range.empty())
    for (int m = m_range.lo; m <= m_range.hi; ++m)
      for (int s = s_range.lo; s <= s_range.hi; ++s) cells.emplace_back(m, s);

  std::vector<ScanCell> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      try {
        results[i].result = solve_spectrum(spec, rotor, cells[i].first, cells[i].second, V, grid, options);
      } catch (const std::exception& e) {
        results[i].error = e.what();
      }
    }
  };

  if (threads == 0) threads = scan_threads_from_environment();
  threads = std::max<std::size_t>(1, std::min(threads, cells.size()));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  ScanTable table;
  for (std::size_t i = 0; i < cells.size(); ++i) table.emplace(cells[i], std::move(results[i]));
  return table;
}

}  // namespace rotorlab
