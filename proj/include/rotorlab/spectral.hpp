#pragma once

// Finite-volume discretization of the radial problem and its spectrum.
//
// The radial operator -(h f')'/h + q f is discretized conservatively with
// face weights h(theta_{i+1/2}); the similarity transform g = sqrt(h) f makes
// the matrix exactly symmetric. Singular poles close with zero flux (h = 0 at
// the face), a truncated pseudosphere closes with f = 0 at theta_max, and the
// torus wraps around.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rotorlab/eigen.hpp"
#include "rotorlab/geometry.hpp"
#include "rotorlab/operators.hpp"
#include "rotorlab/potential.hpp"

namespace rotorlab {

enum class GridLayout {
  /// Nodes at lo + (i + 1/2) delta, never on an endpoint.
  CellCentered,
  /// Nodes at i * delta over [0, 2 pi).
  Periodic,
};

inline constexpr std::size_t kMinGridNodes = 16;
inline constexpr std::size_t kDefaultCellCenteredNodes = 2000;
inline constexpr std::size_t kDefaultPeriodicNodes = 1024;
inline constexpr double kDefaultThetaMax = 12.0;

struct Grid {
  std::size_t n = 0;
  std::vector<double> nodes;
  double spacing = 0.0;
  GridLayout layout = GridLayout::CellCentered;
  double theta_min = 0.0;
  /// Upper end of the discretized interval; the truncation bound on the pseudosphere.
  double theta_max = 0.0;

  static Grid cell_centered(double lo, double hi, std::size_t n);
  static Grid periodic(std::size_t n);
};

/// Grid matching the topology of `spec`. `n == 0` selects the default size;
/// `theta_max` is only used on the pseudosphere. Requires n >= kMinGridNodes.
Grid make_grid(const ManifoldSpec& spec, std::size_t n = 0, double theta_max = kDefaultThetaMax);

/// Same layout and interval with n/2 nodes.
Grid coarsen(const Grid& grid);

TridiagonalMatrix discretize(const RadialProblem& problem, const Grid& grid);

enum class NormConvention {
  /// Configuration-space measure rescaled to total volume one.
  UnitVolume,
  /// Riemannian measure sqrt|G| dtheta dphi dpsi.
  GeometricVolume,
};

std::string_view to_string(NormConvention c);
NormConvention norm_convention_from_string(std::string_view name);

struct SpectrumResult {
  int m = 0;
  int s = 0;
  std::vector<double> eigenvalues_dimensionless;
  std::vector<double> eigenvalues_physical;
  std::vector<double> nodes;
  /// n x k; column j is f_j on the nodes with  sum_i f_j(i)^2 h(i) delta = 1.
  Matrix eigenfunctions;
  NormConvention norm_convention = NormConvention::UnitVolume;
  /// Psi = wavefunction_scale * f(theta) e^{i m phi} e^{i s psi} has unit norm in
  /// the measure selected by norm_convention.
  double wavefunction_scale = 1.0;
  /// Richardson error estimate |eps_n - eps_{n/2}| / 3; empty when not computed.
  std::vector<double> convergence;
  std::vector<double> coarse_eigenvalues;
  double energy_scale = 1.0;
  /// Lowest state leaks into the outer 5% of a truncated domain.
  bool truncation_warning = false;
  /// Free motion on the pseudosphere: box states of a continuous spectrum.
  bool scattering = false;
  std::vector<std::string> warnings;
};

struct SolveOptions {
  std::size_t k = 6;
  NormConvention norm = NormConvention::UnitVolume;
  /// Also solve on the n/2 grid to fill `convergence`.
  bool richardson = true;
};

SpectrumResult solve_spectrum(const ManifoldSpec& spec, const RotorParams& rotor, int m, int s, const Potential& V,
                              const Grid& grid, const SolveOptions& options = {});

struct IntRange {
  int lo = 0;
  int hi = -1;  // inclusive; lo > hi means empty
  bool empty() const { return lo > hi; }
};

struct ScanCell {
  std::optional<SpectrumResult> result;
  std::string error;
};

using ScanTable = std::map<std::pair<int, int>, ScanCell>;

/// Independent solves for every (m, s); failures are recorded per cell. Cells
/// run on up to `threads` workers (0: ROTORLAB_THREADS, else 1).
ScanTable spectrum_scan(const ManifoldSpec& spec, const RotorParams& rotor, IntRange m_range, IntRange s_range,
                        const Potential& V, const Grid& grid, const SolveOptions& options = {},
                        std::size_t threads = 0);

/// Worker count from ROTORLAB_THREADS (at least 1).
std::size_t scan_threads_from_environment();

}  // namespace rotorlab
