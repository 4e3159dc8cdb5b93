#pragma once

// Run configuration for the command-line front end: a single JSON document,
// validated strictly (unknown keys are errors), with command-line overrides
// applied as path assignments before validation.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "rotorlab/classical.hpp"
#include "rotorlab/geometry.hpp"
#include "rotorlab/potential.hpp"
#include "rotorlab/spectral.hpp"

namespace rotorlab::cli {

using Json = nlohmann::ordered_json;

struct ManifoldConfig {
  std::string kind = "sphere";
  double R = 1.0;
  double L = 3.0;  // torus only
};

struct PotentialConfig {
  std::string kind = "zero";
  double V0 = 0.0;
  std::vector<double> theta;
  std::vector<double> values;
};

struct GridConfig {
  /// 0 selects the layout default.
  std::size_t n = 0;
  double theta_max = kDefaultThetaMax;
};

struct QuantumConfig {
  int m = 0;
  int s = 0;
  /// Inclusive ranges for `scan`.
  std::pair<int, int> m_range{0, 0};
  std::pair<int, int> s_range{0, 0};
};

struct SolverConfig {
  std::size_t k = 6;
  std::string norm = "unit_volume";
  bool richardson = true;
};

struct OutputConfig {
  std::string format = "csv";
  /// Empty: standard output.
  std::string path;
};

struct GeodesicConfig {
  Vec3 q0{1.5707963267948966, 0.0, 0.0};
  Vec3 p0{0.0, 1.0, 0.0};
  double dt = 1e-3;
  std::size_t steps = 1000;
  std::size_t record_every = 1;
};

struct HjConfig {
  double E = 1.0;
  double mu = 0.0;
  double sigma = 0.0;
  std::size_t samples = 4096;
  /// Rows of the sampled p_theta table.
  std::size_t points = 201;
};

struct CheckConfig {
  /// Empty: all criteria.
  std::vector<int> criteria;
  std::string perturb_coefficient;
};

struct RunConfig {
  ManifoldConfig manifold;
  RotorParams rotor;
  PotentialConfig potential;
  GridConfig grid;
  QuantumConfig quantum;
  SolverConfig solver;
  OutputConfig output;
  GeodesicConfig geodesic;
  HjConfig hj;
  CheckConfig check;

  ManifoldSpec manifold_spec() const;
  Potential make_potential() const;
  /// Grid with the default size resolved.
  Grid make_grid() const;
  NormConvention norm() const;
};

/// Strict parse; throws ConfigError naming the offending key.
RunConfig parse_config(const Json& doc);
/// Full document with every default filled in.
Json to_json(const RunConfig& config);

/// Reads a JSON file; throws ConfigError on I/O or syntax errors.
Json load_config_file(const std::string& path);

/// Sets `doc[a][b]... = value` for a dotted path "a.b...", creating objects.
void apply_override(Json& doc, const std::string& dotted_path, Json value);
/// Parses "key.path=value"; value is read as JSON, falling back to a string.
void apply_assignment(Json& doc, const std::string& assignment);

/// Checks that every parameter is admissible and fills resolved defaults
/// (grid size); throws ConfigError.
void validate(RunConfig& config);

}  // namespace rotorlab::cli
