#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rotorlab/cli/commands.hpp"
#include "rotorlab/errors.hpp"

namespace rotorlab::cli {

namespace {

struct Shorthand {
  const char* flag;
  const char* path;
  const char* help;
  bool text;  // keep the value as a string instead of reading it as JSON
};

const std::vector<Shorthand>& scalar_shorthands() {
  static const std::vector<Shorthand> table{
      {"--manifold", "manifold.kind", "sphere | pseudosphere | torus", true},
      {"--R", "manifold.R", "radius / pseudoradius / torus tube radius", false},
      {"--L", "manifold.L", "torus central radius", false},
      {"--M", "rotor.M", "mass", false},
      {"--I", "rotor.I", "moment of inertia", false},
      {"--hbar", "rotor.hbar", "Planck constant", false},
      {"--sig", "rotor.sig", "sign of the rotational term (+1 or -1)", false},
      {"--potential", "potential.kind", "zero | cosine_well | harmonic | tabulated", true},
      {"--V0", "potential.V0", "potential strength", false},
      {"--n", "grid.n", "grid nodes (0: default)", false},
      {"--theta-max", "grid.theta_max", "pseudosphere truncation / HJ search bound", false},
      {"--m", "quantum.m", "orbital quantum number", false},
      {"--s", "quantum.s", "spin quantum number", false},
      {"--k", "solver.k", "number of eigenvalues", false},
      {"--norm", "solver.norm", "unit_volume | geometric_volume", true},
      {"--richardson", "solver.richardson", "half-resolution error estimate (true/false)", false},
      {"--format", "output.format", "csv | json", true},
      {"--output", "output.path", "output file (default: standard output)", true},
      {"--dt", "geodesic.dt", "time step", false},
      {"--steps", "geodesic.steps", "number of steps", false},
      {"--record-every", "geodesic.record_every", "keep every n-th state", false},
      {"--E", "hj.E", "energy", false},
      {"--mu", "hj.mu", "p_phi", false},
      {"--sigma", "hj.sigma", "p_psi", false},
      {"--samples", "hj.samples", "turning-point search samples", false},
      {"--points", "hj.points", "rows of the p_theta table", false},
      {"--perturb-coefficient", "check.perturb_coefficient", "test hook: perturb one Laplacian coefficient", true},
  };
  return table;
}

struct VectorShorthand {
  const char* flag;
  const char* path;
  const char* help;
  int count;  // -1: any number
  bool integers;
};

const std::vector<VectorShorthand>& vector_shorthands() {
  static const std::vector<VectorShorthand> table{
      {"--m-range", "quantum.m_range", "inclusive m range LO HI", 2, true},
      {"--s-range", "quantum.s_range", "inclusive s range LO HI", 2, true},
      {"--q0", "geodesic.q0", "initial theta phi psi", 3, false},
      {"--p0", "geodesic.p0", "initial p_theta p_phi p_psi", 3, false},
      {"--criteria", "check.criteria", "check ids to run", -1, true},
  };
  return table;
}

struct Parsed {
  std::string config_path;
  std::vector<std::string> assignments;
  std::map<std::string, std::string> scalars;
  std::map<std::string, std::vector<std::string>> vectors;
  bool json = false;
};

void add_common_options(CLI::App& sub, Parsed& p) {
  sub.add_option("--config", p.config_path, "JSON config file");
  sub.add_option("--set", p.assignments, "override any key: section.key=value (value read as JSON)");
  for (const Shorthand& s : scalar_shorthands()) sub.add_option(s.flag, p.scalars[s.path], s.help);
  for (const VectorShorthand& v : vector_shorthands()) {
    auto* opt = sub.add_option(v.flag, p.vectors[v.path], v.help);
    if (v.count > 0) opt->expected(v.count);
  }
  sub.add_flag("--json", p.json, "JSON output (check: machine-readable report)");
}

Json scalar_value(const std::string& text, bool as_text) {
  if (as_text) return Json(text);
  try {
    return Json::parse(text);
  } catch (const Json::parse_error&) {
    return Json(text);
  }
}

RunConfig resolve(const CLI::App& sub, const Parsed& p) {
  Json doc = p.config_path.empty() ? Json::object() : load_config_file(p.config_path);
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  for (const Shorthand& s : scalar_shorthands())
    if (sub.count(s.flag)) apply_override(doc, s.path, scalar_value(p.scalars.at(s.path), s.text));
  for (const VectorShorthand& v : vector_shorthands()) {
    if (!sub.count(v.flag)) continue;
    Json arr = Json::array();
    for (const std::string& item : p.vectors.at(v.path)) {
      const Json x = scalar_value(item, false);
      if (!x.is_number() || (v.integers && !x.is_number_integer()))
        throw ConfigError(std::string(v.flag) + ": '" + item + "' is not " + (v.integers ? "an integer" : "a number"));
      arr.push_back(x);
    }
    apply_override(doc, v.path, std::move(arr));
  }
  for (const std::string& a : p.assignments) apply_assignment(doc, a);
  if (p.json && sub.get_name() != "check") apply_override(doc, "output.format", "json");

  RunConfig config = parse_config(doc);
  validate(config);
  return config;
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Rigid rotor on the sphere, pseudosphere and torus: spectra, geodesics, Hamilton-Jacobi, checks",
               "rotorlab"};
  app.require_subcommand(1);
  Parsed parsed;
  const std::vector<std::pair<const char*, const char*>> commands{
      {"spectrum", "radial spectrum for one (m, s)"},
      {"scan", "spectra over ranges of (m, s)"},
      {"geodesic", "integrate Hamilton's equations"},
      {"hj", "Hamilton-Jacobi radial momentum, turning points and actions"},
      {"check", "run the invariant suite"},
  };
  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    add_common_options(*sub, parsed);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kConfigError;
  }

  std::string name;
  for (const auto& [n, sub] : subs)
    if (sub->parsed()) name = n;
  const CLI::App& sub = *subs.at(name);

  RunConfig config;
  try {
    config = resolve(sub, parsed);
  } catch (const Error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    if (name == "spectrum") return cmd_spectrum(config, out, err);
    if (name == "scan") return cmd_scan(config, out, err);
    if (name == "geodesic") return cmd_geodesic(config, out, err);
    if (name == "hj") return cmd_hj(config, out, err);
    return cmd_check(config, parsed.json, out, err);
  } catch (const std::exception& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
}

}  // namespace rotorlab::cli
