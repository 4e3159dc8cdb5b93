#include "rotorlab/cli/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>

#include "rotorlab/checks/checks.hpp"
#include "rotorlab/errors.hpp"

namespace rotorlab::cli {

namespace {

// Pulls typed fields out of one JSON object and rejects anything left over.
class Reader {
 public:
  Reader(const Json& doc, std::string path) : doc_(doc), path_(std::move(path)) {
    if (!doc_.is_object()) throw ConfigError(where() + "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return doc_.contains(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_number()) throw ConfigError(where(key) + "expected a number");
    return v.get<double>();
  }

  long long integer(const std::string& key, long long fallback) {
    if (!has(key)) return fallback;
    return as_integer(doc_.at(key), where(key));
  }

  std::size_t count(const std::string& key, std::size_t fallback) {
    const long long v = integer(key, static_cast<long long>(fallback));
    if (v < 0) throw ConfigError(where(key) + "must not be negative");
    return static_cast<std::size_t>(v);
  }

  std::string string(const std::string& key, const std::string& fallback) {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_string()) throw ConfigError(where(key) + "expected a string");
    return v.get<std::string>();
  }

  bool boolean(const std::string& key, bool fallback) {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_boolean()) throw ConfigError(where(key) + "expected true or false");
    return v.get<bool>();
  }

  std::vector<double> numbers(const std::string& key, std::vector<double> fallback, std::size_t exact = 0) {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + "expected an array of numbers");
    if (exact && v.size() != exact) throw ConfigError(where(key) + "expected " + std::to_string(exact) + " entries");
    std::vector<double> out;
    for (const Json& x : v) {
      if (!x.is_number()) throw ConfigError(where(key) + "expected an array of numbers");
      out.push_back(x.get<double>());
    }
    return out;
  }

  std::vector<int> integers(const std::string& key, std::vector<int> fallback, std::size_t exact = 0) {
    if (!has(key)) return fallback;
    const Json& v = doc_.at(key);
    if (!v.is_array()) throw ConfigError(where(key) + "expected an array of integers");
    if (exact && v.size() != exact) throw ConfigError(where(key) + "expected " + std::to_string(exact) + " entries");
    std::vector<int> out;
    for (const Json& x : v) out.push_back(static_cast<int>(as_integer(x, where(key))));
    return out;
  }

  Reader child(const std::string& key) {
    static const Json empty = Json::object();
    return Reader(has(key) ? doc_.at(key) : empty, path_.empty() ? key : path_ + "." + key);
  }

  void finish() const {
    for (auto it = doc_.begin(); it != doc_.end(); ++it)
      if (!seen_.count(it.key())) throw ConfigError("unknown key '" + (path_.empty() ? "" : path_ + ".") + it.key() + "'");
  }

 private:
  static long long as_integer(const Json& v, const std::string& where) {
    if (v.is_number_integer()) return v.get<long long>();
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 1e15) return static_cast<long long>(d);
    }
    throw ConfigError(where + "expected an integer");
  }

  std::string where(const std::string& key = "") const {
    std::string p = path_;
    if (!key.empty()) p = p.empty() ? key : p + "." + key;
    return p.empty() ? "config: " : p + ": ";
  }

  const Json& doc_;
  std::string path_;
  std::set<std::string> seen_;
};

int narrow_int(long long v, const std::string& name) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ConfigError(name + ": out of range");
  return static_cast<int>(v);
}

Vec3 to_vec3(const std::vector<double>& v) { return {v[0], v[1], v[2]}; }

bool finite(double x) { return std::isfinite(x); }

}  // namespace

ManifoldSpec RunConfig::manifold_spec() const {
  switch (manifold_kind_from_string(manifold.kind)) {
    case ManifoldKind::Sphere:
      return ManifoldSpec::sphere(manifold.R);
    case ManifoldKind::Pseudosphere:
      return ManifoldSpec::pseudosphere(manifold.R);
    case ManifoldKind::Torus:
      return ManifoldSpec::torus(manifold.L, manifold.R);
  }
  throw ConfigError("unknown manifold kind");
}

Potential RunConfig::make_potential() const {
  const std::string& k = potential.kind;
  if (k == "zero") return Potential::zero();
  if (k == "cosine_well") return Potential::cosine_well(potential.V0);
  if (k == "harmonic") return Potential::harmonic(potential.V0);
  if (k == "tabulated") return Potential::tabulated(potential.theta, potential.values);
  throw ConfigError("potential.kind: unknown potential '" + k + "' (zero, cosine_well, harmonic, tabulated)");
}

Grid RunConfig::make_grid() const { return rotorlab::make_grid(manifold_spec(), grid.n, grid.theta_max); }

NormConvention RunConfig::norm() const { return norm_convention_from_string(solver.norm); }

RunConfig parse_config(const Json& doc) {
  RunConfig c;
  Reader top(doc, "");

  Reader man = top.child("manifold");
  c.manifold.kind = man.string("kind", c.manifold.kind);
  c.manifold.R = man.number("R", c.manifold.R);
  c.manifold.L = man.number("L", c.manifold.L);
  man.finish();

  Reader rot = top.child("rotor");
  c.rotor.M = rot.number("M", c.rotor.M);
  c.rotor.I = rot.number("I", c.rotor.I);
  c.rotor.hbar = rot.number("hbar", c.rotor.hbar);
  c.rotor.sig = narrow_int(rot.integer("sig", c.rotor.sig), "rotor.sig");
  rot.finish();

  Reader pot = top.child("potential");
  c.potential.kind = pot.string("kind", c.potential.kind);
  c.potential.V0 = pot.number("V0", c.potential.V0);
  c.potential.theta = pot.numbers("theta", c.potential.theta);
  c.potential.values = pot.numbers("values", c.potential.values);
  pot.finish();

  Reader grid = top.child("grid");
  c.grid.n = grid.count("n", c.grid.n);
  c.grid.theta_max = grid.number("theta_max", c.grid.theta_max);
  grid.finish();

  Reader q = top.child("quantum");
  c.quantum.m = narrow_int(q.integer("m", c.quantum.m), "quantum.m");
  c.quantum.s = narrow_int(q.integer("s", c.quantum.s), "quantum.s");
  const auto mr = q.integers("m_range", {c.quantum.m_range.first, c.quantum.m_range.second}, 2);
  const auto sr = q.integers("s_range", {c.quantum.s_range.first, c.quantum.s_range.second}, 2);
  c.quantum.m_range = {mr[0], mr[1]};
  c.quantum.s_range = {sr[0], sr[1]};
  q.finish();

  Reader sol = top.child("solver");
  c.solver.k = sol.count("k", c.solver.k);
  c.solver.norm = sol.string("norm", c.solver.norm);
  c.solver.richardson = sol.boolean("richardson", c.solver.richardson);
  sol.finish();

  Reader out = top.child("output");
  c.output.format = out.string("format", c.output.format);
  c.output.path = out.string("path", c.output.path);
  out.finish();

  Reader geo = top.child("geodesic");
  const GeodesicConfig g0;
  c.geodesic.q0 = to_vec3(geo.numbers("q0", {g0.q0[0], g0.q0[1], g0.q0[2]}, 3));
  c.geodesic.p0 = to_vec3(geo.numbers("p0", {g0.p0[0], g0.p0[1], g0.p0[2]}, 3));
  c.geodesic.dt = geo.number("dt", g0.dt);
  c.geodesic.steps = geo.count("steps", g0.steps);
  c.geodesic.record_every = geo.count("record_every", g0.record_every);
  geo.finish();

  Reader hj = top.child("hj");
  c.hj.E = hj.number("E", c.hj.E);
  c.hj.mu = hj.number("mu", c.hj.mu);
  c.hj.sigma = hj.number("sigma", c.hj.sigma);
  c.hj.samples = hj.count("samples", c.hj.samples);
  c.hj.points = hj.count("points", c.hj.points);
  hj.finish();

  Reader chk = top.child("check");
  c.check.criteria = chk.integers("criteria", c.check.criteria);
  c.check.perturb_coefficient = chk.string("perturb_coefficient", c.check.perturb_coefficient);
  chk.finish();

  top.finish();
  return c;
}

Json to_json(const RunConfig& c) {
  Json j;
  j["manifold"] = {{"kind", c.manifold.kind}, {"R", c.manifold.R}, {"L", c.manifold.L}};
  j["rotor"] = {{"M", c.rotor.M}, {"I", c.rotor.I}, {"hbar", c.rotor.hbar}, {"sig", c.rotor.sig}};
  j["potential"] = {{"kind", c.potential.kind},
                    {"V0", c.potential.V0},
                    {"theta", c.potential.theta},
                    {"values", c.potential.values}};
  j["grid"] = {{"n", c.grid.n}, {"theta_max", c.grid.theta_max}};
  j["quantum"] = {{"m", c.quantum.m},
                  {"s", c.quantum.s},
                  {"m_range", {c.quantum.m_range.first, c.quantum.m_range.second}},
                  {"s_range", {c.quantum.s_range.first, c.quantum.s_range.second}}};
  j["solver"] = {{"k", c.solver.k}, {"norm", c.solver.norm}, {"richardson", c.solver.richardson}};
  j["output"] = {{"format", c.output.format}, {"path", c.output.path}};
  j["geodesic"] = {{"q0", {c.geodesic.q0[0], c.geodesic.q0[1], c.geodesic.q0[2]}},
                   {"p0", {c.geodesic.p0[0], c.geodesic.p0[1], c.geodesic.p0[2]}},
                   {"dt", c.geodesic.dt},
                   {"steps", c.geodesic.steps},
                   {"record_every", c.geodesic.record_every}};
  j["hj"] = {{"E", c.hj.E},
             {"mu", c.hj.mu},
             {"sigma", c.hj.sigma},
             {"samples", c.hj.samples},
             {"points", c.hj.points}};
  j["check"] = {{"criteria", c.check.criteria}, {"perturb_coefficient", c.check.perturb_coefficient}};
  return j;
}

Json load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
}

void apply_override(Json& doc, const std::string& dotted_path, Json value) {
  if (dotted_path.empty()) throw ConfigError("empty override path");
  if (!doc.is_object()) throw ConfigError("config document must be an object");
  Json* node = &doc;
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = dotted_path.find('.', start);
    const std::string key = dotted_path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    if (key.empty()) throw ConfigError("malformed override path '" + dotted_path + "'");
    if (dot == std::string::npos) {
      (*node)[key] = std::move(value);
      return;
    }
    Json& next = (*node)[key];
    if (next.is_null()) next = Json::object();
    if (!next.is_object()) throw ConfigError("override path '" + dotted_path + "' crosses a non-object value");
    node = &next;
    start = dot + 1;
  }
}

void apply_assignment(Json& doc, const std::string& assignment) {
  const std::size_t eq = assignment.find('=');
  if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not of the form key.path=value");
  const std::string text = assignment.substr(eq + 1);
  Json value;
  try {
    value = Json::parse(text);
  } catch (const Json::parse_error&) {
    value = text;
  }
  apply_override(doc, assignment.substr(0, eq), std::move(value));
}

void validate(RunConfig& c) {
  const ManifoldSpec spec = c.manifold_spec();
  c.rotor.validate(spec);
  const Potential V = c.make_potential();
  c.norm();
  if (c.output.format != "csv" && c.output.format != "json")
    throw ConfigError("output.format: expected 'csv' or 'json'");

  if (c.grid.n == 0)
    c.grid.n = spec.theta_domain().topology == Topology::Periodic ? kDefaultPeriodicNodes : kDefaultCellCenteredNodes;
  const Grid grid = c.make_grid();
  if (c.solver.k == 0 || c.solver.k > grid.n) throw ConfigError("solver.k: must be in [1, grid.n]");
  if (V.kind() == Potential::Kind::Tabulated) {
    const auto& t = V.table_theta();
    if (t.front() > grid.nodes.front() || t.back() < grid.nodes.back())
      throw ConfigError("potential.theta: table does not cover the grid interval");
  }

  const GeodesicConfig& g = c.geodesic;
  if (!(g.dt > 0.0) || !finite(g.dt)) throw ConfigError("geodesic.dt: must be positive");
  if (g.record_every == 0) throw ConfigError("geodesic.record_every: must be at least 1");
  for (int i = 0; i < 3; ++i)
    if (!finite(g.q0[i]) || !finite(g.p0[i])) throw ConfigError("geodesic.q0/p0: entries must be finite");
  if (classify(spec, g.q0[0]) != ChartPoint::Interior)
    throw ConfigError("geodesic.q0: theta is not inside the chart");

  if (!finite(c.hj.E) || !finite(c.hj.mu) || !finite(c.hj.sigma)) throw ConfigError("hj: E, mu, sigma must be finite");
  if (c.hj.samples < 16) throw ConfigError("hj.samples: must be at least 16");
  if (c.hj.points < 2) throw ConfigError("hj.points: must be at least 2");

  for (int id : c.check.criteria)
    if (id < 1 || id > checks::kCheckCount)
      throw ConfigError("check.criteria: ids run from 1 to " + std::to_string(checks::kCheckCount));
  if (!c.check.perturb_coefficient.empty()) {
    const auto& names = checks::perturbable_coefficients();
    if (std::find(names.begin(), names.end(), c.check.perturb_coefficient) == names.end())
      throw ConfigError("check.perturb_coefficient: expected one of a_tt, a_pp, a_ps, a_ss, b_t");
  }
}

}  // namespace rotorlab::cli
