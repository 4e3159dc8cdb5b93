#include "rotorlab/cli/commands.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>

#include "rotorlab/checks/checks.hpp"
#include "rotorlab/cli/format.hpp"
#include "rotorlab/errors.hpp"

namespace rotorlab::cli {

namespace {

int emit(const RunConfig& c, const std::string& body, std::ostream& out, std::ostream& err) {
  if (c.output.path.empty()) {
    out << body;
    out.flush();
    return kOk;
  }
  std::ofstream f(c.output.path, std::ios::binary | std::ios::trunc);
  if (!f) {
    err << "error: cannot write output file '" << c.output.path << "'\n";
    return kConfigError;
  }
  f << body;
  return kOk;
}

std::string config_comment(const RunConfig& c) { return "# config: " + to_json(c).dump() + "\n"; }

std::string json_document(const RunConfig& c, Json result) {
  Json doc;
  doc["config"] = to_json(c);
  doc["result"] = std::move(result);
  return doc.dump(2) + "\n";
}

// nlohmann writes non-finite numbers as null; keep that explicit.
Json number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

Json numbers(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number(x));
  return a;
}

SolveOptions solve_options(const RunConfig& c) {
  SolveOptions o;
  o.k = c.solver.k;
  o.norm = c.norm();
  o.richardson = c.solver.richardson;
  return o;
}

Json spectrum_json(const SpectrumResult& r, bool eigenfunctions) {
  Json j;
  j["m"] = r.m;
  j["s"] = r.s;
  j["eigenvalues_dimensionless"] = numbers(r.eigenvalues_dimensionless);
  j["eigenvalues_physical"] = numbers(r.eigenvalues_physical);
  j["convergence"] = numbers(r.convergence);
  j["coarse_eigenvalues"] = numbers(r.coarse_eigenvalues);
  j["energy_scale"] = number(r.energy_scale);
  j["norm_convention"] = std::string(to_string(r.norm_convention));
  j["wavefunction_scale"] = number(r.wavefunction_scale);
  j["truncation_warning"] = r.truncation_warning;
  j["scattering"] = r.scattering;
  j["warnings"] = r.warnings;
  if (eigenfunctions) {
    j["nodes"] = numbers(r.nodes);
    Json fs = Json::array();
    for (std::size_t col = 0; col < r.eigenfunctions.cols(); ++col) fs.push_back(numbers(r.eigenfunctions.column(col)));
    j["eigenfunctions"] = std::move(fs);
  }
  return j;
}

std::string spectrum_rows(const SpectrumResult& r, const std::string& prefix) {
  std::string rows;
  for (std::size_t i = 0; i < r.eigenvalues_dimensionless.size(); ++i) {
    rows += prefix + std::to_string(i) + ',' + format_double(r.eigenvalues_dimensionless[i]) + ',' +
            format_double(r.eigenvalues_physical[i]) + ',';
    if (i < r.convergence.size()) rows += format_double(r.convergence[i]);
    rows += '\n';
  }
  return rows;
}

void report_warnings(const SpectrumResult& r, std::ostream& err) {
  for (const std::string& w : r.warnings) err << "warning: (m,s)=(" << r.m << "," << r.s << "): " << w << "\n";
}

std::string halt_status(const DynamicsHalt& e) {
  return dynamic_cast<const PoleApproach*>(&e) ? "pole_approach" : "step_rejected";
}

}  // namespace

int cmd_spectrum(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SpectrumResult res;
  try {
    res = solve_spectrum(c.manifold_spec(), c.rotor, c.quantum.m, c.quantum.s, c.make_potential(), c.make_grid(),
                         solve_options(c));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }
  report_warnings(res, err);

  std::string body;
  if (c.output.format == "json") {
    body = json_document(c, spectrum_json(res, true));
  } else {
    body = config_comment(c);
    body += "# m=" + std::to_string(res.m) + " s=" + std::to_string(res.s) +
            " energy_scale=" + format_double(res.energy_scale) + " norm=" + std::string(to_string(res.norm_convention)) +
            " wavefunction_scale=" + format_double(res.wavefunction_scale) +
            " truncation_warning=" + (res.truncation_warning ? "true" : "false") +
            " scattering=" + (res.scattering ? "true" : "false") + "\n";
    body += "index,eps,E_physical,convergence_estimate\n";
    body += spectrum_rows(res, "");
  }
  return emit(c, body, out, err);
}

int cmd_scan(const RunConfig& c, std::ostream& out, std::ostream& err) {
  ScanTable table;
  try {
    table = spectrum_scan(c.manifold_spec(), c.rotor, {c.quantum.m_range.first, c.quantum.m_range.second},
                          {c.quantum.s_range.first, c.quantum.s_range.second}, c.make_potential(), c.make_grid(),
                          solve_options(c), scan_threads_from_environment());
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }

  bool any_failed = false;
  for (const auto& [key, cell] : table) {
    if (cell.result) {
      report_warnings(*cell.result, err);
    } else {
      any_failed = true;
      err << "solver failure: (m,s)=(" << key.first << "," << key.second << "): " << cell.error << "\n";
    }
  }

  std::string body;
  if (c.output.format == "json") {
    Json cells = Json::array();
    for (const auto& [key, cell] : table) {
      Json j;
      j["m"] = key.first;
      j["s"] = key.second;
      if (cell.result) j["spectrum"] = spectrum_json(*cell.result, false);
      else j["error"] = cell.error;
      cells.push_back(std::move(j));
    }
    body = json_document(c, Json{{"cells", std::move(cells)}});
  } else {
    body = config_comment(c);
    for (const auto& [key, cell] : table)
      if (!cell.result)
        body += "# error m=" + std::to_string(key.first) + " s=" + std::to_string(key.second) + ": " + cell.error + "\n";
    body += "m,s,index,eps,E_physical,convergence_estimate\n";
    for (const auto& [key, cell] : table)
      if (cell.result)
        body += spectrum_rows(*cell.result, std::to_string(key.first) + ',' + std::to_string(key.second) + ',');
  }
  const int code = emit(c, body, out, err);
  return code != kOk ? code : (any_failed ? kSolverFailure : kOk);
}

int cmd_geodesic(const RunConfig& c, std::ostream& out, std::ostream& err) {
  TrajectoryRecord rec;
  std::string status = "ok", message;
  int code = kOk;
  try {
    IntegratorOptions opt;
    opt.record_every = c.geodesic.record_every;
    rec = integrate(c.manifold_spec(), c.rotor, c.make_potential(), State{c.geodesic.q0, c.geodesic.p0}, c.geodesic.dt,
                    c.geodesic.steps, opt);
  } catch (const DynamicsHalt& e) {
    rec = e.partial;
    status = halt_status(e);
    message = e.what();
    code = kDynamicsHalt;
    err << "dynamics halt: " << message << "\n";
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }

  static const std::vector<std::string> columns{"t",      "theta", "phi",          "psi",         "p_theta",    "p_phi",
                                                "p_psi", "H",     "energy_drift", "p_phi_drift", "p_psi_drift"};
  auto row = [&](std::size_t i) {
    const State& s = rec.states[i];
    return std::vector<double>{rec.times[i], s.q[0],    s.q[1], s.q[2], s.p[0], s.p[1], s.p[2], rec.energy[i],
                               rec.energy_drift[i], rec.p_phi_drift[i], rec.p_psi_drift[i]};
  };

  std::string body;
  if (c.output.format == "json") {
    Json rows = Json::array();
    for (std::size_t i = 0; i < rec.times.size(); ++i) rows.push_back(numbers(row(i)));
    Json result;
    result["status"] = status;
    result["message"] = message;
    result["max_abs_energy_drift"] = number(rec.max_abs_energy_drift());
    result["max_abs_p_phi_drift"] = number(rec.max_abs_p_phi_drift());
    result["max_abs_p_psi_drift"] = number(rec.max_abs_p_psi_drift());
    result["columns"] = columns;
    result["rows"] = std::move(rows);
    body = json_document(c, std::move(result));
  } else {
    body = config_comment(c);
    for (std::size_t i = 0; i < columns.size(); ++i) body += (i ? "," : "") + columns[i];
    body += '\n';
    for (std::size_t i = 0; i < rec.times.size(); ++i) body += csv_row(row(i)) + '\n';
    body += "# status=" + status + (message.empty() ? "" : " message=" + message) + "\n";
  }
  const int written = emit(c, body, out, err);
  return written != kOk ? written : code;
}

int cmd_hj(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const ManifoldSpec spec = c.manifold_spec();
  std::optional<RadialMomentum> pm;
  try {
    HjOptions opt;
    opt.theta_max = c.grid.theta_max;
    opt.samples = c.hj.samples;
    pm.emplace(hj_radial_momentum(spec, c.rotor, c.make_potential(), c.hj.E, c.hj.mu, c.hj.sigma, opt));
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }

  // Table range: the open chart, the truncated pseudosphere, one torus period.
  double lo = 0.0, hi = std::numbers::pi;
  if (spec.kind() == ManifoldKind::Pseudosphere) hi = c.grid.theta_max;
  if (spec.kind() == ManifoldKind::Torus) lo = -std::numbers::pi;
  const std::size_t n = c.hj.points;

  struct Row {
    double theta, p2, p, action;
  };
  std::vector<Row> rows;
  Json intervals = Json::array();
  try {
    for (std::size_t i = 0; i < n; ++i) {
      const double theta = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
      Row r{theta, pm->p_squared(theta), (*pm)(theta), std::numeric_limits<double>::quiet_NaN()};
      for (const AllowedInterval& iv : pm->allowed_intervals())
        for (double t : {theta, theta + 2.0 * std::numbers::pi})
          if (std::isnan(r.action) && t >= iv.lo && t <= iv.hi) r.action = pm->reduced_action(iv, t);
      rows.push_back(r);
    }
    for (const AllowedInterval& iv : pm->allowed_intervals()) {
      Json j;
      j["lo"] = iv.lo;
      j["hi"] = iv.hi;
      j["lo_turning"] = iv.lo_turning;
      j["hi_turning"] = iv.hi_turning;
      j["action"] = number(pm->action(iv));
      j["period"] = iv.bounded() ? number(pm->period(iv)) : Json(nullptr);
      intervals.push_back(std::move(j));
    }
  } catch (const Error& e) {
    err << "solver failure: " << e.what() << "\n";
    return kSolverFailure;
  }

  std::string body;
  if (c.output.format == "json") {
    Json table = Json::array();
    for (const Row& r : rows) table.push_back(numbers({r.theta, r.p2, r.p, r.action}));
    Json result;
    result["turning_points"] = numbers(pm->turning_points());
    result["intervals"] = std::move(intervals);
    result["columns"] = {"theta", "p_theta_squared", "p_theta", "reduced_action"};
    result["rows"] = std::move(table);
    body = json_document(c, std::move(result));
  } else {
    body = config_comment(c);
    for (double t : pm->turning_points()) body += "# turning_point=" + format_double(t) + "\n";
    for (const Json& j : intervals) {
      body += "# interval lo=" + format_double(j["lo"].get<double>()) + " hi=" + format_double(j["hi"].get<double>()) +
              " lo_turning=" + (j["lo_turning"].get<bool>() ? "true" : "false") +
              " hi_turning=" + (j["hi_turning"].get<bool>() ? "true" : "false") + " action=" +
              (j["action"].is_null() ? std::string("nan") : format_double(j["action"].get<double>())) + " period=" +
              (j["period"].is_null() ? std::string("") : format_double(j["period"].get<double>())) + "\n";
    }
    body += "theta,p_theta_squared,p_theta,reduced_action\n";
    for (const Row& r : rows) {
      body += csv_row({r.theta, r.p2, r.p}) + ',';
      if (!std::isnan(r.action)) body += format_double(r.action);
      body += '\n';
    }
  }
  return emit(c, body, out, err);
}

int cmd_check(const RunConfig& c, bool json, std::ostream& out, std::ostream& err) {
  checks::CheckOptions opt;
  if (!c.check.perturb_coefficient.empty()) opt.perturb_coefficient = c.check.perturb_coefficient;
  std::vector<checks::CheckRecord> records;
  try {
    records = checks::run_checks(opt, c.check.criteria);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }

  bool all = true;
  for (const auto& r : records) {
    all = all && r.passed;
    if (!r.passed) err << "invariant failed: C" << r.id << " " << r.name << ": " << r.detail << "\n";
  }

  std::string body;
  if (json || c.output.format == "json") {
    Json list = Json::array();
    for (const auto& r : records) {
      Json j;
      j["id"] = r.id;
      j["name"] = r.name;
      j["description"] = r.description;
      j["passed"] = r.passed;
      j["measured"] = number(r.measured);
      j["threshold"] = number(r.threshold);
      j["detail"] = r.detail;
      j["seconds"] = number(r.seconds);
      list.push_back(std::move(j));
    }
    Json doc;
    doc["config"] = to_json(c);
    doc["passed"] = all;
    doc["checks"] = std::move(list);
    body = doc.dump(2) + "\n";
  } else {
    std::ostringstream os;
    std::size_t passed = 0;
    for (const auto& r : records) {
      passed += r.passed;
      os << "C" << r.id << " " << (r.passed ? "PASS" : "FAIL") << " " << r.name << "  measured=" << format_double(r.measured)
         << " threshold=" << format_double(r.threshold) << "  (" << format_double(std::round(r.seconds * 1000) / 1000)
         << " s)\n    " << r.detail << "\n";
    }
    os << passed << "/" << records.size() << " checks passed\n";
    body = os.str();
  }
  const int code = emit(c, body, out, err);
  return code != kOk ? code : (all ? kOk : kInvariantFailure);
}

}  // namespace rotorlab::cli
