#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "rotorlab/checks/checks.hpp"
#include "rotorlab/classical.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/geometry.hpp"
#include "rotorlab/groups.hpp"
#include "rotorlab/operators.hpp"
#include "rotorlab/spectral.hpp"

namespace py = pybind11;
using namespace rotorlab;

namespace {

py::array_t<double> vector_array(const std::vector<double>& v) { return py::array_t<double>(v.size(), v.data()); }

py::array_t<double> matrix_array(const Matrix& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) w(i, j) = m(i, j);
  return a;
}

py::array_t<double> mat3_array(const Mat3& m) {
  py::array_t<double> a({3, 3});
  auto w = a.mutable_unchecked<2>();
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) w(i, j) = m[i][j];
  return a;
}

SolveOptions solve_options(std::size_t k, const std::string& norm, bool richardson) {
  SolveOptions o;
  o.k = k;
  o.norm = norm_convention_from_string(norm);
  o.richardson = richardson;
  return o;
}

py::dict trajectory_dict(const TrajectoryRecord& r, const std::string& status, const std::string& message) {
  const std::size_t n = r.states.size();
  py::array_t<double> q({n, std::size_t{3}}), p({n, std::size_t{3}});
  auto wq = q.mutable_unchecked<2>();
  auto wp = p.mutable_unchecked<2>();
  for (std::size_t i = 0; i < n; ++i)
    for (int k = 0; k < 3; ++k) {
      wq(i, k) = r.states[i].q[k];
      wp(i, k) = r.states[i].p[k];
    }
  py::dict d;
  d["t"] = vector_array(r.times);
  d["q"] = q;
  d["p"] = p;
  d["H"] = vector_array(r.energy);
  d["energy_drift"] = vector_array(r.energy_drift);
  d["p_phi_drift"] = vector_array(r.p_phi_drift);
  d["p_psi_drift"] = vector_array(r.p_psi_drift);
  d["status"] = status;
  d["message"] = message;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Point rotor on the sphere, pseudosphere and torus: spectra, dynamics and Hamilton-Jacobi quadrature";

  auto base = py::register_exception<Error>(m, "RotorlabError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<SingularMetric>(m, "SingularMetric", base.ptr());
  py::register_exception<HemisphereError>(m, "HemisphereError", base.ptr());
  py::register_exception<GridTooCoarse>(m, "GridTooCoarse", base.ptr());
  py::register_exception<ConvergenceFailure>(m, "ConvergenceFailure", base.ptr());
  py::register_exception<NoAllowedRegion>(m, "NoAllowedRegion", base.ptr());

  py::class_<ManifoldSpec>(m, "ManifoldSpec")
      .def_static("sphere", &ManifoldSpec::sphere, py::arg("R"))
      .def_static("pseudosphere", &ManifoldSpec::pseudosphere, py::arg("R"))
      .def_static("torus", &ManifoldSpec::torus, py::arg("L"), py::arg("R"))
      .def_property_readonly("kind", [](const ManifoldSpec& s) { return std::string(to_string(s.kind())); })
      .def_property_readonly("R", &ManifoldSpec::R)
      .def_property_readonly("L", &ManifoldSpec::L)
      .def("__repr__", [](const ManifoldSpec& s) {
        std::string r = "ManifoldSpec." + std::string(to_string(s.kind())) + "(";
        if (s.kind() == ManifoldKind::Torus) r += "L=" + std::to_string(s.L()) + ", ";
        return r + "R=" + std::to_string(s.R()) + ")";
      });

  py::class_<RotorParams>(m, "RotorParams")
      .def(py::init([](double M, double I, double hbar, int sig) { return RotorParams{M, I, hbar, sig}; }),
           py::arg("M") = 1.0, py::arg("I") = 1.0, py::arg("hbar") = 1.0, py::arg("sig") = 1)
      .def_readwrite("M", &RotorParams::M)
      .def_readwrite("I", &RotorParams::I)
      .def_readwrite("hbar", &RotorParams::hbar)
      .def_readwrite("sig", &RotorParams::sig);

  py::class_<Potential>(m, "Potential")
      .def_static("zero", &Potential::zero)
      .def_static("cosine_well", &Potential::cosine_well, py::arg("V0"))
      .def_static("harmonic", &Potential::harmonic, py::arg("V0"))
      .def_static("tabulated", &Potential::tabulated, py::arg("theta"), py::arg("values"))
      .def_property_readonly("kind", [](const Potential& p) { return std::string(to_string(p.kind())); })
      .def("value", &Potential::value, py::arg("spec"), py::arg("theta"));

  m.def(
      "profile",
      [](const ManifoldSpec& spec, double theta) {
        const Profile p = profile(spec, theta);
        return py::dict(py::arg("h") = p.h, py::arg("dh") = p.dh, py::arg("c") = p.c, py::arg("dc") = p.dc);
      },
      py::arg("spec"), py::arg("theta"));
  m.def(
      "metric_tensor",
      [](const ManifoldSpec& spec, const RotorParams& rotor, double theta) {
        const MetricField g = metric_tensor(spec, rotor, theta);
        return py::dict(py::arg("G") = mat3_array(g.G), py::arg("Ginv") = mat3_array(g.Ginv),
                        py::arg("sqrt_abs_det") = g.sqrt_abs_det, py::arg("det") = g.det);
      },
      py::arg("spec"), py::arg("rotor"), py::arg("theta"));
  m.def("embed", &embed, py::arg("spec"), py::arg("theta"), py::arg("phi"));
  m.def("implicit_residual", &implicit_residual, py::arg("spec"), py::arg("point"));
  m.def("scalar_curvature", &scalar_curvature, py::arg("spec"), py::arg("theta"));

  m.def(
      "euler_matrix", [](double phi, double theta, double psi) { return mat3_array(euler_matrix({phi, theta, psi})); },
      py::arg("phi"), py::arg("theta"), py::arg("psi"));
  m.def(
      "lorentz_matrix", [](double phi, double chi, double psi) { return mat3_array(lorentz_matrix({phi, chi, psi})); },
      py::arg("phi"), py::arg("chi"), py::arg("psi"));
  m.def(
      "co_moving_velocity",
      [](const Vec3& angles, const Vec3& rates, bool lorentzian) {
        const CoMovingVelocity w =
            co_moving_velocity({angles[0], angles[1], angles[2]}, {rates[0], rates[1], rates[2]},
                               lorentzian ? VelocityFlavor::Lorentzian : VelocityFlavor::Rotational);
        return Vec3{w.w1, w.w2, w.w3};
      },
      py::arg("angles"), py::arg("rates"), py::arg("lorentzian") = false,
      "Components (w1, w2, w3) of U^-1 dU/dt for Euler angles (phi, theta, psi) and their rates.");

  m.def(
      "laplacian_coefficients",
      [](const ManifoldSpec& spec, const RotorParams& rotor, double theta) {
        const LaplacianCoefficients a = laplacian_coefficients(spec, rotor, theta);
        return py::dict(py::arg("a_tt") = a.a_tt, py::arg("a_pp") = a.a_pp, py::arg("a_ps") = a.a_ps,
                        py::arg("a_ss") = a.a_ss, py::arg("b_t") = a.b_t);
      },
      py::arg("spec"), py::arg("rotor"), py::arg("theta"));
  m.def(
      "radial_q",
      [](const ManifoldSpec& spec, const RotorParams& rotor, int mm, int s, const Potential& V,
         const std::vector<double>& theta) {
        const RadialProblem p = radial_problem(spec, rotor, mm, s, V);
        std::vector<double> q(theta.size());
        for (std::size_t i = 0; i < theta.size(); ++i) q[i] = p.q(theta[i]);
        return vector_array(q);
      },
      py::arg("spec"), py::arg("rotor"), py::arg("m"), py::arg("s"), py::arg("potential"), py::arg("theta"),
      "Effective potential q(theta) of the radial equation.");

  py::class_<SpectrumResult>(m, "SpectrumResult")
      .def_readonly("m", &SpectrumResult::m)
      .def_readonly("s", &SpectrumResult::s)
      .def_property_readonly("eps", [](const SpectrumResult& r) { return vector_array(r.eigenvalues_dimensionless); })
      .def_property_readonly("energies", [](const SpectrumResult& r) { return vector_array(r.eigenvalues_physical); })
      .def_property_readonly("nodes", [](const SpectrumResult& r) { return vector_array(r.nodes); })
      .def_property_readonly("eigenfunctions", [](const SpectrumResult& r) { return matrix_array(r.eigenfunctions); })
      .def_property_readonly("convergence", [](const SpectrumResult& r) { return vector_array(r.convergence); })
      .def_readonly("energy_scale", &SpectrumResult::energy_scale)
      .def_readonly("wavefunction_scale", &SpectrumResult::wavefunction_scale)
      .def_readonly("truncation_warning", &SpectrumResult::truncation_warning)
      .def_readonly("scattering", &SpectrumResult::scattering)
      .def_readonly("warnings", &SpectrumResult::warnings);

  m.def(
      "solve_spectrum",
      [](const ManifoldSpec& spec, const RotorParams& rotor, int mm, int s, const Potential& V, std::size_t n,
         double theta_max, std::size_t k, const std::string& norm, bool richardson) {
        const Grid grid = make_grid(spec, n, theta_max);
        py::gil_scoped_release release;
        return solve_spectrum(spec, rotor, mm, s, V, grid, solve_options(k, norm, richardson));
      },
      py::arg("spec"), py::arg("rotor") = RotorParams{}, py::arg("m") = 0, py::arg("s") = 0,
      py::arg("potential") = Potential::zero(), py::arg("n") = 0, py::arg("theta_max") = kDefaultThetaMax,
      py::arg("k") = 6, py::arg("norm") = "unit_volume", py::arg("richardson") = true);

  m.def(
      "spectrum_scan",
      [](const ManifoldSpec& spec, const RotorParams& rotor, std::pair<int, int> m_range, std::pair<int, int> s_range,
         const Potential& V, std::size_t n, double theta_max, std::size_t k, const std::string& norm, bool richardson,
         std::size_t threads) {
        const Grid grid = make_grid(spec, n, theta_max);
        ScanTable table;
        {
          py::gil_scoped_release release;
          table = spectrum_scan(spec, rotor, {m_range.first, m_range.second}, {s_range.first, s_range.second}, V, grid,
                                solve_options(k, norm, richardson), threads);
        }
        py::dict out;
        for (auto& [key, cell] : table) {
          if (cell.result)
            out[py::make_tuple(key.first, key.second)] = py::cast(std::move(*cell.result));
          else
            out[py::make_tuple(key.first, key.second)] = py::str(cell.error);
        }
        return out;
      },
      py::arg("spec"), py::arg("rotor"), py::arg("m_range"), py::arg("s_range"), py::arg("potential") = Potential::zero(),
      py::arg("n") = 0, py::arg("theta_max") = kDefaultThetaMax, py::arg("k") = 6, py::arg("norm") = "unit_volume",
      py::arg("richardson") = true, py::arg("threads") = 0,
      "Dict keyed by (m, s); a failed cell holds its error message instead of a result.");

  m.def("momenta_from_rates", &momenta_from_rates, py::arg("spec"), py::arg("rotor"), py::arg("theta"), py::arg("rates"));
  m.def("rates_from_momenta", &rates_from_momenta, py::arg("spec"), py::arg("rotor"), py::arg("theta"),
        py::arg("momenta"));
  m.def(
      "hamiltonian",
      [](const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, const Vec3& q, const Vec3& p) {
        return hamiltonian(spec, rotor, V, {q, p});
      },
      py::arg("spec"), py::arg("rotor"), py::arg("potential"), py::arg("q"), py::arg("p"));

  m.def(
      "integrate",
      [](const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, const Vec3& q0, const Vec3& p0,
         double dt, std::size_t steps, std::size_t record_every) {
        IntegratorOptions o;
        o.record_every = record_every;
        try {
          TrajectoryRecord r;
          {
            py::gil_scoped_release release;
            r = integrate(spec, rotor, V, {q0, p0}, dt, steps, o);
          }
          return trajectory_dict(r, "ok", "");
        } catch (const PoleApproach& e) {
          return trajectory_dict(e.partial, "pole_approach", e.what());
        } catch (const StepRejected& e) {
          return trajectory_dict(e.partial, "step_rejected", e.what());
        }
      },
      py::arg("spec"), py::arg("rotor"), py::arg("potential"), py::arg("q0"), py::arg("p0"), py::arg("dt"),
      py::arg("steps"), py::arg("record_every") = 1,
      "Implicit-midpoint trajectory. A halted run returns the partial record with status set.");

  py::class_<AllowedInterval>(m, "AllowedInterval")
      .def_readonly("lo", &AllowedInterval::lo)
      .def_readonly("hi", &AllowedInterval::hi)
      .def_readonly("lo_turning", &AllowedInterval::lo_turning)
      .def_readonly("hi_turning", &AllowedInterval::hi_turning)
      .def_property_readonly("bounded", &AllowedInterval::bounded);

  py::class_<RadialMomentum>(m, "RadialMomentum")
      .def(py::init([](const ManifoldSpec& spec, const RotorParams& rotor, const Potential& V, double E, double mu,
                       double sigma, double theta_max, std::size_t samples) {
             HjOptions o;
             o.theta_max = theta_max;
             o.samples = samples;
             return hj_radial_momentum(spec, rotor, V, E, mu, sigma, o);
           }),
           py::arg("spec"), py::arg("rotor"), py::arg("potential"), py::arg("E"), py::arg("mu") = 0.0,
           py::arg("sigma") = 0.0, py::arg("theta_max") = 12.0, py::arg("samples") = 4096)
      .def("p_squared", &RadialMomentum::p_squared, py::arg("theta"))
      .def("__call__", &RadialMomentum::operator(), py::arg("theta"))
      .def_property_readonly("turning_points", &RadialMomentum::turning_points)
      .def_property_readonly("allowed_intervals", &RadialMomentum::allowed_intervals)
      .def("action", &RadialMomentum::action, py::arg("interval"))
      .def("reduced_action", &RadialMomentum::reduced_action, py::arg("interval"), py::arg("theta"))
      .def("period", &RadialMomentum::period, py::arg("interval"));

  m.def(
      "run_checks",
      [](std::vector<int> criteria, std::optional<std::string> perturb) {
        checks::CheckOptions o;
        o.perturb_coefficient = perturb;
        std::vector<checks::CheckRecord> records;
        {
          py::gil_scoped_release release;
          records = checks::run_checks(o, criteria);
        }
        py::list out;
        for (const auto& r : records)
          out.append(py::dict(py::arg("id") = r.id, py::arg("name") = r.name, py::arg("passed") = r.passed,
                              py::arg("measured") = r.measured, py::arg("threshold") = r.threshold,
                              py::arg("detail") = r.detail, py::arg("seconds") = r.seconds));
        return out;
      },
      py::arg("criteria") = std::vector<int>{}, py::arg("perturb_coefficient") = std::nullopt,
      "Runs the invariant suite (all criteria when empty).");
}
