#include "rotorlab/checks/checks.hpp"

#include <lapacke.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "rotorlab/checks/closed_form.hpp"
#include "rotorlab/classical.hpp"
#include "rotorlab/errors.hpp"
#include "rotorlab/groups.hpp"
#include "rotorlab/spectral.hpp"

namespace rotorlab::checks {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string sci(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

std::string fixed(double x, int digits = 6) {
  std::ostringstream os;
  os.precision(digits);
  os << x;
  return os.str();
}

struct Worst {
  double value = 0.0;
  std::string where;
  void update(double v, const std::string& label) {
    if (!(v <= value)) {  // NaN always wins
      value = v;
      where = label;
    }
  }
};

CheckRecord make_record(int id, std::string name, std::string description) {
  CheckRecord rec;
  rec.id = id;
  rec.name = std::move(name);
  rec.description = std::move(description);
  return rec;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

// Eigenvalues of a symmetric tridiagonal matrix through LAPACK's root-free QR.
std::vector<double> lapack_tridiagonal_eigenvalues(const TridiagonalMatrix& t) {
  std::vector<double> d = t.diag, e = t.off;
  const lapack_int info = LAPACKE_dsterf(static_cast<lapack_int>(d.size()), d.data(), e.data());
  if (info != 0) throw ConvergenceFailure("dsterf failed with info = " + std::to_string(info));
  return d;
}

LaplacianCoefficients perturbed(LaplacianCoefficients a, const CheckOptions& options) {
  if (!options.perturb_coefficient) return a;
  const double f = 1.0 + options.perturbation;
  const std::string& name = *options.perturb_coefficient;
  if (name == "a_tt") a.a_tt *= f;
  else if (name == "a_pp") a.a_pp *= f;
  else if (name == "a_ps") a.a_ps *= f;
  else if (name == "a_ss") a.a_ss *= f;
  else if (name == "b_t") a.b_t *= f;
  return a;
}

// Relative difference per coefficient; `floor_ss` guards the a_ss comparison
// when its two terms nearly cancel.
void compare_coefficients(const LaplacianCoefficients& g, const LaplacianCoefficients& r, double floor_ss,
                          const std::string& label, Worst& worst) {
  auto rel = [](double a, double b, double floor) { return std::abs(a - b) / std::max(std::abs(b), floor); };
  constexpr double tiny = 1e-300;
  worst.update(rel(g.a_tt, r.a_tt, tiny), "a_tt " + label);
  worst.update(rel(g.a_pp, r.a_pp, tiny), "a_pp " + label);
  worst.update(rel(g.a_ps, r.a_ps, tiny), "a_ps " + label);
  worst.update(rel(g.a_ss, r.a_ss, floor_ss), "a_ss " + label);
  worst.update(rel(g.b_t, r.b_t, tiny), "b_t " + label);
}

// Componentwise relative residual of A B against the identity.
double identity_residual(const Mat3& a, const Mat3& b) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double sum = 0.0, mag = 0.0;
      for (int k = 0; k < 3; ++k) {
        sum += a[i][k] * b[k][j];
        mag += std::abs(a[i][k] * b[k][j]);
      }
      const double target = i == j ? 1.0 : 0.0;
      worst = std::max(worst, std::abs(sum - target) / std::max(mag, 1.0));
    }
  return worst;
}

double matrix_rel_diff(const Mat3& a, const Mat3& b) {
  double worst = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      worst = std::max(worst, std::abs(a[i][j] - b[i][j]) / std::max(std::abs(b[i][j]), 1e-300));
  return worst;
}

// Mean spacing of upward zero crossings of p_theta, linearly interpolated.
double measured_theta_period(const TrajectoryRecord& rec) {
  std::vector<double> ups;
  for (std::size_t i = 1; i < rec.states.size(); ++i) {
    const double a = rec.states[i - 1].p[0], b = rec.states[i].p[0];
    if (a < 0.0 && b >= 0.0) ups.push_back(rec.times[i - 1] + (rec.times[i] - rec.times[i - 1]) * (-a) / (b - a));
  }
  if (ups.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  return (ups.back() - ups.front()) / static_cast<double>(ups.size() - 1);
}

}  // namespace

const std::vector<std::string>& perturbable_coefficients() {
  static const std::vector<std::string> names{"a_tt", "a_pp", "a_ps", "a_ss", "b_t"};
  return names;
}

CheckRecord sphere_resonance_spectrum(const CheckOptions&) {
  CheckRecord rec = make_record(1, "sphere_resonance_spectrum",
                  "sphere (m,s)=(0,0), I=MR^2, n=2000: six lowest eps equal j(j+1) to 1e-4, runtime < 2 s");
  const auto t0 = Clock::now();
  const ManifoldSpec spec = ManifoldSpec::sphere(1.0);
  const RotorParams rotor{1.0, 1.0, 1.0, 1};
  SolveOptions opt;
  opt.k = 6;
  opt.richardson = false;
  const SpectrumResult res = solve_spectrum(spec, rotor, 0, 0, Potential::zero(), make_grid(spec, 2000), opt);
  const double elapsed = seconds_since(t0);

  double worst = 0.0;
  std::ostringstream eps;
  for (std::size_t j = 0; j < 6; ++j) {
    const double exact = static_cast<double>(j * (j + 1));
    const double e = res.eigenvalues_dimensionless[j];
    worst = std::max(worst, j == 0 ? std::abs(e) : std::abs(e - exact) / exact);
    eps << (j ? ", " : "") << fixed(e, 9);
  }
  rec.measured = worst;
  rec.threshold = 1e-4;
  rec.passed = worst < 1e-4 && elapsed < 2.0;
  rec.detail = "eps = {" + eps.str() + "}; max error " + sci(worst) + "; solve " + fixed(elapsed, 3) + " s";
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord symmetric_top_spectrum(const CheckOptions&) {
  CheckRecord rec = make_record(2, "symmetric_top_spectrum",
                  "sphere (m,s)=(1,1), MR^2/I=2: eps = j(j+1)+1 to 1e-4, LAPACK cross-check at n and 2n, "
                  "Richardson ratio in [3.5, 4.5]");
  const auto t0 = Clock::now();
  const ManifoldSpec spec = ManifoldSpec::sphere(1.0);
  const RotorParams rotor{1.0, 0.5, 1.0, 1};
  const int m = 1, s = 1;
  const std::size_t k = 5, n = 2000;
  const RadialProblem problem = radial_problem(spec, rotor, m, s, Potential::zero());
  SolveOptions opt;
  opt.k = k;
  opt.richardson = false;

  std::vector<std::vector<double>> eps;
  double crosscheck = 0.0;
  for (std::size_t size : {n / 2, n, 2 * n}) {
    const Grid grid = make_grid(spec, size);
    eps.push_back(solve_spectrum(spec, rotor, m, s, Potential::zero(), grid, opt).eigenvalues_dimensionless);
    if (size == n / 2) continue;
    const TridiagonalMatrix a = discretize(problem, grid);
    const std::vector<double> ref = lapack_tridiagonal_eigenvalues(a);
    for (std::size_t j = 0; j < k; ++j)
      crosscheck = std::max(crosscheck, std::abs(ref[j] - eps.back()[j]) / a.norm());
  }

  double worst_err = 0.0, ratio_lo = std::numeric_limits<double>::infinity(), ratio_hi = -ratio_lo;
  for (std::size_t j = 0; j < k; ++j) {
    const double exact = closed_form::symmetric_top_level(static_cast<int>(j) + 1, s, 2.0);
    worst_err = std::max(worst_err, std::abs(eps[1][j] - exact) / exact);
    const double ratio = (eps[0][j] - eps[1][j]) / (eps[1][j] - eps[2][j]);
    ratio_lo = std::min(ratio_lo, ratio);
    ratio_hi = std::max(ratio_hi, ratio);
  }
  rec.measured = worst_err;
  rec.threshold = 1e-4;
  rec.passed = worst_err < 1e-4 && crosscheck <= 1e-12 && ratio_lo >= 3.5 && ratio_hi <= 4.5;
  rec.detail = "max rel error " + sci(worst_err) + " at n=" + std::to_string(n) + "; LAPACK dsterf agreement " +
               sci(crosscheck) + " (relative to ||A||); Richardson ratios in [" + fixed(ratio_lo, 4) + ", " +
               fixed(ratio_hi, 4) + "]";
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord operator_transcription(const CheckOptions& options) {
  CheckRecord rec = make_record(3, "operator_transcription",
                  "generated Laplacian coefficients equal the hand-written per-geometry operators at 1000 random "
                  "theta (1e-12 relative), including the resonance collapse");
  const auto t0 = Clock::now();
  std::mt19937_64 rng(options.seed ^ 0x03);
  const double M = 1.7, I = 0.9, R = 1.3, L = 3.0;
  const double pi = std::numbers::pi;
  Worst worst;

  auto sweep = [&](const ManifoldSpec& spec, const RotorParams& rotor, double lo, double hi, const std::string& label,
                   const std::function<LaplacianCoefficients(double)>& ref,
                   const std::function<LaplacianCoefficients(double)>& arc_ref, double floor_ss) {
    for (int i = 0; i < 1000; ++i) {
      const double theta = uniform(rng, lo, hi);
      const LaplacianCoefficients g = perturbed(laplacian_coefficients(spec, rotor, theta), options);
      compare_coefficients(g, ref(theta), floor_ss, label + " theta=" + fixed(theta, 6), worst);
      if (arc_ref)
        compare_coefficients(g.in_arc_length(spec.R()), arc_ref(spec.R() * theta), floor_ss,
                             label + " (arc length) theta=" + fixed(theta, 6), worst);
    }
  };

  const ManifoldSpec sphere = ManifoldSpec::sphere(R), pseudo = ManifoldSpec::pseudosphere(R),
                     torus = ManifoldSpec::torus(L, R);
  const RotorParams plus{M, I, 1.0, 1}, minus{M, I, 1.0, -1};
  sweep(sphere, plus, 1e-3, pi - 1e-3, "sphere",
        [&](double t) { return closed_form::sphere_laplacian(R, M, I, t); },
        [&](double r) { return closed_form::sphere_laplacian_arc(R, M, I, r); }, M / I);
  sweep(pseudo, plus, 1e-3, 6.0, "pseudosphere",
        [&](double t) { return closed_form::pseudosphere_laplacian(R, M, I, t); },
        [&](double r) { return closed_form::pseudosphere_laplacian_arc(R, M, I, r); }, M / I);
  sweep(pseudo, minus, 1e-3, 6.0, "pseudosphere sig=-1",
        [&](double t) { return closed_form::pseudosphere_laplacian_negative(R, M, I, t); },
        [&](double r) { return closed_form::pseudosphere_laplacian_arc_negative(R, M, I, r); }, M / I);
  sweep(torus, plus, 0.0, 2.0 * pi, "torus",
        [&](double t) { return closed_form::torus_laplacian(L, R, M, I, t); }, {}, M / I);

  const double Ires = M * R * R;
  const RotorParams res_plus{M, Ires, 1.0, 1}, res_minus{M, Ires, 1.0, -1};
  const double floor_res = 1.0 / (R * R);
  sweep(sphere, res_plus, 1e-3, pi - 1e-3, "sphere I=MR^2",
        [&](double t) { return closed_form::sphere_laplacian_resonance(R, t); }, {}, floor_res);
  sweep(pseudo, res_plus, 1e-3, 6.0, "pseudosphere I=MR^2",
        [&](double t) { return closed_form::pseudosphere_laplacian_resonance(R, t); }, {}, floor_res);
  sweep(pseudo, res_minus, 1e-3, 6.0, "pseudosphere sig=-1 I=MR^2",
        [&](double t) { return closed_form::pseudosphere_laplacian_resonance_negative(R, t); }, {}, floor_res);

  rec.measured = worst.value;
  rec.threshold = 1e-12;
  rec.passed = worst.value <= 1e-12;
  rec.detail = (rec.passed ? "worst: " : "mismatch in ") + worst.where + ", relative " + sci(worst.value);
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord metric_identities(const CheckOptions&) {
  CheckRecord rec = make_record(4, "metric_identities",
                  "G * Ginv = identity and sqrt|det G| equals the per-geometry volume densities over the grid (1e-12)");
  const auto t0 = Clock::now();
  const double M = 1.7, I = 0.9, R = 1.3, L = 3.0;
  Worst worst;

  struct Case {
    ManifoldSpec spec;
    RotorParams rotor;
    std::string label;
    std::function<Mat3(double)> metric;
    std::function<double(double)> density;
  };
  const std::vector<Case> cases{
      {ManifoldSpec::sphere(R), {M, I, 1.0, 1}, "sphere",
       [&](double t) { return closed_form::sphere_metric(R, M, I, t); },
       [&](double t) { return closed_form::sphere_volume_density(R, M, I, t); }},
      {ManifoldSpec::pseudosphere(R), {M, I, 1.0, 1}, "pseudosphere",
       [&](double t) { return closed_form::pseudosphere_metric(R, M, I, t); },
       [&](double t) { return closed_form::pseudosphere_volume_density(R, M, I, t); }},
      // Negative rotational term: I enters the metric with a minus sign.
      {ManifoldSpec::pseudosphere(R), {M, I, 1.0, -1}, "pseudosphere sig=-1",
       [&](double t) { return closed_form::pseudosphere_metric(R, M, -I, t); },
       [&](double t) { return closed_form::pseudosphere_volume_density(R, M, I, t); }},
      {ManifoldSpec::torus(L, R), {M, I, 1.0, 1}, "torus",
       [&](double t) { return closed_form::torus_metric(L, R, M, I, t); },
       [&](double t) { return closed_form::torus_volume_density(L, R, M, I, t); }},
  };

  for (const Case& c : cases) {
    const Grid grid = make_grid(c.spec, 1000);
    for (double theta : grid.nodes) {
      const std::string at = c.label + " theta=" + fixed(theta, 6);
      const MetricField g = metric_tensor(c.spec, c.rotor, theta);
      worst.update(identity_residual(g.G, g.Ginv), "G*Ginv " + at);
      worst.update(matrix_rel_diff(g.G, c.metric(theta)), "G entries " + at);
      worst.update(std::abs(g.sqrt_abs_det - c.density(theta)) / c.density(theta), "sqrt|det G| " + at);
      // Cofactor expansion, relative to the size of the products it cancels.
      const double k = std::abs(g.G[2][2]);
      const double scale = g.G[0][0] * (std::abs(g.G[1][1]) * k + g.G[1][2] * g.G[1][2]);
      worst.update(std::abs(determinant(g.G) - g.det) / scale, "det G " + at);
      if (c.spec.kind() == ManifoldKind::Torus) {
        worst.update(identity_residual(closed_form::torus_metric(L, R, M, I, theta),
                                       closed_form::torus_metric_inverse(L, R, M, I, theta)),
                     "written torus G*Ginv " + at);
        worst.update(matrix_rel_diff(g.Ginv, closed_form::torus_metric_inverse(L, R, M, I, theta)),
                     "Ginv entries " + at);
      }
    }
  }
  rec.measured = worst.value;
  rec.threshold = 1e-12;
  rec.passed = worst.value <= 1e-12;
  rec.detail = "worst: " + worst.where + ", relative " + sci(worst.value);
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord group_invariance(const CheckOptions& options) {
  CheckRecord rec = make_record(5, "group_invariance",
                  "group kinetic energy: left invariance, right z-rotation invariance, SO(3) bi-invariance for equal "
                  "moments (1e-12), SO(1,2) Casimir bi-invariance (1e-10)");
  const auto t0 = Clock::now();
  std::mt19937_64 rng(options.seed ^ 0x05);
  const double M = 1.7, I = 0.9, R = 1.3, MR2 = M * R * R;
  const double pi = std::numbers::pi;
  Worst so3, so12;

  auto random_angles = [&](double middle) {
    return EulerAngles{uniform(rng, -pi, pi), uniform(rng, -middle, middle), uniform(rng, -pi, pi)};
  };
  auto random_rates = [&] { return BodyRates{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)}; };
  auto energy = [](const Mat3& u, const Mat3& du, VelocityFlavor f, double I1, double I2, double I3) {
    return kinetic_energy_group(co_moving_from_matrices(u, du, f), I1, I2, I3);
  };
  auto scale_of = [](const Mat3& u, const Mat3& du, VelocityFlavor f, double I1, double I2, double I3) {
    const CoMovingVelocity v = co_moving_from_matrices(u, du, f);
    return 0.5 * (std::abs(I1) * v.w1 * v.w1 + std::abs(I2) * v.w2 * v.w2 + std::abs(I3) * v.w3 * v.w3);
  };

  const auto rot = VelocityFlavor::Rotational, lor = VelocityFlavor::Lorentzian;
  for (int trial = 0; trial < 100; ++trial) {
    const std::string tag = " (trial " + std::to_string(trial) + ")";
    {
      const EulerAngles a = random_angles(pi);
      const BodyRates r = random_rates();
      const Mat3 u = euler_matrix(a), du = euler_matrix_rate(a, r);
      const double T = energy(u, du, rot, MR2, MR2, I);
      const double sc = scale_of(u, du, rot, MR2, MR2, I);
      const Mat3 A = euler_matrix(random_angles(pi));
      so3.update(std::abs(energy(A * u, A * du, rot, MR2, MR2, I) - T) / sc, "SO(3) left" + tag);
      const Mat3 B = rotation_z(uniform(rng, -pi, pi));
      so3.update(std::abs(energy(u * B, du * B, rot, MR2, MR2, I) - T) / sc, "SO(3) right z" + tag);
      const double Ts = energy(u, du, rot, I, I, I), scs = scale_of(u, du, rot, I, I, I);
      const Mat3 C = euler_matrix(random_angles(pi));
      so3.update(std::abs(energy(u * C, du * C, rot, I, I, I) - Ts) / scs, "SO(3) right, spherical top" + tag);
      so3.update(std::abs(energy(A * u * C, A * du * C, rot, I, I, I) - Ts) / scs, "SO(3) two-sided" + tag);
    }
    {
      const EulerAngles a = random_angles(1.5);
      const BodyRates r = random_rates();
      const Mat3 u = lorentz_matrix(a), du = lorentz_matrix_rate(a, r);
      const Mat3 A = lorentz_matrix(random_angles(1.0)), B = lorentz_matrix(random_angles(1.0));
      // Physical moments: left invariance and right z-rotations.
      const double T = energy(u, du, lor, MR2, MR2, I), sc = scale_of(u, du, lor, MR2, MR2, I);
      so3.update(std::abs(energy(A * u, A * du, lor, MR2, MR2, I) - T) / sc, "SO(1,2) left" + tag);
      const Mat3 Z = rotation_z(uniform(rng, -pi, pi));
      so3.update(std::abs(energy(u * Z, du * Z, lor, MR2, MR2, I) - T) / sc, "SO(1,2) right z" + tag);
      // Casimir moments (I, I, -I): invariant on both sides.
      const double Tc = energy(u, du, lor, I, I, -I), scc = scale_of(u, du, lor, I, I, -I);
      so12.update(std::abs(energy(u * B, du * B, lor, I, I, -I) - Tc) / scc, "SO(1,2) Casimir right" + tag);
      so12.update(std::abs(energy(A * u * B, A * du * B, lor, I, I, -I) - Tc) / scc, "SO(1,2) Casimir two-sided" + tag);
    }
  }
  rec.measured = std::max(so3.value, so12.value / 100.0);
  rec.threshold = 1e-12;
  rec.passed = so3.value <= 1e-12 && so12.value <= 1e-10;
  rec.detail = "worst 1e-12 case: " + so3.where + " " + sci(so3.value) + "; worst Casimir case: " + so12.where + " " +
               sci(so12.value);
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord kinetic_energy_equality(const CheckOptions& options) {
  CheckRecord rec = make_record(6, "kinetic_energy_equality",
                  "coordinate kinetic energy equals the group form with moments (MR^2, MR^2, I) on 1000 random states "
                  "per geometry (1e-12)");
  const auto t0 = Clock::now();
  std::mt19937_64 rng(options.seed ^ 0x06);
  const double M = 1.7, I = 0.9, R = 1.3, MR2 = M * R * R;
  const double pi = std::numbers::pi;
  Worst worst;

  for (ManifoldKind kind : {ManifoldKind::Sphere, ManifoldKind::Pseudosphere}) {
    const bool sph = kind == ManifoldKind::Sphere;
    const ManifoldSpec spec = sph ? ManifoldSpec::sphere(R) : ManifoldSpec::pseudosphere(R);
    const RotorParams rotor{M, I, 1.0, 1};
    const VelocityFlavor flavor = sph ? VelocityFlavor::Rotational : VelocityFlavor::Lorentzian;
    for (int i = 0; i < 1000; ++i) {
      const double theta = sph ? uniform(rng, 1e-3, pi - 1e-3) : uniform(rng, 1e-3, 4.0);
      const EulerAngles a{uniform(rng, -pi, pi), theta, uniform(rng, -pi, pi)};
      const BodyRates r{uniform(rng, -2, 2), uniform(rng, -2, 2), uniform(rng, -2, 2)};
      const Vec3 rates{r.dtheta, r.dphi, r.dpsi};
      const double T_coord = sph ? closed_form::sphere_kinetic_energy(R, M, I, theta, rates)
                                 : closed_form::pseudosphere_kinetic_energy(R, M, I, theta, rates);
      const double T_group = kinetic_energy_group(co_moving_velocity(a, r, flavor), MR2, MR2, I);
      const double T_metric = kinetic_energy(spec, rotor, theta, rates);
      const std::string at = std::string(to_string(kind)) + " theta=" + fixed(theta, 6);
      worst.update(std::abs(T_group - T_coord) / T_coord, "group vs coordinate, " + at);
      worst.update(std::abs(T_metric - T_coord) / T_coord, "metric vs coordinate, " + at);
    }
  }
  rec.measured = worst.value;
  rec.threshold = 1e-12;
  rec.passed = worst.value <= 1e-12;
  rec.detail = "worst: " + worst.where + ", relative " + sci(worst.value);
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord classical_conservation(const CheckOptions&) {
  CheckRecord rec = make_record(7, "classical_conservation",
                  "torus geodesic, 1e5 implicit-midpoint steps: energy drift <= 1e-8, p_phi/p_psi drift <= 1e-10, "
                  "halving dt reduces drift by [3.5, 4.5], runtime < 5 s");
  const auto t0 = Clock::now();
  const ManifoldSpec spec = ManifoldSpec::torus(3.0, 1.0);
  const RotorParams rotor{1.0, 1.0, 1.0, 1};
  State s0;
  s0.q = {0.3, 0.0, 0.0};
  s0.p = {0.8, 3.0, 0.5};
  const double dt = 5e-4;
  const std::size_t steps = 100000;
  IntegratorOptions opt;
  opt.record_every = 10;

  const TrajectoryRecord fine = integrate(spec, rotor, Potential::zero(), s0, dt, steps, opt);
  const double elapsed = seconds_since(t0);
  const TrajectoryRecord coarse = integrate(spec, rotor, Potential::zero(), s0, 2.0 * dt, steps / 2, opt);

  const double drift = fine.max_abs_energy_drift();
  const double ratio = coarse.max_abs_energy_drift() / drift;
  const double momentum = std::max(fine.max_abs_p_phi_drift(), fine.max_abs_p_psi_drift());
  rec.measured = drift;
  rec.threshold = 1e-8;
  rec.passed = drift <= 1e-8 && momentum <= 1e-10 && ratio >= 3.5 && ratio <= 4.5 && elapsed < 5.0;
  rec.detail = "dt=" + fixed(dt) + ", energy drift " + sci(drift) + ", momentum drift " + sci(momentum) +
               ", drift ratio (2dt : dt) " + fixed(ratio, 5) + ", 1e5 steps in " + fixed(elapsed, 3) + " s";
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord hamilton_jacobi_consistency(const CheckOptions&) {
  CheckRecord rec = make_record(8, "hamilton_jacobi_consistency",
                  "bound-orbit theta period from quadrature equals the integrated trajectory period to 1e-6 on the "
                  "torus, sphere and pseudosphere (cosine well)");
  const auto t0 = Clock::now();
  const RotorParams rotor{1.0, 1.0, 1.0, 1};
  struct Case {
    std::string label;
    ManifoldSpec spec;
    Potential V;
    State s0;
  };
  const std::vector<Case> cases{
      {"torus", ManifoldSpec::torus(3.0, 1.0), Potential::zero(), State{{0.2, 0.0, 0.0}, {0.5, 3.0, 0.3}}},
      {"sphere", ManifoldSpec::sphere(1.0), Potential::zero(), State{{1.2, 0.0, 0.0}, {0.4, 1.0, 0.0}}},
      {"pseudosphere", ManifoldSpec::pseudosphere(1.0), Potential::cosine_well(1.0),
       State{{1.0, 0.0, 0.0}, {0.3, 1.0, 0.5}}},
  };
  const double dt = 5e-4;
  Worst worst;
  std::ostringstream detail;
  for (const Case& c : cases) {
    const double E = hamiltonian(c.spec, rotor, c.V, c.s0);
    const RadialMomentum pm(c.spec, rotor, c.V, E, c.s0.p[1], c.s0.p[2]);
    double period = std::numeric_limits<double>::quiet_NaN();
    for (const AllowedInterval& iv : pm.allowed_intervals())
      if (iv.bounded() && c.s0.q[0] >= iv.lo && c.s0.q[0] <= iv.hi) period = pm.period(iv);
    if (!std::isfinite(period)) {
      worst.update(std::numeric_limits<double>::infinity(), c.label + ": no bounded interval");
      continue;
    }
    const auto steps = static_cast<std::size_t>(std::ceil(20.0 * period / dt));
    const double measured = measured_theta_period(integrate(c.spec, rotor, c.V, c.s0, dt, steps));
    const double rel = std::abs(measured - period) / period;
    worst.update(std::isfinite(rel) ? rel : std::numeric_limits<double>::infinity(), c.label);
    detail << c.label << ": quadrature " << fixed(period, 12) << ", trajectory " << fixed(measured, 12) << " ("
           << sci(rel) << "); ";
  }
  rec.measured = worst.value;
  rec.threshold = 1e-6;
  rec.passed = worst.value <= 1e-6;
  rec.detail = detail.str() + "worst: " + worst.where;
  rec.seconds = seconds_since(t0);
  return rec;
}

CheckRecord hermiticity_orthogonality(const CheckOptions&) {
  CheckRecord rec = make_record(9, "hermiticity_orthogonality",
                  "radial matrices exactly symmetric, eigenfunctions w-orthonormal to 1e-8, ground state ~ theta^2 at "
                  "the pole for |m-s| = 2");
  const auto t0 = Clock::now();
  struct Case {
    std::string label;
    ManifoldSpec spec;
    RotorParams rotor;
    int m, s;
    Potential V;
    std::size_t n;
  };
  const std::vector<Case> cases{
      {"sphere (1,1)", ManifoldSpec::sphere(1.0), {1.0, 0.5, 1.0, 1}, 1, 1, Potential::zero(), 1000},
      {"pseudosphere (1,0) cosine well", ManifoldSpec::pseudosphere(1.0), {1.0, 1.0, 1.0, 1}, 1, 0,
       Potential::cosine_well(1.0), 1000},
      {"pseudosphere sig=-1 (1,1) cosine well", ManifoldSpec::pseudosphere(1.0), {1.0, 1.0, 1.0, -1}, 1, 1,
       Potential::cosine_well(1.0), 1000},
      {"torus (1,1)", ManifoldSpec::torus(3.0, 1.0), {1.0, 1.0, 1.0, 1}, 1, 1, Potential::zero(), 512},
  };
  double asymmetry = 0.0, ortho = 0.0;
  std::string ortho_where;
  for (const Case& c : cases) {
    const Grid grid = make_grid(c.spec, c.n);
    const Matrix a = discretize(radial_problem(c.spec, c.rotor, c.m, c.s, c.V), grid).to_dense();
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < i; ++j) asymmetry = std::max(asymmetry, std::abs(a(i, j) - a(j, i)));

    SolveOptions opt;
    opt.k = 6;
    opt.richardson = false;
    const SpectrumResult res = solve_spectrum(c.spec, c.rotor, c.m, c.s, c.V, grid, opt);
    std::vector<double> w(grid.n);
    for (std::size_t i = 0; i < grid.n; ++i) w[i] = profile(c.spec, grid.nodes[i]).h * grid.spacing;
    for (std::size_t p = 0; p < opt.k; ++p)
      for (std::size_t q = 0; q <= p; ++q) {
        double sum = 0.0;
        for (std::size_t i = 0; i < grid.n; ++i) sum += res.eigenfunctions(i, p) * res.eigenfunctions(i, q) * w[i];
        const double defect = std::abs(sum - (p == q ? 1.0 : 0.0));
        if (defect > ortho) {
          ortho = defect;
          ortho_where = c.label;
        }
      }
  }

  // Regular solution near the pole: f ~ theta^|m - s|.
  const ManifoldSpec sphere = ManifoldSpec::sphere(1.0);
  const RotorParams rotor{1.0, 1.0, 1.0, 1};
  const double C = 4.0;
  double pole_ratio = 0.0;
  SolveOptions one;
  one.k = 1;
  one.richardson = false;
  for (auto [m, s] : {std::pair{2, 0}, std::pair{0, 2}, std::pair{3, 1}}) {
    const Grid grid = make_grid(sphere, 2000);
    const SpectrumResult res = solve_spectrum(sphere, rotor, m, s, Potential::zero(), grid, one);
    double fmax = 0.0;
    for (std::size_t i = 0; i < grid.n; ++i) fmax = std::max(fmax, std::abs(res.eigenfunctions(i, 0)));
    const double theta0 = grid.nodes.front();
    pole_ratio = std::max(pole_ratio, std::abs(res.eigenfunctions(0, 0)) / fmax / (C * theta0 * theta0));
  }

  rec.measured = ortho;
  rec.threshold = 1e-8;
  rec.passed = asymmetry == 0.0 && ortho <= 1e-8 && pole_ratio <= 1.0;
  rec.detail = "max |A - A^T| = " + sci(asymmetry) + "; orthonormality defect " + sci(ortho) + " (" + ortho_where +
               "); |f(theta0)|/max|f| / (4 theta0^2) = " + fixed(pole_ratio, 4);
  rec.seconds = seconds_since(t0);
  return rec;
}

std::vector<CheckRecord> run_checks(const CheckOptions& options, const std::vector<int>& ids) {
  using Fn = CheckRecord (*)(const CheckOptions&);
  static const Fn table[kCheckCount] = {sphere_resonance_spectrum, symmetric_top_spectrum, operator_transcription,
                                        metric_identities,         group_invariance,       kinetic_energy_equality,
                                        classical_conservation,    hamilton_jacobi_consistency,
                                        hermiticity_orthogonality};
  static const char* names[kCheckCount] = {
      "sphere_resonance_spectrum", "symmetric_top_spectrum",      "operator_transcription",
      "metric_identities",         "group_invariance",            "kinetic_energy_equality",
      "classical_conservation",    "hamilton_jacobi_consistency", "hermiticity_orthogonality"};

  std::vector<int> order = ids;
  if (order.empty())
    for (int i = 1; i <= kCheckCount; ++i) order.push_back(i);
  std::sort(order.begin(), order.end());
  order.erase(std::unique(order.begin(), order.end()), order.end());

  std::vector<CheckRecord> out;
  for (int id : order) {
    if (id < 1 || id > kCheckCount) throw ConfigError("no check with id " + std::to_string(id));
    const auto t0 = Clock::now();
    try {
      out.push_back(table[id - 1](options));
    } catch (const std::exception& e) {
      CheckRecord rec;
      rec.id = id;
      rec.name = names[id - 1];
      rec.passed = false;
      rec.measured = std::numeric_limits<double>::quiet_NaN();
      rec.detail = std::string("exception: ") + e.what();
      rec.seconds = seconds_since(t0);
      out.push_back(rec);
    }
  }
  return out;
}

}  // namespace rotorlab::checks
