import json
import math
import os
import subprocess

import numpy as np
import pytest

import rotorlab as rl


def test_legendre_spectrum():
    res = rl.solve_spectrum(rl.ManifoldSpec.sphere(1.0), rl.RotorParams(M=1.0, I=1.0), k=6, n=2000)
    expected = np.array([j * (j + 1) for j in range(6)])
    assert np.all(np.abs(res.eps - expected) <= 1e-4 * np.maximum(1.0, expected))
    assert res.eigenfunctions.shape == (2000, 6)
    assert len(res.convergence) == 6
    assert not res.scattering


def test_symmetric_top_and_scan_symmetry():
    spec = rl.ManifoldSpec.sphere(1.0)
    rotor = rl.RotorParams(I=0.5)
    table = rl.spectrum_scan(spec, rotor, (-1, 1), (-1, 1), n=800, k=3, richardson=False, threads=2)
    assert len(table) == 9
    top = table[(1, 1)].eps
    assert top[0] == pytest.approx(1 * 2 - 1 + 2, rel=1e-4)
    for (m, s), cell in table.items():
        np.testing.assert_allclose(cell.eps, table[(-m, -s)].eps, rtol=1e-12)


def test_metric_and_coefficients():
    g = rl.metric_tensor(rl.ManifoldSpec.torus(3.0, 1.0), rl.RotorParams(M=1.0, I=2.0), math.pi / 2)
    np.testing.assert_allclose(g["G"], [[1, 0, 0], [0, 11, 2], [0, 2, 2]], atol=1e-14)
    np.testing.assert_allclose(g["G"] @ g["Ginv"], np.eye(3), atol=1e-12)
    a = rl.laplacian_coefficients(rl.ManifoldSpec.torus(3.0, 1.0), rl.RotorParams(), math.pi / 2)
    assert a["b_t"] == pytest.approx(-1 / 3)
    assert a["a_ps"] == pytest.approx(-2 / 9)
    with pytest.raises(rl.SingularMetric):
        rl.metric_tensor(rl.ManifoldSpec.sphere(1.0), rl.RotorParams(), 0.0)
    with pytest.raises(ValueError):
        rl.ManifoldSpec.sphere(-1.0)


def test_groups():
    u = rl.euler_matrix(0.3, 1.1, -0.4)
    np.testing.assert_allclose(u.T @ u, np.eye(3), atol=1e-12)
    eta = np.diag([1.0, 1.0, -1.0])
    l = rl.lorentz_matrix(0.3, 0.9, -0.4)
    np.testing.assert_allclose(l.T @ eta @ l, eta, atol=1e-12)
    assert rl.co_moving_velocity((0.0, math.pi / 2, 0.0), (0.7, -1.1, 2.5)) == pytest.approx((-1.1, 0.7, 2.5))


def test_trajectory_and_hamilton_jacobi():
    spec = rl.ManifoldSpec.torus(3.0, 1.0)
    rotor = rl.RotorParams(M=1.0, I=2.0)
    pot = rl.Potential.zero()
    q0, p0 = (0.2, 0.0, 0.0), (0.5, 3.0, 0.3)
    traj = rl.integrate(spec, rotor, pot, q0, p0, dt=1e-3, steps=20000, record_every=10)
    assert traj["status"] == "ok"
    assert np.max(np.abs(traj["energy_drift"])) < 1e-7
    assert np.max(np.abs(traj["p_phi_drift"])) <= 1e-10

    E = rl.hamiltonian(spec, rotor, pot, q0, p0)
    hj = rl.RadialMomentum(spec, rotor, pot, E, mu=p0[1], sigma=p0[2])
    (iv,) = hj.allowed_intervals
    assert iv.bounded
    theta = traj["q"][:, 0]
    assert theta.min() == pytest.approx(iv.lo, abs=1e-4)
    assert theta.max() == pytest.approx(iv.hi, abs=1e-4)
    assert hj.period(iv) == pytest.approx(14.6997724, rel=1e-6)

    with pytest.raises(rl.NoAllowedRegion):
        rl.RadialMomentum(rl.ManifoldSpec.sphere(1.0), rl.RotorParams(), pot, 0.1, mu=3.0)


def test_pole_approach_returns_partial_record():
    traj = rl.integrate(rl.ManifoldSpec.sphere(1.0), rl.RotorParams(), rl.Potential.zero(),
                        (0.5, 0.0, 0.0), (1.0, 0.0, 0.0), dt=1e-3, steps=100000)
    assert traj["status"] == "pole_approach"
    assert len(traj["t"]) > 100


def test_checks_subset():
    records = rl.run_checks([3, 4, 5])
    assert [r["id"] for r in records] == [3, 4, 5]
    assert all(r["passed"] for r in records)
    bad = rl.run_checks([3], "a_pp")
    assert not bad[0]["passed"]


@pytest.mark.skipif("ROTORLAB_CLI" not in os.environ, reason="command-line tool path not provided")
def test_cli_json_spectrum():
    out = subprocess.run([os.environ["ROTORLAB_CLI"], "spectrum", "--manifold", "torus", "--k", "1", "--n", "128",
                          "--json"], capture_output=True, text=True, check=True)
    doc = json.loads(out.stdout)
    assert doc["config"]["manifold"]["kind"] == "torus"
    assert abs(doc["result"]["eigenvalues_dimensionless"][0]) < 1e-8
