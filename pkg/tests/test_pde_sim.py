import math

import numpy as np
import pytest

from pdtv import pde_sim
from pdtv.pde_sim import ConfigurationError, analytic_oscillation, simulate_1d


def test_analytic_examples():
    n = 16
    u, xi = analytic_oscillation(0.0, n)
    assert u.shape == (1, n) and xi.shape == (1, n, 1)
    assert not np.any(u)
    np.testing.assert_allclose(xi[0, :, 0], 0.5 * np.sin(np.pi * np.arange(n) / n), rtol=1e-15)
    _, xi_half = analytic_oscillation(0.5, n)
    assert np.max(np.abs(xi_half)) < 1e-16
    for a, b in zip(analytic_oscillation(0.3, n), analytic_oscillation(2.3, n)):
        np.testing.assert_allclose(a, b, atol=1e-14)


def test_zero_data_stays_zero():
    traj = simulate_1d(32, 0.5 / 32, 100)
    assert not np.any(traj.u) and not np.any(traj.xi)
    assert not np.any(traj.u_norm) and not np.any(traj.tv)


def test_cfl_violation():
    with pytest.raises(ConfigurationError):
        simulate_1d(64, 0.5 / 64 * 1.01, 10)
    with pytest.raises(ConfigurationError):
        simulate_1d(64, 0.0, 10)


def test_convergence_order():
    errs, orders = pde_sim.convergence_study((64, 128, 256))
    assert np.all(np.diff(errs) < 0)
    assert np.all(orders >= 0.9)


def _analytic_run(n=128):
    u0, xi0 = analytic_oscillation(0.0, n)
    return simulate_1d(n, 0.5 / n, int(round(2.0 / (0.5 / n))), u0, xi0)


def test_oscillation_does_not_decay():
    traj = _analytic_run()
    assert pde_sim.oscillation_floor(traj) >= 0.2
    assert np.max(np.abs(traj.xi)) <= 0.6


def test_quadratic_energy_is_conserved():
    traj = _analytic_run()
    mean = traj.l2_energy.mean()
    assert mean == pytest.approx(1.0 / 8.0, rel=0.02)
    assert np.all(np.abs(traj.l2_energy - mean) <= 0.05 * mean)


def test_total_variation_follows_closed_form():
    # sum |u_x| of u = cos(pi x) sin(pi t) / 2 over [0, 1] is |sin(pi t)|
    traj = _analytic_run()
    np.testing.assert_allclose(traj.tv, np.abs(np.sin(np.pi * traj.t)), atol=2e-3)


def test_floor_needs_window():
    u0, xi0 = analytic_oscillation(0.0, 32)
    short = simulate_1d(32, 0.5 / 32, 10, u0, xi0)
    assert pde_sim.oscillation_floor(short) is None


def test_trajectory_csv(tmp_path):
    u0, xi0 = analytic_oscillation(0.0, 16)
    traj = simulate_1d(16, 0.5 / 16, 8, u0, xi0, record_every=4)
    p = tmp_path / "traj.csv"
    pde_sim.write_trajectory_csv(traj, p)
    lines = p.read_text().splitlines()
    assert lines[0] == "t,u_norm,tv,l2_energy,sup_error"
    assert len(lines) == 4
    assert float(lines[-1].split(",")[0]) == pytest.approx(8 * 0.5 / 16)
    assert math.isclose(float(lines[1].split(",")[3]), traj.l2_energy[0])
