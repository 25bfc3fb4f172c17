"""1D primal-dual flow for the pure total variation on [0, 1].

With no data term the flow ``u_t = xi_x``, ``xi_t = u_x - dI(xi)`` admits the
non-decaying solution ``u = cos(pi x) sin(pi t) / 2``,
``xi = sin(pi x) cos(pi t) / 2``: the dual never reaches the unit bound and
the system is a wave equation.  This module integrates it on a staggered
grid (``u`` at cell centres, ``xi`` at faces) and compares with the closed
form.
"""

import csv
import math
from dataclasses import dataclass

import numpy as np

CFL = 0.5


class ConfigurationError(ValueError):
    """Invalid simulation parameters (e.g. a time step above the CFL limit)."""


def analytic_oscillation(t, n):
    """Closed-form solution sampled on an ``n``-cell grid.

    Returns
    -------
    u : ndarray, shape (1, n)
        ``cos(pi x) sin(pi t) / 2`` at centres ``x_k = (k + 1/2) / n``.
    xi : ndarray, shape (1, n, 1)
        ``sin(pi x) cos(pi t) / 2`` at faces ``x_k = k / n``; the face
        ``x = 1`` is implicit and zero.
    """
    if n < 2:
        raise ConfigurationError("need n >= 2")
    k = np.arange(n)
    xc = (k + 0.5) / n
    xf = k / n
    u = 0.5 * np.cos(np.pi * xc) * math.sin(math.pi * t)
    xi = 0.5 * np.sin(np.pi * xf) * math.cos(math.pi * t)
    return u[None, :], xi[None, :, None]


def face_grad(u, h):
    """``(u_k - u_{k-1}) / h`` at interior faces ``k = 1..n-1``; zero at face 0."""
    g = np.zeros_like(u)
    g[1:] = (u[1:] - u[:-1]) / h
    return g


def face_div(xi, h):
    """``(xi_{k+1} - xi_k) / h`` per cell, with both boundary faces treated as zero."""
    x = xi.copy()
    x[0] = 0.0
    ext = np.append(x, 0.0)
    return (ext[1:] - ext[:-1]) / h


@dataclass
class Trajectory:
    """Sampled run: times, the fields at each time, and the final state."""

    t: np.ndarray
    u_norm: np.ndarray
    tv: np.ndarray
    l2_energy: np.ndarray
    sup_error: np.ndarray
    u: np.ndarray
    xi: np.ndarray


def _check_step(n, dt):
    if n < 2:
        raise ConfigurationError("need n >= 2")
    if not 0 < dt <= CFL / n * (1 + 1e-12):
        raise ConfigurationError(f"time step {dt} violates CFL: need 0 < dt <= {CFL}/n = {CFL / n}")


def simulate_1d(n, dt, steps, u0=None, xi0=None, record_every=1):
    """Integrate the 1D flow with symplectic Euler on a staggered grid.

    Each step is ``xi <- clip(xi + dt * u_x, -1, 1)`` then
    ``u <- u + dt * xi_x`` with grid spacing ``h = 1/n``.  Grid norms are
    scaled by ``sqrt(h)`` so they approximate L2 norms on [0, 1].

    Parameters
    ----------
    n : int
        Number of cells.
    dt : float
        Time step, at most ``0.5 / n``.
    steps : int
        Number of steps.
    u0, xi0 : array_like, optional
        Initial fields (shape ``(n,)``, ``(1, n)`` or ``(1, n, 1)``); zero by default.
    record_every : int
        Sampling stride for the recorded diagnostics (time 0 is always recorded).

    Returns
    -------
    Trajectory
    """
    _check_step(n, dt)
    if steps < 0:
        raise ConfigurationError("steps must be >= 0")
    h = 1.0 / n
    u = np.zeros(n) if u0 is None else np.asarray(u0, dtype=np.float64).reshape(n).copy()
    xi = np.zeros(n) if xi0 is None else np.asarray(xi0, dtype=np.float64).reshape(n).copy()
    xi[0] = 0.0
    rows = []

    def record(k):
        t = k * dt
        ua, xa = analytic_oscillation(t, n)
        err = max(np.max(np.abs(u - ua[0])), np.max(np.abs(xi - xa[0, :, 0])))
        rows.append((t, math.sqrt(h) * np.linalg.norm(u), h * np.sum(np.abs(face_grad(u, h))),
                     h * (u @ u + xi @ xi), err))

    record(0)
    for k in range(1, steps + 1):
        xi = np.clip(xi + dt * face_grad(u, h), -1.0, 1.0)
        u = u + dt * face_div(xi, h)
        if k % record_every == 0 or k == steps:
            record(k)
    cols = np.array(rows).T
    return Trajectory(t=cols[0], u_norm=cols[1], tv=cols[2], l2_energy=cols[3],
                      sup_error=cols[4], u=u, xi=xi)


def sup_error_at(n, t_end=1.0, cfl=CFL):
    """Sup-norm error against the closed form after integrating to ``t_end`` with ``dt = cfl/n``."""
    dt = cfl / n
    steps = int(round(t_end / dt))
    u0, xi0 = analytic_oscillation(0.0, n)
    traj = simulate_1d(n, dt, steps, u0, xi0, record_every=max(steps, 1))
    return traj.sup_error[-1]


def convergence_study(ns=(64, 128, 256), t_end=1.0):
    """Errors and observed orders ``log2(e_k / e_{k+1})`` for successive doublings of ``n``."""
    errs = np.array([sup_error_at(n, t_end) for n in ns])
    orders = np.log(errs[:-1] / errs[1:]) / np.log(np.asarray(ns[1:]) / np.asarray(ns[:-1]))
    return errs, orders


def oscillation_floor(traj, window=(1.4, 1.6), period=(0.0, 2.0)):
    """``min |u|`` over ``window`` divided by ``max |u|`` over ``period``; ``None`` if not covered."""
    t = traj.t
    in_win = (t >= window[0] - 1e-12) & (t <= window[1] + 1e-12)
    in_per = (t >= period[0] - 1e-12) & (t <= period[1] + 1e-12)
    if not np.any(in_win) or t[-1] < window[1] - 1e-12:
        return None
    return float(traj.u_norm[in_win].min() / traj.u_norm[in_per].max())


def write_trajectory_csv(traj, path):
    """CSV with columns ``t, u_norm, tv, l2_energy, sup_error``."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["t", "u_norm", "tv", "l2_energy", "sup_error"])
        for row in zip(traj.t, traj.u_norm, traj.tv, traj.l2_energy, traj.sup_error):
            w.writerow([repr(float(v)) for v in row])
