"""Compiled 2D loops for the solver and the ROF reference solve.

Arithmetic mirrors the numpy compositions in :mod:`pdtv.operators` and
:mod:`pdtv.projection`; ``tests/test_kernels.py`` checks the agreement.
Loops are sequential so results are bitwise reproducible.
"""

import math

import numpy as np
from numba import njit

ROF_TERM = 0
SEG_TERM = 1
SLACK = 1.0 + 4.0 * np.finfo(np.float64).eps


@njit(cache=True)
def _div2d(xi, out):
    N, M = out.shape
    for i in range(N):
        for j in range(M):
            d = 0.0
            if i < N - 1:
                d += xi[i, j, 0]
            if i > 0:
                d -= xi[i - 1, j, 0]
            if j < M - 1:
                d += xi[i, j, 1]
            if j > 0:
                d -= xi[i, j - 1, 1]
            out[i, j] = d


@njit(cache=True)
def pd_step_2d(u, xi, dt, dtau, staggered, g, weighted, mode, a, b, lam,
               clamp, seeds, u_new, xi_new, dt_u, dt_xi):
    """One fused primal-dual step on a 2D grid, writing into the output buffers.

    ``mode`` selects the data term: ROF uses ``a = f`` and ``lam``; SEG uses
    ``a = f_plus``, ``b = f_minus`` and ``seeds`` (1 = pin0, 2 = pin1).
    """
    N, M = u.shape
    for i in range(N):
        for j in range(M):
            g0 = u[i + 1, j] - u[i, j] if i < N - 1 else 0.0
            g1 = u[i, j + 1] - u[i, j] if j < M - 1 else 0.0
            x0 = xi[i, j, 0] + dtau * g0
            x1 = xi[i, j, 1] + dtau * g1
            if staggered:
                r0 = 1.0
                r1 = 1.0
                if weighted:
                    r0 = 0.5 * (g[i, j] + g[i + 1, j]) if i < N - 1 else g[i, j]
                    r1 = 0.5 * (g[i, j] + g[i, j + 1]) if j < M - 1 else g[i, j]
                if x0 > r0:
                    x0 = r0
                elif x0 < -r0:
                    x0 = -r0
                if x1 > r1:
                    x1 = r1
                elif x1 < -r1:
                    x1 = -r1
            else:
                r = math.sqrt(x0 * x0 + x1 * x1)
                if weighted:
                    r = r / g[i, j]
                if r > SLACK:
                    x0 = x0 / r
                    x1 = x1 / r
            xi_new[i, j, 0] = x0
            xi_new[i, j, 1] = x1
            dt_xi[i, j, 0] = (x0 - xi[i, j, 0]) / dtau
            dt_xi[i, j, 1] = (x1 - xi[i, j, 1]) / dtau
    for i in range(N):
        for j in range(M):
            d = 0.0
            if i < N - 1:
                d += xi_new[i, j, 0]
            if i > 0:
                d -= xi_new[i - 1, j, 0]
            if j < M - 1:
                d += xi_new[i, j, 1]
            if j > 0:
                d -= xi_new[i, j - 1, 1]
            uij = u[i, j]
            if mode == ROF_TERM:
                p = lam * (uij - a[i, j])
            else:
                p = 0.0
                if uij > 0.0:
                    p += a[i, j]
                elif uij < 0.0:
                    p -= a[i, j]
                if uij < 1.0:
                    p -= b[i, j]
                elif uij > 1.0:
                    p += b[i, j]
            v = uij + dt * (d - p)
            if clamp:
                if v < 0.0:
                    v = 0.0
                elif v > 1.0:
                    v = 1.0
            if mode == SEG_TERM:
                if seeds[i, j] == 2:
                    v = 1.0
                elif seeds[i, j] == 1:
                    v = 0.0
            u_new[i, j] = v
            dt_u[i, j] = (v - uij) / dt


@njit(cache=True)
def fista_dual_rof_2d(lf, staggered, iters, step):
    """Accelerated projected gradient on ``|div xi + lf|^2 / 2`` over the unit dual ball."""
    N, M = lf.shape
    xi = np.zeros((N, M, 2))
    y = np.zeros((N, M, 2))
    s = np.empty((N, M))
    t = 1.0
    for _ in range(iters):
        _div2d(y, s)
        for i in range(N):
            for j in range(M):
                s[i, j] += lf[i, j]
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        mom = (t - 1.0) / t_new
        for i in range(N):
            for j in range(M):
                g0 = s[i + 1, j] - s[i, j] if i < N - 1 else 0.0
                g1 = s[i, j + 1] - s[i, j] if j < M - 1 else 0.0
                x0 = y[i, j, 0] + step * g0
                x1 = y[i, j, 1] + step * g1
                if staggered:
                    x0 = min(max(x0, -1.0), 1.0)
                    x1 = min(max(x1, -1.0), 1.0)
                else:
                    r = math.sqrt(x0 * x0 + x1 * x1)
                    if r > SLACK:
                        x0 = x0 / r
                        x1 = x1 / r
                y[i, j, 0] = x0 + mom * (x0 - xi[i, j, 0])
                y[i, j, 1] = x1 + mom * (x1 - xi[i, j, 1])
                xi[i, j, 0] = x0
                xi[i, j, 1] = x1
        t = t_new
    return xi


@njit(cache=True)
def pd_steps_2d(u, xi, dt, dtau, staggered, g, weighted, mode, a, b, lam,
                clamp, seeds, nsteps):
    """Run ``nsteps >= 1`` fused steps; returns ``(u, xi, u_prev, dt_u, dt_xi)``."""
    u_a = u.copy()
    xi_a = xi.copy()
    u_b = np.empty_like(u)
    xi_b = np.empty_like(xi)
    dt_u = np.empty_like(u)
    dt_xi = np.empty_like(xi)
    for _ in range(nsteps):
        pd_step_2d(u_a, xi_a, dt, dtau, staggered, g, weighted, mode, a, b, lam,
                   clamp, seeds, u_b, xi_b, dt_u, dt_xi)
        u_a, u_b = u_b, u_a
        xi_a, xi_b = xi_b, xi_a
    return u_a, xi_a, u_b, dt_u, dt_xi
