"""Discrete energies, a posteriori bounds and reference solvers.

Two computable bounds are provided for the explicit primal-dual scheme.
With ``dt_u = (u[n+1] - u[n]) / dt`` and ``dt_xi = (xi[n+1] - xi[n]) / dtau``:

* ROF, L2 distance to the minimiser::

      |u[n] - u*| <= (a + sqrt(a**2 + 8 R |dt_xi| / lam)) / 2,   a = |dt_u| / lam

* any data term, energy gap::

      |J(u[n]) - J(u*)| <= 2 R |dt_xi| + |dt_u| * D

where ``D`` bounds ``|u[n] - u*|`` and ``R`` is the L2 norm of the dual
ball radius field (``sqrt(N*M)`` for the unit cell-wise ball).
"""

import csv
import math
from dataclasses import dataclass, fields
from typing import Optional

import numpy as np

from . import _kernels, grid
from .grid import DimensionError
from .operators import SchemeKind, as_scheme, div, grad
from .projection import ball_radius, face_weights, project


@dataclass
class Certificate:
    """Bounds logged for iterate ``iter``.

    ``dist_bound`` is the bound on ``|u[iter] - u*|`` that enters the energy
    gap and ``dist_rule`` says where it came from: ``"box"`` (clamped to
    [0, 1]), ``"l2_bound"`` (chained from the ROF bound) or ``"range"``
    (unclamped segmentation, not rigorous).
    """

    iter: int
    norm_dt_u: float
    norm_dt_xi: float
    l2_bound: Optional[float]
    energy_gap_bound: float
    energy: float
    dist_bound: float
    dist_rule: str
    ball_norm: float
    true_error: Optional[float] = None
    energy_error: Optional[float] = None


def total_variation(u, scheme=SchemeKind.STANDARD, g=None):
    """Discrete (weighted) total variation.

    Standard scheme: ``sum g * |grad u|`` with the Euclidean norm per cell.
    Staggered scheme: ``sum g_face * |grad_k u|`` over faces, the support
    function of the face-wise dual box.
    """
    scheme = as_scheme(scheme)
    du = grad(u, scheme)
    if scheme is SchemeKind.STAGGERED:
        w = 1.0 if g is None else face_weights(g)
        return float(np.sum(w * np.abs(du)))
    mags = grid.pointwise_euclidean_norms(du)
    if g is not None:
        mags = g * mags
    return float(np.sum(mags))


def energy_rof(u, f, lam, scheme=SchemeKind.STANDARD):
    """``TV(u) + lam/2 * sum (u - f)**2``."""
    u = np.asarray(u, dtype=np.float64)
    f = np.asarray(f, dtype=np.float64)
    if u.shape != f.shape:
        raise DimensionError(f"shape mismatch {u.shape} vs {f.shape}")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    r = (u - f).ravel()
    return total_variation(u, scheme) + 0.5 * lam * float(np.dot(r, r))


def energy_seg(u, f_plus, f_minus, g=None, scheme=SchemeKind.STANDARD):
    """``TV_g(u) + sum f_plus |u| + sum f_minus |1 - u|``.

    Seeds are enforced exactly by the solver, so the Dirichlet penalty is 0.
    """
    u = np.asarray(u, dtype=np.float64)
    f_plus = np.asarray(f_plus, dtype=np.float64)
    f_minus = np.asarray(f_minus, dtype=np.float64)
    if u.shape != f_plus.shape or u.shape != f_minus.shape:
        raise DimensionError("u, f_plus and f_minus must share a shape")
    if g is not None:
        g = np.asarray(g, dtype=np.float64)
        if g.shape != u.shape:
            raise DimensionError("g must match u")
        if np.any(g <= 0):
            raise ValueError("g must be positive")
    return (total_variation(u, scheme, g)
            + float(np.sum(f_plus * np.abs(u)))
            + float(np.sum(f_minus * np.abs(1.0 - u))))


def energy_of(u, spec):
    """Energy of ``u`` for the problem described by ``spec``."""
    term = spec.data_term
    if spec.is_rof:
        return energy_rof(u, term.f, term.lam, spec.scheme)
    return energy_seg(u, term.f_plus, term.f_minus, term.g, spec.scheme)


def rof_l2_bound(norm_dt_u, norm_dt_xi, lam, N, M, ball_norm=None):
    """A posteriori bound on ``|u[n] - u*|`` for the ROF problem.

    ``ball_norm`` replaces ``sqrt(N*M)`` when the dual ball is not the unit
    cell-wise ball (staggered or weighted constraint).
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")
    if norm_dt_u < 0 or norm_dt_xi < 0:
        raise ValueError("norms must be nonnegative")
    R = math.sqrt(N * M) if ball_norm is None else ball_norm
    a = norm_dt_u / lam
    return 0.5 * (a + math.sqrt(a * a + 8.0 * R * norm_dt_xi / lam))


def energy_gap_bound(norm_dt_u, norm_dt_xi, N, M, dist_bound, ball_norm=None):
    """A posteriori bound on ``|J(u[n]) - J(u*)|`` given ``dist_bound >= |u[n] - u*|``."""
    if min(norm_dt_u, norm_dt_xi, dist_bound) < 0:
        raise ValueError("inputs must be nonnegative")
    R = math.sqrt(N * M) if ball_norm is None else ball_norm
    return 2.0 * R * norm_dt_xi + norm_dt_u * dist_bound


def dual_ball_norm(spec):
    """L2 norm of the dual radius field for ``spec`` (``sqrt(N*M)`` in the plain case)."""
    return grid.l2_norm(ball_radius(spec.shape, spec.scheme, spec.weight))


def _check_rof_identity(state, spec):
    # u[n] = f + (div xi[n+1] - dt_u[n]) / lam must hold exactly up to rounding
    term = spec.data_term
    rhs = term.f + (div(state.xi, spec.scheme) - state.dt_u) / term.lam
    scale = max(grid.l2_norm(state.u_prev), grid.l2_norm(term.f), 1.0)
    scale += spec.dt * grid.l2_norm(state.dt_u) + grid.l2_norm(div(state.xi)) / term.lam
    if grid.l2_norm(state.u_prev - rhs) > 1e-9 * scale:
        raise RuntimeError("solver/certificate indexing self-check failed")


def certify(state, spec, reference=None, reference_energy=None):
    """Certificate for ``state.u_prev`` built from the last step of ``state``."""
    if state.u_prev is None:
        raise ValueError("state has no completed step to certify")
    shape = spec.shape
    N = shape[0]
    M = int(np.prod(shape[1:])) if len(shape) > 1 else 1
    a = grid.l2_norm(state.dt_u)
    b = grid.l2_norm(state.dt_xi)
    R = dual_ball_norm(spec)
    u = state.u_prev
    l2 = None
    if spec.is_rof and not spec.clamp01:
        _check_rof_identity(state, spec)
        l2 = rof_l2_bound(a, b, spec.data_term.lam, N, M, ball_norm=R)
    if spec.clamp01:
        dist, rule = math.sqrt(u.size), "box"
    elif l2 is not None:
        dist, rule = l2, "l2_bound"
    else:
        dist, rule = math.sqrt(u.size) * max(1.0, float(np.ptp(u))), "range"
    energy = energy_of(u, spec)
    cert = Certificate(
        iter=state.iter - 1,
        norm_dt_u=a,
        norm_dt_xi=b,
        l2_bound=l2,
        energy_gap_bound=energy_gap_bound(a, b, N, M, dist, ball_norm=R),
        energy=energy,
        dist_bound=dist,
        dist_rule=rule,
        ball_norm=R,
    )
    if reference is not None:
        cert.true_error = grid.l2_norm(u - reference)
        if reference_energy is None:
            reference_energy = energy_of(reference, spec)
        cert.energy_error = abs(energy - reference_energy)
    return cert


def stop_value(cert):
    """The bound used for stopping: L2 bound when available, else the energy gap bound."""
    return cert.l2_bound if cert.l2_bound is not None else cert.energy_gap_bound


def oracle_rof(f, lam, scheme=SchemeKind.STANDARD, iters=20000):
    """Reference ROF minimiser from an accelerated projected-gradient dual solve.

    Minimises ``|div xi + lam f|**2 / 2`` over the dual ball with FISTA
    momentum and step ``1 / (4 d)`` (``d`` = grid dimension), then recovers
    ``u* = f + div xi* / lam``.

    Returns
    -------
    u_bar : ndarray
    xi_bar : ndarray
    """
    f = grid.as_field(f, "f")
    if not lam > 0:
        raise ValueError("lambda must be positive")
    scheme = as_scheme(scheme)
    d = f.ndim
    step = 1.0 / (4.0 * d)
    if d == 2:
        xi = _kernels.fista_dual_rof_2d(lam * f, scheme is SchemeKind.STAGGERED, int(iters), step)
    else:
        xi = _fista_dual_rof(lam * f, scheme, int(iters), step)
    u_bar = f + div(xi, scheme) / lam
    return u_bar, xi


def _fista_dual_rof(lf, scheme, iters, step):
    d = lf.ndim
    xi = np.zeros(lf.shape + (d,))
    y = xi.copy()
    t = 1.0
    for _ in range(iters):
        z = y + step * grad(div(y, scheme) + lf, scheme)
        xi_new = project(z, scheme)
        t_new = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * t * t))
        y = xi_new + ((t - 1.0) / t_new) * (xi_new - xi)
        xi, t = xi_new, t_new
    return xi


def optimality_residual(u, xi, scheme=SchemeKind.STANDARD):
    """``TV(u) - <grad u, xi>``; zero exactly when ``xi`` certifies the TV of ``u``."""
    return total_variation(u, scheme) - grid.inner(grad(u, scheme), xi)


def oracle_seg(spec, iters=50000, u0=None, xi0=None):
    """Reference segmentation iterate: the primal-dual solver run for ``iters`` steps.

    This is a long reference run, not a certified optimum.
    """
    from .solver import initial_state, pd_step

    if spec.is_rof:
        raise ValueError("oracle_seg needs a segmentation problem")
    state = initial_state(spec, u0, xi0)
    for _ in range(iters):
        state = pd_step(state, spec)
    return state.u


TRACE_COLUMNS = ("iter", "norm_dt_u", "norm_dt_xi", "l2_bound",
                 "energy_gap_bound", "energy", "true_error")


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_trace_csv(trace, path):
    """Write certificates as CSV.

    ``true_error`` (and ``energy_error``) columns appear only when the trace
    carries reference values.
    """
    cols = list(TRACE_COLUMNS)
    has_ref = any(c.true_error is not None for c in trace)
    if not has_ref:
        cols.remove("true_error")
    else:
        cols.append("energy_error")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(cols)
        for c in trace:
            w.writerow([_fmt(getattr(c, k)) for k in cols])


def read_trace_csv(path):
    """Read a trace CSV back into a list of dicts of floats (``None`` for blanks)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    out = []
    for row in rows:
        out.append({k: (None if v == "" else (int(v) if k == "iter" else float(v)))
                    for k, v in row.items()})
    return out


CERTIFICATE_FIELDS = tuple(f.name for f in fields(Certificate))
