"""Explicit primal-dual (Arrow-Hurwicz) iteration for TV problems.

One step maps ``(u, xi)`` to::

    xi <- P(xi + dtau * grad u)
    u  <- u + dt * (div xi - p),   p in dG(u_old)

for the ROF data term ``G = lam/2 |u - f|^2`` or the relaxed segmentation
term ``G = sum f_plus |u| + f_minus |1 - u|`` with pinned seed cells.
"""

from dataclasses import dataclass, field, replace
from typing import Optional, Union

import numpy as np

from . import _kernels, grid
from .grid import PIN0, PIN1, DimensionError
from .operators import SchemeKind, as_scheme, div, grad
from .projection import project

_NO_SEEDS = np.zeros((1, 1), dtype=np.int8)


@dataclass(frozen=True)
class ROF:
    """Data term ``lam/2 * sum (u - f)**2``."""

    f: np.ndarray
    lam: float

    def __post_init__(self):
        object.__setattr__(self, "f", grid.as_field(self.f, "f"))
        if not self.lam > 0:
            raise ValueError(f"lambda must be positive, got {self.lam}")

    @property
    def shape(self):
        return self.f.shape

    def subgradient(self, u):
        return self.lam * (u - self.f)


@dataclass(frozen=True)
class Seg:
    """Relaxed segmentation data term with seeds and an edge weight ``g``.

    ``f_plus`` penalises ``|u|`` and ``f_minus`` penalises ``|1 - u|``.  Cells
    tagged ``PIN1``/``PIN0`` in ``seeds`` are held at 1/0.  ``g`` defaults to
    ones (plain total variation).
    """

    f_plus: np.ndarray
    f_minus: np.ndarray
    seeds: Optional[np.ndarray] = None
    g: Optional[np.ndarray] = None

    def __post_init__(self):
        fp = grid.as_field(self.f_plus, "f_plus")
        fm = grid.as_field(self.f_minus, "f_minus")
        if fp.shape != fm.shape:
            raise DimensionError("f_plus and f_minus shapes differ")
        if np.any(fp < 0) or np.any(fm < 0):
            raise ValueError("f_plus and f_minus must be nonnegative")
        seeds = np.zeros(fp.shape, np.int8) if self.seeds is None else np.asarray(self.seeds, np.int8)
        g = np.ones(fp.shape) if self.g is None else grid.as_field(self.g, "g")
        if seeds.shape != fp.shape or g.shape != fp.shape:
            raise DimensionError("seeds and g must match the data shape")
        if np.any(g <= 0):
            raise ValueError("edge weight g must be positive")
        object.__setattr__(self, "f_plus", fp)
        object.__setattr__(self, "f_minus", fm)
        object.__setattr__(self, "seeds", seeds)
        object.__setattr__(self, "g", g)

    @classmethod
    def from_signed(cls, f, seeds=None, g=None):
        """Split a signed region term ``f`` into ``max(f, 0)`` and ``max(-f, 0)``."""
        f = grid.as_field(f, "f")
        return cls(np.maximum(f, 0.0), np.maximum(-f, 0.0), seeds, g)

    @property
    def shape(self):
        return self.f_plus.shape

    def subgradient(self, u):
        # sign(0) := 0 picks the minimal-norm element at the kinks
        return self.f_plus * np.sign(u) - self.f_minus * np.sign(1.0 - u)

    def apply_pins(self, u):
        u[self.seeds == PIN1] = 1.0
        u[self.seeds == PIN0] = 0.0
        return u


@dataclass
class ProblemSpec:
    """Problem, step sizes and run controls.

    ``dt``/``dtau`` default to ``1/lam`` and ``lam/5`` for ROF and to 0.2 for
    segmentation.  ``clamp01`` defaults to on for segmentation and off for
    ROF.  ``tol`` stops :func:`run` once the L2 bound (ROF) or the energy-gap
    bound (segmentation) of a logged certificate drops below it; ``rtol`` does
    the same relative to the first logged bound.
    """

    data_term: Union[ROF, Seg]
    dt: Optional[float] = None
    dtau: Optional[float] = None
    scheme: SchemeKind = SchemeKind.STANDARD
    clamp01: Optional[bool] = None
    max_iter: int = 50000
    log_every: int = 10
    tol: Optional[float] = None
    rtol: Optional[float] = None

    def __post_init__(self):
        term = self.data_term
        is_rof = isinstance(term, ROF)
        if not is_rof and not isinstance(term, Seg):
            raise TypeError("data_term must be ROF or Seg")
        if self.dt is None:
            self.dt = 1.0 / term.lam if is_rof else 0.2
        if self.dtau is None:
            self.dtau = term.lam / 5.0 if is_rof else 0.2
        if self.clamp01 is None:
            self.clamp01 = not is_rof
        self.scheme = as_scheme(self.scheme)
        if not (self.dt > 0 and self.dtau > 0):
            raise ValueError("step sizes must be positive")
        if self.max_iter < 0 or self.log_every < 1:
            raise ValueError("max_iter must be >= 0 and log_every >= 1")

    @property
    def is_rof(self):
        return isinstance(self.data_term, ROF)

    @property
    def shape(self):
        return self.data_term.shape

    @property
    def weight(self):
        return None if self.is_rof else self.data_term.g


@dataclass
class PdState:
    """Iterate ``(u, xi)`` with the difference quotients of the last step.

    ``u_prev`` is the iterate before the last step; the certificate built
    from ``dt_u`` and ``dt_xi`` bounds the error of ``u_prev``.
    """

    u: np.ndarray
    xi: np.ndarray
    dt_u: np.ndarray
    dt_xi: np.ndarray
    iter: int = 0
    u_prev: Optional[np.ndarray] = field(default=None, repr=False)


def initial_state(spec, u0=None, xi0=None):
    """Admissible starting state: pins and clamping applied to ``u0``, ``xi0`` projected."""
    shape = spec.shape
    term = spec.data_term
    if u0 is None:
        u0 = term.f if spec.is_rof else np.full(shape, 0.5)
    u = np.array(grid.as_field(u0, "u0"), dtype=np.float64)
    if u.shape != shape:
        raise DimensionError(f"u0 shape {u.shape} != problem shape {shape}")
    if xi0 is None:
        xi = grid.zeros_vector(shape)
    else:
        xi = np.array(grid.as_field(xi0, "xi0"), dtype=np.float64)
        if xi.shape != shape + (len(shape),):
            raise DimensionError(f"xi0 shape {xi.shape} does not fit grid {shape}")
        xi = project(xi, spec.scheme, spec.weight)
    if spec.clamp01:
        np.clip(u, 0.0, 1.0, out=u)
    if not spec.is_rof:
        term.apply_pins(u)
    return PdState(u=u, xi=xi, dt_u=np.zeros(shape), dt_xi=np.zeros_like(xi), iter=0)


def pd_step(state, spec):
    """Advance one primal-dual step and return the new state.

    2D grids go through a compiled kernel; other dimensions use
    :func:`pd_step_numpy`, which composes the public operators.
    """
    return advance(state, spec, 1)


def advance(state, spec, nsteps):
    """Apply ``nsteps >= 1`` steps; identical to calling :func:`pd_step` repeatedly."""
    u, xi = state.u, state.xi
    if u.shape != spec.shape or xi.shape != spec.shape + (len(spec.shape),):
        raise DimensionError("state does not match the problem shape")
    if nsteps < 1:
        raise ValueError("nsteps must be >= 1")
    if u.ndim != 2:
        for _ in range(nsteps):
            state = pd_step_numpy(state, spec)
        return state
    term = spec.data_term
    if spec.is_rof:
        mode, a, b, lam, seeds, g = _kernels.ROF_TERM, term.f, term.f, term.lam, _NO_SEEDS, term.f
        weighted = False
    else:
        mode, a, b, lam, seeds, g = _kernels.SEG_TERM, term.f_plus, term.f_minus, 0.0, term.seeds, term.g
        weighted = True
    u_new, xi_new, u_prev, dt_u, dt_xi = _kernels.pd_steps_2d(
        u, xi, float(spec.dt), float(spec.dtau), spec.scheme is SchemeKind.STAGGERED,
        g, weighted, mode, a, b, float(lam), bool(spec.clamp01), seeds, int(nsteps))
    return PdState(u=u_new, xi=xi_new, dt_u=dt_u, dt_xi=dt_xi,
                   iter=state.iter + nsteps, u_prev=u_prev)


def pd_step_numpy(state, spec):
    """Reference step built from :func:`grad`, :func:`div` and :func:`project`."""
    u, xi = state.u, state.xi
    term = spec.data_term
    xi_new = project(xi + spec.dtau * grad(u, spec.scheme), spec.scheme, spec.weight)
    p = term.subgradient(u)
    u_new = u + spec.dt * (div(xi_new, spec.scheme) - p)
    if spec.clamp01:
        np.clip(u_new, 0.0, 1.0, out=u_new)
    if not spec.is_rof:
        term.apply_pins(u_new)
    return PdState(
        u=u_new,
        xi=xi_new,
        dt_u=(u_new - u) / spec.dt,
        dt_xi=(xi_new - xi) / spec.dtau,
        iter=state.iter + 1,
        u_prev=u,
    )


def run(spec, u0=None, xi0=None, reference=None):
    """Iterate :func:`pd_step` with certificate logging and optional early stop.

    A certificate is logged for iterate ``n`` whenever ``n % log_every == 0``
    and for the last certified iterate.  Certificates describe the iterate
    *before* each step, so they lag one step behind the returned state.

    Parameters
    ----------
    spec : ProblemSpec
    u0, xi0 : ndarray, optional
        Starting point (defaults: ``f`` or 0.5, and zero).
    reference : ndarray, optional
        Reference minimiser; fills ``true_error`` and ``energy_error``.

    Returns
    -------
    state : PdState
    trace : list of Certificate
    """
    from .certificates import certify, stop_value

    state = initial_state(spec, u0, xi0)
    trace = []
    ref_energy = None
    if reference is not None:
        from .certificates import energy_of
        reference = grid.as_field(reference, "reference")
        ref_energy = energy_of(reference, spec)
    n = 0
    while n < spec.max_iter:
        if n % spec.log_every and n != spec.max_iter - 1:
            # skip ahead to the next certified iterate
            target = min((n // spec.log_every + 1) * spec.log_every, spec.max_iter - 1)
            state = advance(state, spec, target - n)
            n = target
            continue
        state = pd_step(state, spec)
        n += 1
        cert = certify(state, spec, reference=reference, reference_energy=ref_energy)
        trace.append(cert)
        if stop_value(cert) <= _stop_level(spec, trace):
            break
    return state, trace


def _stop_level(spec, trace):
    level = -np.inf
    if spec.tol is not None:
        level = spec.tol
    if spec.rtol is not None:
        from .certificates import stop_value
        level = max(level, spec.rtol * stop_value(trace[0]))
    return level


def converged(spec, trace):
    """True when the last certificate met the stopping level."""
    from .certificates import stop_value

    return bool(trace) and stop_value(trace[-1]) <= _stop_level(spec, trace)


def threshold(u, s=0.5):
    """Binary superlevel set ``{u > s}`` as a 0/1 ``uint8`` array."""
    if not 0.0 < s < 1.0:
        raise ValueError(f"threshold level must lie in (0, 1), got {s}")
    return (np.asarray(u) > s).astype(np.uint8)


def with_steps(spec, **changes):
    """Copy of ``spec`` with fields replaced."""
    return replace(spec, **changes)
