"""Projections of the dual field onto its admissible set."""

import numpy as np

from .operators import SchemeKind, as_scheme

# Cells whose norm exceeds the radius by at most a few ulps count as feasible;
# this makes the projection exactly idempotent despite rounding in the rescale.
SLACK = 1.0 + 4.0 * np.finfo(np.float64).eps


def face_weights(g, d=None):
    """Average a cell weight onto faces.

    Component ``k`` at index ``i`` is the arithmetic mean of ``g`` at ``i`` and
    ``i+1`` along axis ``k``.  The last slice along each axis has no neighbour
    and keeps the cell value.
    """
    g = np.asarray(g, dtype=np.float64)
    nd = g.ndim
    if d is None:
        d = nd
    out = np.repeat(g[..., None], d, axis=-1)
    for k in range(d):
        lo = [slice(None)] * nd
        hi = [slice(None)] * nd
        lo[k] = slice(None, -1)
        hi[k] = slice(1, None)
        out[tuple(lo) + (k,)] = 0.5 * (g[tuple(lo)] + g[tuple(hi)])
    return out


def project_unit_ball(xi, scheme=SchemeKind.STANDARD):
    """Project onto ``|xi_ij| <= 1``.

    ``STANDARD`` divides each cell vector by ``max(|xi_ij|, 1)``;
    ``STAGGERED`` clamps every face component to ``[-1, 1]``.
    """
    scheme = as_scheme(scheme)
    xi = np.asarray(xi, dtype=np.float64)
    if scheme is SchemeKind.STAGGERED:
        return np.clip(xi, -1.0, 1.0)
    return _rescale(xi, np.sqrt(np.sum(xi * xi, axis=-1, keepdims=True)))


def project_weighted_ball(xi, g, scheme=SchemeKind.STANDARD):
    """Project onto ``|xi_ij| <= g_ij`` (per face, with ``g`` face-averaged, for staggered)."""
    scheme = as_scheme(scheme)
    xi = np.asarray(xi, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    if g.shape != xi.shape[:-1]:
        raise ValueError(f"weight shape {g.shape} does not match field grid {xi.shape[:-1]}")
    if np.any(g <= 0):
        raise ValueError("weight g must be positive everywhere")
    if scheme is SchemeKind.STAGGERED:
        gf = face_weights(g, xi.shape[-1])
        return np.clip(xi, -gf, gf)
    return _rescale(xi, np.sqrt(np.sum(xi * xi, axis=-1, keepdims=True)) / g[..., None])


def _rescale(xi, ratio):
    return xi / np.where(ratio > SLACK, ratio, 1.0)


def project(xi, scheme=SchemeKind.STANDARD, g=None):
    """Dispatch to the unit or weighted projection."""
    if g is None:
        return project_unit_ball(xi, scheme)
    return project_weighted_ball(xi, g, scheme)


def ball_radius(shape, scheme=SchemeKind.STANDARD, g=None):
    """Radius field of the dual constraint: one entry per cell (standard) or per face (staggered)."""
    scheme = as_scheme(scheme)
    shape = tuple(shape)
    if scheme is SchemeKind.STAGGERED:
        if g is None:
            return np.ones(shape + (len(shape),))
        return face_weights(g)
    if g is None:
        return np.ones(shape)
    return np.asarray(g, dtype=np.float64)
