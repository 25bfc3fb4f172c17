"""Discrete gradient and divergence.

``grad`` uses forward differences with the last difference along each axis set
to zero, which encodes the zero-flux condition on the whole boundary.  ``div``
is the negative adjoint, ``<grad u, xi> = -<u, div xi>``, realised with
backward differences.

Both scheme kinds share these stencils.  They only differ in how the dual
variable is constrained (see :mod:`pdtv.projection`): cell-wise Euclidean ball
for ``STANDARD`` and an independent bound per face component for
``STAGGERED``.
"""

import enum

import numpy as np


class SchemeKind(str, enum.Enum):
    STANDARD = "standard"
    STAGGERED = "staggered"


def as_scheme(scheme):
    """Coerce a string or :class:`SchemeKind` to :class:`SchemeKind`."""
    try:
        return SchemeKind(scheme)
    except ValueError:
        raise ValueError(f"unknown scheme {scheme!r}; use 'standard' or 'staggered'") from None


def _lead(axis, ndim, sl):
    idx = [slice(None)] * ndim
    idx[axis] = sl
    return tuple(idx)


def grad(u, scheme=SchemeKind.STANDARD, out=None):
    """Forward-difference gradient of a scalar field.

    Parameters
    ----------
    u : ndarray, shape ``S``
        Scalar field.
    scheme : SchemeKind
        Accepted for symmetry with the projection; the stencil is the same.
    out : ndarray, shape ``S + (len(S),)``, optional
        Destination buffer.

    Returns
    -------
    ndarray, shape ``S + (len(S),)``
        Component ``k`` holds ``u[.., i+1, ..] - u[.., i, ..]`` along axis
        ``k``, and zero on the last slice of that axis.
    """
    as_scheme(scheme)
    u = np.asarray(u, dtype=np.float64)
    nd = u.ndim
    if out is None:
        out = np.empty(u.shape + (nd,))
    for k in range(nd):
        comp = out[..., k]
        np.subtract(u[_lead(k, nd, slice(1, None))], u[_lead(k, nd, slice(None, -1))],
                    out=comp[_lead(k, nd, slice(None, -1))])
        comp[_lead(k, nd, slice(-1, None))] = 0.0
    return out


def div(xi, scheme=SchemeKind.STANDARD, out=None):
    """Backward-difference divergence, the negative adjoint of :func:`grad`.

    Along axis ``k`` the contribution at index ``i`` is
    ``xi[i] - xi[i-1]`` with ``xi[-1] := 0`` and the last entry ``xi[n-1]``
    treated as zero (it sits on the boundary face).
    """
    as_scheme(scheme)
    xi = np.asarray(xi, dtype=np.float64)
    nd = xi.ndim - 1
    if xi.shape[-1] != nd:
        raise ValueError(f"vector field with {xi.shape[-1]} components on a {nd}-D grid")
    shape = xi.shape[:-1]
    if out is None:
        out = np.zeros(shape)
    else:
        out[...] = 0.0
    for k in range(nd):
        comp = xi[..., k]
        n = shape[k]
        if n == 1:
            continue
        # interior: xi[i] - xi[i-1] for 1 <= i <= n-2
        out[_lead(k, nd, slice(0, 1))] += comp[_lead(k, nd, slice(0, 1))]
        if n > 2:
            out[_lead(k, nd, slice(1, n - 1))] += (comp[_lead(k, nd, slice(1, n - 1))]
                                                   - comp[_lead(k, nd, slice(0, n - 2))])
        out[_lead(k, nd, slice(n - 1, n))] -= comp[_lead(k, nd, slice(n - 2, n - 1))]
    return out
