"""Grid fields and elementary field algebra.

Fields are plain ``numpy`` arrays of float64:

* a scalar field is an array of shape ``(N, M)`` (any ``ndim`` works for the
  operators, the 1D demo uses shape ``(n,)``),
* a vector field has one extra trailing axis holding the ``d`` components,
  i.e. shape ``(N, M, d)``.

Grid spacing is 1 and norms are raw grid sums (no cell-area weighting).
"""

import numpy as np

# seed mask tags
FREE = 0
PIN0 = 1
PIN1 = 2


class DimensionError(ValueError):
    """Raised when field shapes do not match."""


def as_field(x, name="field"):
    """Return ``x`` as a finite float64 array, raising on NaN/Inf or empty input."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0:
        raise DimensionError(f"{name} is empty")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains non-finite values")
    return arr


def zeros_vector(shape, d=None):
    """Zero vector field on a grid of ``shape`` with ``d`` components (default ``len(shape)``)."""
    shape = tuple(shape)
    if d is None:
        d = len(shape)
    return np.zeros(shape + (d,))


def l2_norm(x):
    """Unweighted Euclidean norm ``sqrt(sum x**2)`` over all cells and components."""
    x = np.asarray(x, dtype=np.float64)
    return float(np.sqrt(np.dot(x.ravel(), x.ravel())))


def inner(x, y):
    """Grid inner product ``sum x*y``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    return float(np.dot(x.ravel(), y.ravel()))


def pointwise_euclidean_norms(xi):
    """Per-cell Euclidean norm of a vector field, contracting the last axis."""
    xi = np.asarray(xi, dtype=np.float64)
    return np.sqrt(np.sum(xi * xi, axis=-1))


def axpy(a, x, y):
    """Return ``a*x + y``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if x.shape != y.shape:
        raise DimensionError(f"shape mismatch {x.shape} vs {y.shape}")
    return a * x + y


def make_seed_mask(shape, pin1=None, pin0=None):
    """Build a seed mask from boolean ``pin1``/``pin0`` selections.

    Cells selected by both raise ``ValueError``.
    """
    mask = np.full(tuple(shape), FREE, dtype=np.int8)
    p1 = np.zeros(shape, dtype=bool) if pin1 is None else np.asarray(pin1, dtype=bool)
    p0 = np.zeros(shape, dtype=bool) if pin0 is None else np.asarray(pin0, dtype=bool)
    if p1.shape != mask.shape or p0.shape != mask.shape:
        raise DimensionError("seed selections must match the grid shape")
    if np.any(p1 & p0):
        raise ValueError("pin0 and pin1 seeds overlap")
    mask[p1] = PIN1
    mask[p0] = PIN0
    return mask


def boundary_ring(shape, width=1):
    """Boolean selection of the outer ``width`` cells of a 2D grid."""
    ring = np.zeros(shape, dtype=bool)
    ring[:width, :] = True
    ring[-width:, :] = True
    ring[:, :width] = True
    ring[:, -width:] = True
    return ring
