"""Synthetic phantoms, noise, edge weights and PGM/PNG file I/O.

Intensities follow the 0-255 convention of 8-bit images throughout.
"""

import os
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

import numpy as np

from . import grid
from .operators import grad


class ImageFormatError(ValueError):
    """Malformed image file; ``offset`` is the byte position of the problem."""

    def __init__(self, message, offset):
        super().__init__(f"{message} (at byte {offset})")
        self.offset = offset


DEFAULT_LOBES = ((0.42, 0.40, 0.20), (0.58, 0.62, 0.18), (0.36, 0.64, 0.13))


@dataclass
class PhantomSpec:
    """Geometry of a synthetic test image.

    Coordinates are continuous with cell ``(i, j)`` centred at
    ``(i + 0.5, j + 0.5)``.

    * ``rectangle``: ``corners = (i0, j0, i1, j1)`` selects the half-open
      cell block ``[i0, i1) x [j0, j1)``; defaults to the middle half of the
      rows and middle three quarters of the columns.
    * ``disk``: ``center`` (defaults to the grid centre) and ``radius``
      (defaults to a quarter of the smaller side).
    * ``blob``: union of disks ``lobes = ((ci, cj, r), ...)`` given as
      fractions of the grid size.
    """

    kind: str = "rectangle"
    shape: Tuple[int, int] = (64, 64)
    foreground: float = 255.0
    background: float = 0.0
    corners: Optional[Tuple[int, int, int, int]] = None
    center: Optional[Tuple[float, float]] = None
    radius: Optional[float] = None
    lobes: Sequence[Tuple[float, float, float]] = field(default=DEFAULT_LOBES)


def _disk(shape, ci, cj, r):
    ii = np.arange(shape[0])[:, None] + 0.5
    jj = np.arange(shape[1])[None, :] + 0.5
    return (ii - ci) ** 2 + (jj - cj) ** 2 < r * r


def make_phantom(spec):
    """Render a :class:`PhantomSpec` to an ``(N, M)`` array."""
    N, M = spec.shape
    if N < 1 or M < 1:
        raise ValueError(f"invalid grid size {spec.shape}")
    kind = {"rect": "rectangle"}.get(spec.kind, spec.kind)
    if kind == "rectangle":
        i0, j0, i1, j1 = spec.corners or (N // 4, M // 8, N - N // 4, M - M // 8)
        if not (0 <= i0 <= i1 <= N and 0 <= j0 <= j1 <= M):
            raise ValueError(f"rectangle {(i0, j0, i1, j1)} outside {N}x{M} grid")
        inside = np.zeros((N, M), dtype=bool)
        inside[i0:i1, j0:j1] = True
    elif kind == "disk":
        ci, cj = spec.center if spec.center is not None else (N / 2.0, M / 2.0)
        r = spec.radius if spec.radius is not None else min(N, M) / 4.0
        if r < 0:
            raise ValueError("radius must be nonnegative")
        if not (0 <= ci - r and ci + r <= N and 0 <= cj - r and cj + r <= M):
            raise ValueError(f"disk at {(ci, cj)} radius {r} leaves the {N}x{M} grid")
        inside = _disk((N, M), ci, cj, r)
    elif kind == "blob":
        inside = np.zeros((N, M), dtype=bool)
        for fi, fj, fr in spec.lobes:
            ci, cj, r = fi * N, fj * M, fr * min(N, M)
            if not (0 <= ci - r and ci + r <= N and 0 <= cj - r and cj + r <= M):
                raise ValueError(f"blob lobe {(fi, fj, fr)} leaves the grid")
            inside |= _disk((N, M), ci, cj, r)
    else:
        raise ValueError(f"unknown phantom kind {spec.kind!r}")
    return np.where(inside, float(spec.foreground), float(spec.background))


def add_gaussian_noise(u, sigma, seed=0):
    """Add i.i.d. N(0, sigma^2) noise.

    Samples come from ``numpy.random.default_rng(seed)`` (PCG64) drawn in
    row-major order, so identical ``(u, sigma, seed)`` give identical output.
    """
    u = grid.as_field(u, "u")
    if sigma < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma == 0:
        return u.copy()
    rng = np.random.default_rng(seed)
    return u + rng.normal(0.0, sigma, size=u.shape)


def edge_weight(image, beta, eps):
    """Edge-stopping weight ``g = eps + 1 / (1 + beta |grad image|^2)``.

    ``g`` lies in ``[eps, 1 + eps]``: near ``1 + eps`` on flat regions and
    small across strong edges.
    """
    if beta < 0 or eps <= 0:
        raise ValueError("need beta >= 0 and eps > 0")
    mag2 = np.sum(grad(grid.as_field(image, "image")) ** 2, axis=-1)
    return eps + 1.0 / (1.0 + beta * mag2)


# --- files -----------------------------------------------------------------

def _pgm_token(data, pos):
    """Next whitespace-delimited header token, skipping ``#`` comments."""
    n = len(data)
    while pos < n:
        c = data[pos:pos + 1]
        if c == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
        elif c.isspace():
            pos += 1
        else:
            break
    if pos >= n:
        raise ImageFormatError("truncated header", pos)
    start = pos
    while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
        pos += 1
    return data[start:pos], start, pos


def decode_pgm(data):
    """Decode binary PGM (P5) bytes into a float array with values in ``[0, maxval]``."""
    if data[:2] != b"P5":
        raise ImageFormatError("not a binary PGM (missing P5 magic)", 0)
    pos = 2
    vals = []
    for what in ("width", "height", "maxval"):
        tok, start, pos = _pgm_token(data, pos)
        if not tok.isdigit():
            raise ImageFormatError(f"bad {what} {tok!r}", start)
        vals.append(int(tok))
    width, height, maxval = vals
    if width < 1 or height < 1:
        raise ImageFormatError("empty image", pos)
    if not 0 < maxval < 65536:
        raise ImageFormatError(f"maxval {maxval} out of range", pos)
    if pos >= len(data) or not data[pos:pos + 1].isspace():
        raise ImageFormatError("missing whitespace after maxval", pos)
    pos += 1
    dtype = np.dtype("u1") if maxval < 256 else np.dtype(">u2")
    need = width * height * dtype.itemsize
    if len(data) - pos < need:
        raise ImageFormatError(f"expected {need} raster bytes, found {len(data) - pos}", len(data))
    raster = np.frombuffer(data, dtype=dtype, count=width * height, offset=pos)
    return raster.reshape(height, width).astype(np.float64)


def encode_pgm(u):
    """Encode an array as 8-bit P5, clamping to ``[0, 255]`` and rounding half up."""
    u = grid.as_field(u, "image")
    if u.ndim != 2:
        raise ValueError("PGM needs a 2D array")
    q = np.floor(np.clip(u, 0.0, 255.0) + 0.5).astype(np.uint8)
    header = b"P5\n%d %d\n255\n" % (u.shape[1], u.shape[0])
    return header + q.tobytes()


def read_image(path):
    """Read a PGM (P5) or, with Pillow installed, a grayscale PNG."""
    path = os.fspath(path)
    if path.lower().endswith(".png"):
        from PIL import Image

        with Image.open(path) as im:
            return np.asarray(im.convert("L"), dtype=np.float64)
    with open(path, "rb") as fh:
        return decode_pgm(fh.read())


def write_image(u, path):
    """Write ``u`` as 8-bit PGM, or PNG when the name ends in ``.png``."""
    path = os.fspath(path)
    if path.lower().endswith(".png"):
        from PIL import Image

        q = np.floor(np.clip(grid.as_field(u), 0.0, 255.0) + 0.5).astype(np.uint8)
        Image.fromarray(q, mode="L").save(path)
        return
    with open(path, "wb") as fh:
        fh.write(encode_pgm(u))
