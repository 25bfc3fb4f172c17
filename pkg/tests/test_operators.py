import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from pdtv.operators import SchemeKind, as_scheme, div, grad

from .conftest import SCHEMES


def _grad_loops(u):
    N, M = u.shape
    out = np.zeros((N, M, 2))
    for i in range(N):
        for j in range(M):
            if i + 1 < N:
                out[i, j, 0] = u[i + 1, j] - u[i, j]
            if j + 1 < M:
                out[i, j, 1] = u[i, j + 1] - u[i, j]
    return out


def _inner_loops(a, b):
    s = 0.0
    for x, y in zip(a.ravel().tolist(), b.ravel().tolist()):
        s += x * y
    return s


@pytest.mark.parametrize("scheme", SCHEMES)
def test_grad_matches_loops(scheme, rng):
    u = rng.normal(size=(5, 7))
    np.testing.assert_array_equal(grad(u, scheme), _grad_loops(u))


def test_grad_1d_example():
    g = grad(np.array([1.0, 3.0, 2.0]))
    np.testing.assert_array_equal(g[:, 0], [2.0, -1.0, 0.0])


@pytest.mark.parametrize("scheme", SCHEMES)
def test_grad_constant(scheme):
    assert not np.any(grad(np.full((4, 6), 7.5), scheme))


def test_grad_half_plane():
    u = np.zeros((4, 4))
    u[:, :2] = 1.0
    g = grad(u)
    assert not np.any(g[..., 0])
    expect = np.zeros((4, 4))
    expect[:, 1] = -1.0
    np.testing.assert_array_equal(g[..., 1], expect)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_div_zero(scheme):
    assert not np.any(div(np.zeros((3, 4, 2)), scheme))


def test_div_1d_example():
    a, b = 0.7, -1.3
    d = div(np.array([a, b, 0.0])[:, None])
    # forward-difference transpose: div = (a, b - a, -b)
    np.testing.assert_array_equal(d, [a, b - a, -b])
    assert abs(d.sum()) < 1e-15


@pytest.mark.parametrize("scheme", SCHEMES)
def test_adjoint_brute_force_16x16(scheme, rng):
    u = rng.normal(size=(16, 16))
    xi = rng.normal(size=(16, 16, 2))
    lhs = _inner_loops(_grad_loops(u), xi) + _inner_loops(u, div(xi, scheme))
    assert abs(lhs) <= 1e-12 * np.linalg.norm(u) * np.linalg.norm(xi)


@pytest.mark.parametrize("scheme", SCHEMES)
@pytest.mark.parametrize("shape", [(1,), (7,), (1, 1), (3, 5), (33, 17), (4, 3, 5)])
def test_adjoint_shapes(scheme, shape, rng):
    for _ in range(10):
        u = rng.normal(size=shape)
        xi = rng.normal(size=shape + (len(shape),))
        lhs = np.vdot(grad(u, scheme), xi) + np.vdot(u, div(xi, scheme))
        assert abs(lhs) <= 1e-12 * max(1.0, np.linalg.norm(u) * np.linalg.norm(xi))


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 12), m=st.integers(1, 12), seed=st.integers(0, 2**32 - 1),
       staggered=st.booleans())
def test_div_sums_to_zero(n, m, seed, staggered):
    scheme = SchemeKind.STAGGERED if staggered else SchemeKind.STANDARD
    xi = np.random.default_rng(seed).normal(size=(n, m, 2))
    assert abs(div(xi, scheme).sum()) <= 1e-12 * np.linalg.norm(xi) * n * m


def test_div_ignores_last_slice():
    xi = np.zeros((3, 3, 2))
    xi[-1, :, 0] = 5.0
    xi[:, -1, 1] = -2.0
    assert not np.any(div(xi))


def test_out_buffers(rng):
    u = rng.normal(size=(4, 5))
    g = np.empty((4, 5, 2))
    assert grad(u, out=g) is g
    d = np.empty((4, 5))
    assert div(g, out=d) is d
    np.testing.assert_array_equal(d, div(grad(u)))


def test_scheme_parsing():
    assert as_scheme("staggered") is SchemeKind.STAGGERED
    with pytest.raises(ValueError):
        as_scheme("upwind")
