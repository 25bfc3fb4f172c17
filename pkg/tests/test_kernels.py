"""Compiled loops against the numpy reference composition."""

import numpy as np
import pytest

from pdtv.grid import boundary_ring, make_seed_mask
from pdtv.solver import ROF, ProblemSpec, Seg, advance, initial_state, pd_step, pd_step_numpy

from .conftest import SCHEMES


def _specs(rng, scheme):
    f = rng.uniform(0, 255, size=(12, 9))
    yield ProblemSpec(ROF(f, 0.05), scheme=scheme)
    yield ProblemSpec(ROF(f, 0.05), scheme=scheme, clamp01=True)
    pin1 = np.zeros(f.shape, bool)
    pin1[5:7, 4:6] = True
    seeds = make_seed_mask(f.shape, pin1=pin1, pin0=boundary_ring(f.shape))
    fs = rng.normal(size=f.shape)
    g = rng.uniform(0.01, 1.01, size=f.shape)
    yield ProblemSpec(Seg.from_signed(fs, seeds, g), scheme=scheme)
    yield ProblemSpec(Seg.from_signed(fs), scheme=scheme, clamp01=False)


@pytest.mark.parametrize("scheme", SCHEMES)
def test_kernel_matches_numpy(scheme, rng):
    for spec in _specs(rng, scheme):
        a = b = initial_state(spec, xi0=rng.normal(size=spec.shape + (2,)))
        for _ in range(25):
            a = pd_step(a, spec)
            b = pd_step_numpy(b, spec)
        for name in ("u", "xi", "dt_u", "dt_xi", "u_prev"):
            x, y = getattr(a, name), getattr(b, name)
            assert np.max(np.abs(x - y)) <= 1e-12 * max(1.0, np.max(np.abs(y))), name
        assert a.iter == b.iter == 25


@pytest.mark.parametrize("scheme", SCHEMES)
def test_advance_equals_repeated_steps(scheme, rng):
    for spec in _specs(rng, scheme):
        a = b = initial_state(spec)
        for _ in range(17):
            a = pd_step(a, spec)
        b = advance(b, spec, 17)
        for name in ("u", "xi", "dt_u", "dt_xi", "u_prev"):
            np.testing.assert_array_equal(getattr(a, name), getattr(b, name))
        assert b.iter == 17
