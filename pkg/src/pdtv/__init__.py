"""Primal-dual total variation solvers with a posteriori error certificates."""

from .certificates import (
    Certificate,
    energy_gap_bound,
    energy_rof,
    energy_seg,
    oracle_rof,
    oracle_seg,
    rof_l2_bound,
)
from .grid import axpy, l2_norm, pointwise_euclidean_norms
from .operators import SchemeKind, div, grad
from .projection import project_unit_ball, project_weighted_ball
from .solver import ROF, PdState, ProblemSpec, Seg, pd_step, run, threshold

__version__ = "0.1.0"
