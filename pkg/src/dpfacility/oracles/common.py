from typing import NamedTuple

import numpy as np

from dpfacility.model.cost import Placement, TOL

BREAKPOINTS_1D = "breakpoints_1d"
ARRANGEMENT_2D_L1 = "arrangement_2d_l1"
GRID_REFINE_2D_L2 = "grid_refine_2d_l2"
DP_K_MEDIAN = "dp_k_median"
BRUTEFORCE_K = "bruteforce_k"
GRID = "grid"

EXACT_METHODS = (BREAKPOINTS_1D, ARRANGEMENT_2D_L1, DP_K_MEDIAN, BRUTEFORCE_K)


class OracleResult(NamedTuple):
    """
    Ground truth produced by an oracle.

    Attributes
    ----------
    placement : Placement
        The minimising facility location(s), shape (k, dim), with its social cost.

    opt_value : float
        OPT(I), equal to placement.social_cost.

    method : str
        Which oracle produced the result.

    guaranteed_exact : bool
        False for the sampling based oracles, whose value is only an upper bound on OPT.
    """
    placement: Placement
    opt_value: float
    method: str
    guaranteed_exact: bool

    @property
    def location(self) -> np.ndarray:
        return self.placement.facilities[0]


def first_minimum(values: np.ndarray, tol: float = TOL) -> int:
    """
    Index of the first entry within `tol` of the minimum. Callers order candidates so that
    "first" means smallest coordinate (lexicographic in 2D).
    """
    return int(np.flatnonzero(values <= values.min() + tol)[0])


def make_result(points: np.ndarray, values: np.ndarray, method: str) -> OracleResult:
    best = first_minimum(values)
    location = points[best:best + 1]
    return OracleResult(placement=Placement(facilities=location, social_cost=float(values[best])),
                        opt_value=float(values[best]),
                        method=method,
                        guaranteed_exact=method in EXACT_METHODS)
