from typing import Tuple
import warnings

import numpy as np
from scipy import optimize
from toolz import curry

from dpfacility.exceptions.exceptions import OracleCapacityError
from dpfacility.model.cost import Instance, Placement, TOL, social_cost, social_costs_at
from dpfacility.oracles.common import (ARRANGEMENT_2D_L1, GRID, GRID_REFINE_2D_L2, OracleResult,
                                       first_minimum, make_result)

EXACT_2D_CAP = 64
GRID_CELL_CAP = 10 ** 8
SNAP_DECIMALS = 12


def working_box(instance: Instance, expansion: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Bounding box of all agent locations expanded by `expansion` * B on every side.
    """
    locations = instance.locations
    margin = expansion * instance.B
    return locations.min(axis=0) - margin, locations.max(axis=0) + margin


def arrangement_vertices(instance: Instance) -> np.ndarray:
    """
    All pairwise intersections of the lines along which the L1 social cost changes slope:
    y1 = x1, y2 = x2 (distance kinks) and y1 + y2 = x1 + x2 +/- b, y1 - y2 = x1 - x2 +/- b
    (diamond edges). Snapped and de-duplicated, sorted lexicographically.
    """
    xs, ys, bs = instance.locations[:, 0], instance.locations[:, 1], instance.bs
    vertical = np.unique(xs)
    horizontal = np.unique(ys)
    plus = np.unique(np.concatenate([xs + ys - bs, xs + ys + bs]))
    minus = np.unique(np.concatenate([xs - ys - bs, xs - ys + bs]))

    def grid(first: np.ndarray, second: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        a, c = np.meshgrid(first, second, indexing="ij")
        return a.ravel(), c.ravel()

    v_h = np.column_stack(grid(vertical, horizontal))
    v, p = grid(vertical, plus)
    v_p = np.column_stack([v, p - v])
    v, q = grid(vertical, minus)
    v_m = np.column_stack([v, v - q])
    h, p = grid(horizontal, plus)
    h_p = np.column_stack([p - h, h])
    h, q = grid(horizontal, minus)
    h_m = np.column_stack([q + h, h])
    p, q = grid(plus, minus)
    p_m = np.column_stack([(p + q) / 2.0, (p - q) / 2.0])

    vertices = np.concatenate([v_h, v_p, v_m, h_p, h_m, p_m])
    return np.unique(np.round(vertices, SNAP_DECIMALS), axis=0)


@curry
def opt_2d_l1(instance: Instance, cap: int = EXACT_2D_CAP) -> OracleResult:
    """
    Exact single facility optimum in the plane under L1 distances. The social cost is linear
    on every cell of the arrangement of kink and diamond-edge lines, so the minimum is attained
    at one of the arrangement vertices, all of which are evaluated.

    Parameters
    ----------
    instance : Instance
        A 2D instance with the L1 norm.

    cap : int
        Largest number of agents accepted.

    Returns
    ----------
    result : OracleResult
        Lexicographically smallest minimising vertex.
    """
    if instance.dim != 2 or instance.norm != "L1":
        raise ValueError("opt_2d_l1 needs a 2D instance with the L1 norm")
    if instance.n > cap:
        raise OracleCapacityError("instance too large for exact 2D oracle ({} agents, cap {})"
                                  .format(instance.n, cap))
    vertices = arrangement_vertices(instance)
    return make_result(vertices, social_costs_at(vertices, instance), ARRANGEMENT_2D_L1)


def _compass_search(instance: Instance, start: np.ndarray, step: float, tol: float) -> Tuple[np.ndarray, float]:
    directions = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
    point, value = start.astype(float), social_cost(start, instance)
    while step >= tol:
        trials = point[None, :] + step * directions
        trial_values = social_costs_at(trials, instance)
        winner = int(np.argmin(trial_values))
        if trial_values[winner] < value - TOL:
            point, value = trials[winner], float(trial_values[winner])
        else:
            step /= 2.0
    return point, value


@curry
def opt_2d_l2(instance: Instance, tol: float = 1e-4, grid_points: int = 401, starts: int = 8) -> OracleResult:
    """
    Approximate single facility optimum in the plane under L2 distances. The social cost is
    not convex there (its zero sets are rings), so there is no finite candidate set: a grid
    over the agents' bounding box expanded by B seeds several coordinate (compass) searches,
    each refined until the step drops below `tol` and then polished with Nelder-Mead.

    The seeding grid has pitch max(10 * tol, extent / (grid_points - 1)), so for boxes wider
    than (grid_points - 1) * 10 * tol it is coarser than 10 * tol. The local searches start at
    that pitch and halve it down to `tol`.

    Parameters
    ----------
    instance : Instance
        A 2D instance with the L2 norm.

    tol : float
        Final step size of the local refinement.

    grid_points : int
        Upper bound on the number of grid points per axis of the seeding grid. At least 2.

    starts : int
        Number of best grid points refined locally.

    Returns
    ----------
    result : OracleResult
        An upper bound on OPT within the search box, guaranteed_exact=False.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    if grid_points < 2:
        raise ValueError("grid_points must be at least 2")
    if instance.dim != 2 or instance.norm != "L2":
        raise ValueError("opt_2d_l2 needs a 2D instance with the L2 norm")

    lower, upper = working_box(instance)
    pitch = max(tol * 10, float((upper - lower).max()) / (grid_points - 1))
    xs = np.arange(lower[0], upper[0] + pitch / 2, pitch)
    ys = np.arange(lower[1], upper[1] + pitch / 2, pitch)
    grid = np.column_stack([a.ravel() for a in np.meshgrid(xs, ys, indexing="ij")])
    values = social_costs_at(grid, instance)

    seeds = grid[np.argsort(values, kind="stable")[:starts]]
    refined = []
    for seed in seeds:
        point, value = _compass_search(instance, seed, pitch, tol)
        polished = optimize.minimize(lambda p: social_cost(p, instance), point, method="Nelder-Mead",
                                     options={"xatol": tol, "fatol": tol * 1e-3})
        if polished.fun < value:
            point = np.asarray(polished.x, dtype=float)
        refined.append(point)

    points = np.array(refined)
    order = np.lexsort((points[:, 1], points[:, 0]))
    points = points[order]
    return make_result(points, social_costs_at(points, instance), GRID_REFINE_2D_L2)


@curry
def grid_oracle(instance: Instance, resolution: float, cell_cap: int = GRID_CELL_CAP) -> OracleResult:
    """
    Brute force cross-check: evaluates the social cost on a uniform grid over the agents'
    bounding box expanded by B and returns the grid minimum. The error against the true
    optimum is at most n * resolution (1D) and n * resolution * 2 (2D).

    Parameters
    ----------
    instance : Instance

    resolution : float
        Grid pitch.

    cell_cap : int
        Largest grid size accepted.

    Returns
    ----------
    result : OracleResult
        guaranteed_exact=False.
    """
    if not resolution > 0:
        raise ValueError("resolution must be positive")
    lower, upper = working_box(instance)
    counts = np.floor((upper - lower) / resolution).astype(int) + 1
    if int(np.prod(counts)) > cell_cap:
        raise OracleCapacityError("grid of {} cells exceeds the cap of {}".format(int(np.prod(counts)), cell_cap))
    axes = [lower[d] + resolution * np.arange(counts[d]) for d in range(instance.dim)]

    if instance.dim == 1:
        values = social_costs_at(axes[0], instance)
        return make_result(axes[0].reshape(-1, 1), values, GRID)

    best_value, best_point = np.inf, None
    for x in axes[0]:
        row = np.column_stack([np.full(len(axes[1]), x), axes[1]])
        row_values = social_costs_at(row, instance)
        winner = first_minimum(row_values)
        if row_values[winner] < best_value - TOL:
            best_value, best_point = float(row_values[winner]), row[winner]
    return OracleResult(placement=Placement(facilities=best_point.reshape(1, 2), social_cost=best_value),
                        opt_value=best_value, method=GRID, guaranteed_exact=False)


def solve(instance: Instance, tol: float = 1e-4, cap: int = EXACT_2D_CAP, warn: bool = True) -> OracleResult:
    """
    Picks the oracle matching the instance: breakpoints in 1D, the arrangement for L1 and the
    grid refinement for L2, which warns that the value is approximate unless `warn` is False.
    Audits running on worker threads pass warn=False.
    """
    from dpfacility.oracles.one_dim import opt_1d

    if instance.dim == 1:
        return opt_1d(instance)
    if instance.norm == "L1":
        return opt_2d_l1(instance, cap=cap)
    if warn:
        warnings.warn("L2 optimum is approximate (tolerance {}); bounds checked against it carry that slack"
                      .format(tol))
    return opt_2d_l2(instance, tol=tol)
