from typing import List, Tuple

import numpy as np
from toolz import curry

from dpfacility.exceptions.exceptions import ConvergenceError
from dpfacility.mechanisms.geometry import SplitIntersection, median_keys, split_intersection, split_lines
from dpfacility.model.cost import Instance, TOL, social_costs_at

MAX_WEISZFELD_ITERATIONS = 10_000


def _check_2d(instance: Instance, name: str) -> None:
    if instance.dim != 2:
        raise ValueError("{} needs a 2D instance".format(name))


def mech_coord_median(instance: Instance) -> np.ndarray:
    """
    Coordinate-wise median: the x-median and the y-median of the agent locations, each taken
    at rank floor((n + 1) / 2) with id tie-breaking. Preferred distances are ignored.

    Parameters
    ----------
    instance : Instance
        A 2D instance.

    Returns
    ----------
    location : np.ndarray
        Shape (2,).
    """
    _check_2d(instance, "mech_coord_median")
    (med_x, _), (med_y, _) = median_keys(instance)
    return np.array([med_x, med_y])


@curry
def mech_geometric_median(instance: Instance, tol: float = 1e-7,
                          max_iterations: int = MAX_WEISZFELD_ITERATIONS) -> np.ndarray:
    """
    Point minimising the sum of Euclidean distances to the agent locations, found with
    Weiszfeld iterations. When an iterate sits on agent locations, the step uses only the
    other agents and is shortened by the weight sitting there, so the iteration either stays
    (that location is optimal) or steps off along the descent direction. Preferred distances
    are ignored.

    Parameters
    ----------
    instance : Instance
        A 2D instance.

    tol : float
        The iteration stops once a step is shorter than this.

    max_iterations : int
        Maximum number of iterations.

    Returns
    ----------
    location : np.ndarray
        Shape (2,).
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    _check_2d(instance, "mech_geometric_median")

    points = instance.locations
    current = points.mean(axis=0)
    best, best_value = current, np.inf
    for _ in range(max_iterations):
        distances = np.hypot(*(points - current).T)
        value = distances.sum()
        if value < best_value:
            best, best_value = current, value

        at_point = distances < tol
        if at_point.all():
            return current
        weights = 1.0 / distances[~at_point]
        others = points[~at_point]
        weiszfeld = (weights[:, None] * others).sum(axis=0) / weights.sum()
        if at_point.any():
            pull = np.linalg.norm((weights[:, None] * (others - current)).sum(axis=0))
            resting = float(at_point.sum())
            share = 1.0 if pull <= resting else resting / pull
            candidate = (1.0 - share) * weiszfeld + share * current
        else:
            candidate = weiszfeld

        if np.linalg.norm(candidate - current) < tol:
            return candidate
        current = candidate

    raise ConvergenceError("geometric median did not converge in {} iterations".format(max_iterations),
                           best_iterate=best)


def _segment_candidates(intersection: SplitIntersection, instance: Instance, med: np.ndarray) -> np.ndarray:
    """
    Parameters s in [0, 1] along a -> b containing every minimiser of the social cost
    restricted to the segment and, for every interval of minimisers, the point nearest to med.
    """
    a, direction = intersection.a, intersection.b - intersection.a
    locations, bs = instance.locations, instance.bs

    with np.errstate(divide="ignore", invalid="ignore"):
        kinks = (locations - a[None, :]) / direction[None, :]
    kinks = kinks[np.isfinite(kinks)]
    breaks = np.unique(np.clip(np.concatenate([[0.0, 1.0], kinks.ravel()]), 0.0, 1.0))

    points = a[None, :] + breaks[:, None] * direction[None, :]
    excess = np.abs(points[:, None, :] - locations[None, :, :]).sum(axis=2) - bs[None, :]
    e0, e1 = excess[:-1], excess[1:]
    crossing = e0 * e1 < 0
    fraction = np.divide(e0, e0 - e1, out=np.zeros_like(e0), where=crossing)
    roots = (breaks[:-1, None] + fraction * np.diff(breaks)[:, None])[crossing]

    projection = np.clip(np.dot(med - a, direction) / np.dot(direction, direction), 0.0, 1.0)
    return np.unique(np.concatenate([breaks, roots, [projection]]))


def choose_on_intersection(intersection: SplitIntersection, instance: Instance, med: np.ndarray) -> np.ndarray:
    """
    The lowest social cost point of the split line intersection; ties go to the point
    nearest to med in Euclidean distance, then to the lexicographically smallest point.
    """
    if intersection.kind == "point":
        return intersection.a

    ss = _segment_candidates(intersection, instance, med)
    points = intersection.a[None, :] + ss[:, None] * (intersection.b - intersection.a)[None, :]
    costs = social_costs_at(points, instance)
    cheapest = points[costs <= costs.min() + TOL]
    distances = np.hypot(*(cheapest - med[None, :]).T)
    nearest = cheapest[distances <= distances.min() + TOL]
    return nearest[np.lexsort((nearest[:, 1], nearest[:, 0]))[0]]


def mech_2d_median_plus(instance: Instance) -> np.ndarray:
    """
    Plane version of Median-Plus under L1 distances. Every agent contributes the half of its
    zero-cost diamond facing the coordinate median, extended by axis-parallel rays; the
    pointwise medians of those chains (the vertical and horizontal split lines) meet in a
    point or in a diagonal segment, from which the cheapest point is returned.

    Parameters
    ----------
    instance : Instance
        A 2D instance with the L1 norm.

    Returns
    ----------
    location : np.ndarray
        Shape (2,).
    """
    _check_2d(instance, "mech_2d_median_plus")
    if instance.norm != "L1":
        raise ValueError("mech_2d_median_plus needs the L1 norm")
    vertical, horizontal = split_lines(instance)
    return choose_on_intersection(split_intersection(vertical, horizontal), instance, mech_coord_median(instance))


def _towards(current: float, target: float, limit: float, start: float) -> float:
    """
    Moves from current to target without leaving the closed interval between start and limit,
    and without moving against the start -> limit direction.
    """
    low, high = min(start, limit), max(start, limit)
    moved = min(max(target, low), high)
    if (limit - start) * (moved - current) < 0:
        return current
    return moved


def alternating_moves(instance: Instance, max_moves: int = 200) -> Tuple[np.ndarray, List[float]]:
    """
    Walks from the coordinate median towards the 2D Median-Plus output with alternating
    horizontal moves onto the vertical split line and vertical moves onto the horizontal
    one. Each move stays within the box spanned by the two points and only heads away from
    the coordinate median, so the social cost never goes up along the way.

    Returns
    ----------
    path : np.ndarray
        (moves + 1, 2) visited points, starting at the coordinate median.

    costs : list of float
        The social cost at every visited point.
    """
    _check_2d(instance, "alternating_moves")
    vertical, horizontal = split_lines(instance)
    med = mech_coord_median(instance)
    target = choose_on_intersection(split_intersection(vertical, horizontal), instance, med)

    path = [med.copy()]
    point, idle = med.copy(), 0
    for move in range(max_moves):
        if move % 2 == 0:
            point = np.array([_towards(point[0], float(vertical(point[1])), target[0], med[0]), point[1]])
        else:
            point = np.array([point[0], _towards(point[1], float(horizontal(point[0])), target[1], med[1])])
        idle = idle + 1 if np.allclose(point, path[-1], atol=TOL, rtol=0) else 0
        if idle == 2:
            break
        if idle == 0:
            path.append(point)

    trace = np.array(path)
    return trace, [float(v) for v in social_costs_at(trace, instance)]
