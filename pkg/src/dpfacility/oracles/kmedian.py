from itertools import combinations, islice
from math import comb
from typing import Iterable, List, Tuple

import numpy as np
from toolz import curry

from dpfacility.exceptions.exceptions import OracleCapacityError
from dpfacility.model.cost import Instance, Placement, TOL, agent_costs, social_cost
from dpfacility.oracles.common import BRUTEFORCE_K, OracleResult

BRUTEFORCE_CAP = 2_000_000


def _block_cost_table(xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """
    cost[i, j] is the sum of distances from the sorted points xs[i..j] to their median,
    median[i, j] the index of that median (rank floor((len + 1) / 2)).
    """
    n = len(xs)
    prefix = np.concatenate([[0.0], np.cumsum(xs)])
    cost = np.full((n, n), np.inf)
    median = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(i, n):
            mid = i + (j - i) // 2
            left = xs[mid] * (mid - i) - (prefix[mid] - prefix[i])
            right = (prefix[j + 1] - prefix[mid + 1]) - xs[mid] * (j - mid)
            cost[i, j] = left + right
            median[i, j] = mid
    return cost, median


def opt_k_1d_zero_b(locations: Iterable[float], k: int) -> Placement:
    """
    Places k facilities at agent locations so that the sum of distances from every agent to
    its nearest facility is minimal, i.e. the optimum when every preferred distance is 0.
    Interval dynamic program over the sorted locations: each facility serves a contiguous
    block from its median, O(n^2 k).

    Parameters
    ----------
    locations : iterable of float
        The agent locations.

    k : int
        Number of facilities, 1 <= k <= n.

    Returns
    ----------
    placement : Placement
        Facilities sorted ascending, shape (k, 1). Among equal-cost placements the
        lexicographically smallest facility tuple wins.
    """
    xs = np.sort(np.asarray(list(locations), dtype=float))
    n = len(xs)
    if not 1 <= k <= n:
        raise ValueError("k must be between 1 and the number of agents ({}), got {}".format(n, k))

    cost, median = _block_cost_table(xs)

    # best[c][j]: (cost, facilities) covering xs[:j] with c blocks
    best: List[List[Tuple[float, Tuple[float, ...]]]] = [[(np.inf, ())] * (n + 1) for _ in range(k + 1)]
    best[0][0] = (0.0, ())
    for c in range(1, k + 1):
        for j in range(c, n + 1):
            champion = (np.inf, ())
            for i in range(c - 1, j):
                prev_cost, prev_facilities = best[c - 1][i]
                if not np.isfinite(prev_cost):
                    continue
                candidate = (prev_cost + cost[i, j - 1], prev_facilities + (xs[median[i, j - 1]],))
                if candidate[0] < champion[0] - TOL or \
                        (abs(candidate[0] - champion[0]) <= TOL and candidate[1] < champion[1]):
                    champion = candidate
            best[c][j] = champion

    facilities = np.array(best[k][n][1], dtype=float).reshape(-1, 1)
    zero_b_cost = float(np.abs(xs[:, None] - facilities[:, 0][None, :]).min(axis=1).sum())
    return Placement(facilities=facilities, social_cost=zero_b_cost)


def breakpoints_1d(instance: Instance) -> np.ndarray:
    """
    Sorted distinct points where some agent's 1D cost changes slope: x - b, x and x + b.
    """
    xs, bs = instance.locations[:, 0], instance.bs
    return np.unique(np.concatenate([xs - bs, xs, xs + bs]))


@curry
def opt_k_1d_bruteforce(instance: Instance, k: int, cap: int = BRUTEFORCE_CAP,
                        chunk_size: int = 50_000) -> OracleResult:
    """
    Exact optimum for k facilities in 1D with general preferred distances. Every facility
    serves a set of agents whose cost sum is piecewise linear, so an optimal placement exists
    among the breakpoints; all k-subsets of them are enumerated.

    Parameters
    ----------
    instance : Instance
        A 1D instance.

    k : int
        Number of facilities.

    cap : int
        Largest number of k-subsets this oracle agrees to enumerate.

    Returns
    ----------
    result : OracleResult
        The first minimal subset in lexicographic order.
    """
    if instance.dim != 1:
        raise ValueError("opt_k_1d_bruteforce needs a 1D instance")
    if k < 1:
        raise ValueError("k must be positive")
    candidates = breakpoints_1d(instance)
    if k > len(candidates):
        raise ValueError("k exceeds the number of candidate locations")
    total = comb(len(candidates), k)
    if total > cap:
        raise OracleCapacityError("{} candidate subsets exceed the brute force cap of {}".format(total, cap))

    per_candidate = agent_costs(candidates, instance)  # (n, m)
    subsets = combinations(range(len(candidates)), k)
    best_value, best_subset = np.inf, None
    while True:
        chunk = np.array(list(islice(subsets, chunk_size)), dtype=int)
        if len(chunk) == 0:
            break
        values = per_candidate[:, chunk].min(axis=2).sum(axis=0)
        winner = int(np.argmin(values))
        if values[winner] < best_value - TOL:
            best_value, best_subset = float(values[winner]), chunk[winner]

    facilities = candidates[best_subset].reshape(-1, 1)
    value = social_cost(facilities, instance)
    return OracleResult(placement=Placement(facilities=facilities, social_cost=value),
                        opt_value=value, method=BRUTEFORCE_K, guaranteed_exact=True)
