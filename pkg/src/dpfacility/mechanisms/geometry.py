from typing import List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from dpfacility.exceptions.exceptions import InvariantViolationError, SplitLineError
from dpfacility.mechanisms.ranking import RankKeyType, RankSelector, median_rank
from dpfacility.model.cost import Agent, Instance, TOL

X_OF_Y = "x_of_y"
Y_OF_X = "y_of_x"

SNAP = 1e-9


class Polyline(NamedTuple):
    """
    A piecewise linear chain in the plane that is a function of one coordinate.

    Attributes
    ----------
    vertices : np.ndarray
        (m, 2) array of (x, y) points ordered by strictly increasing parameter coordinate.

    orientation : str
        "x_of_y" (the chain gives x as a function of y, e.g. a vertical split line) or
        "y_of_x".

    domain : (float, float)
        Closed interval of the parameter coordinate covered by the chain.
    """
    vertices: np.ndarray
    orientation: str
    domain: Tuple[float, float]

    @property
    def params(self) -> np.ndarray:
        return self.vertices[:, 1] if self.orientation == X_OF_Y else self.vertices[:, 0]

    @property
    def values(self) -> np.ndarray:
        return self.vertices[:, 0] if self.orientation == X_OF_Y else self.vertices[:, 1]

    @property
    def slopes(self) -> np.ndarray:
        return np.diff(self.values) / np.diff(self.params)

    def __call__(self, t: np.ndarray) -> np.ndarray:
        return np.interp(t, self.params, self.values)


class SplitIntersection(NamedTuple):
    """
    Where the vertical and horizontal split lines meet: a point (a == b) or a segment of
    slope +1 or -1 from a to b, with a lexicographically before b.
    """
    kind: str
    a: np.ndarray
    b: np.ndarray
    segment_slope: Optional[float] = None


def _polyline(params: np.ndarray, values: np.ndarray, orientation: str, domain: Tuple[float, float]) -> Polyline:
    points = np.column_stack([values, params]) if orientation == X_OF_Y else np.column_stack([params, values])
    return Polyline(vertices=points, orientation=orientation, domain=domain)


def _half_diamond(center_param: float, center_value: float, b: float, sign: float,
                  orientation: str, domain: Tuple[float, float]) -> Polyline:
    lo, hi = domain
    kinks = np.array([lo, center_param - b, center_param, center_param + b, hi])
    params = np.unique(kinks[(kinks >= lo) & (kinks <= hi)])
    values = center_value + sign * np.maximum(0.0, b - np.abs(params - center_param))
    return _polyline(params, values, orientation, domain)


def v_ehd(agent: Agent, med_x_key: RankKeyType, domain: Tuple[float, float]) -> Polyline:
    """
    Vertical extended half diamond of an agent: the half of its zero-cost L1 diamond facing
    the x-median, continued by vertical rays through the agent, as x = v(y).

    Parameters
    ----------
    agent : Agent
        A 2D agent.

    med_x_key : (float, int)
        (x, id) of the agent at median rank in x.

    domain : (float, float)
        Range of y the chain is clipped to.

    Returns
    ----------
    ehd : Polyline
        x = x_i + max(0, b_i - |y - y_i|) when (x_i, id_i) <= med_x_key, the mirrored
        chain otherwise.
    """
    x, y = agent.location
    sign = 1.0 if (x, agent.id) <= med_x_key else -1.0
    return _half_diamond(y, x, agent.b, sign, X_OF_Y, domain)


def h_ehd(agent: Agent, med_y_key: RankKeyType, domain: Tuple[float, float]) -> Polyline:
    """
    Horizontal extended half diamond, y = h(x): the upper half for agents at or below the
    y-median in (y, id) order, the lower half for the others.
    """
    x, y = agent.location
    sign = 1.0 if (y, agent.id) <= med_y_key else -1.0
    return _half_diamond(x, y, agent.b, sign, Y_OF_X, domain)


def _crossing_params(events: np.ndarray, values: np.ndarray) -> np.ndarray:
    """
    Parameters strictly between consecutive events where two of the linear pieces cross.
    `values` has shape (n, len(events)).
    """
    diffs = values[:, None, :] - values[None, :, :]
    d0, d1 = diffs[..., :-1], diffs[..., 1:]
    crossing = d0 * d1 < 0
    fraction = np.divide(d0, d0 - d1, out=np.zeros_like(d0), where=crossing)
    starts = np.broadcast_to(events[:-1], d0.shape)
    widths = np.broadcast_to(np.diff(events), d0.shape)
    return (starts + fraction * widths)[crossing]


def _drop_collinear(params: np.ndarray, values: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    if len(params) <= 2:
        return params, values
    slopes = np.diff(values) / np.diff(params)
    keep = np.concatenate([[True], np.abs(np.diff(slopes)) > TOL, [True]])
    return params[keep], values[keep]


def split_line(ehds: Sequence[Polyline], domain: Optional[Tuple[float, float]] = None) -> Polyline:
    """
    Pointwise median (rank floor((n + 1) / 2)) of extended half diamonds sharing one
    orientation. Between two consecutive events (a breakpoint of some chain or a crossing
    of two chains) the order of the chains is fixed, so the median there is a single linear
    piece; evaluating the order statistic at every event gives the exact chain.

    Parameters
    ----------
    ehds : sequence of Polyline
        One chain per agent, all with the same orientation.

    domain : (float, float), optional
        Parameter range; defaults to the domain of the first chain.

    Returns
    ----------
    split : Polyline
        Slopes in {-1, 0, +1}.
    """
    if not ehds:
        raise ValueError("split_line needs at least one chain")
    orientation = ehds[0].orientation
    if any(ehd.orientation != orientation for ehd in ehds):
        raise ValueError("all chains of a split line must share one orientation")
    domain = domain if domain is not None else ehds[0].domain

    breakpoints = np.concatenate([ehd.params for ehd in ehds] + [np.array(domain)])
    events = np.unique(breakpoints[(breakpoints >= domain[0]) & (breakpoints <= domain[1])])
    values = np.array([ehd(events) for ehd in ehds])
    events = np.unique(np.concatenate([events, _crossing_params(events, values)]))

    rank = RankSelector(n=len(ehds)).rank
    medians = np.sort(np.array([ehd(events) for ehd in ehds]), axis=0)[rank - 1]
    params, medians = _drop_collinear(events, medians)
    return _polyline(params, medians, orientation, domain)


def working_domain(instance: Instance, expansion: float = 2.0) -> Tuple[Tuple[float, float], Tuple[float, float]]:
    """
    The x and y ranges of the agents' bounding box expanded by `expansion` * B.
    """
    locations = instance.locations
    margin = expansion * instance.B
    lower, upper = locations.min(axis=0) - margin, locations.max(axis=0) + margin
    return (float(lower[0]), float(upper[0])), (float(lower[1]), float(upper[1]))


def median_keys(instance: Instance) -> Tuple[RankKeyType, RankKeyType]:
    locations, ids = instance.locations, instance.ids
    return median_rank(zip(locations[:, 0], ids)), median_rank(zip(locations[:, 1], ids))


def split_lines(instance: Instance) -> Tuple[Polyline, Polyline]:
    """
    The vertical split line x = V(y) and the horizontal split line y = H(x) of a 2D
    instance, clipped to its working domain.
    """
    med_x_key, med_y_key = median_keys(instance)
    x_domain, y_domain = working_domain(instance)
    vertical = split_line([v_ehd(agent, med_x_key, y_domain) for agent in instance.agents], y_domain)
    horizontal = split_line([h_ehd(agent, med_y_key, x_domain) for agent in instance.agents], x_domain)
    return vertical, horizontal


def _preimages(horizontal: Polyline, levels: np.ndarray) -> np.ndarray:
    """
    Parameters t where the non-flat pieces of y = H(t) pass through one of the given levels.
    """
    t0, t1 = horizontal.params[:-1], horizontal.params[1:]
    h0, h1 = horizontal.values[:-1], horizontal.values[1:]
    found: List[np.ndarray] = []
    for a, b, ha, hb in zip(t0, t1, h0, h1):
        if ha == hb:
            continue
        inside = levels[(levels > min(ha, hb)) & (levels < max(ha, hb))]
        found.append(a + (inside - ha) * (b - a) / (hb - ha))
    return np.concatenate(found) if found else np.array([])


def split_intersection(vertical: Polyline, horizontal: Polyline) -> SplitIntersection:
    """
    Intersects the vertical split line x = V(y) with the horizontal one y = H(x).

    A point (t, H(t)) lies on both chains exactly when g(t) = t - V(H(t)) vanishes. Both
    chains have slopes in {-1, 0, +1}, so g is piecewise linear with slopes in {0, 1, 2},
    hence non-decreasing, and its zero set is a single point or a single interval. The
    breakpoints of g are those of H plus the preimages under H of the breakpoints of V.

    Parameters
    ----------
    vertical : Polyline
        A chain with orientation "x_of_y".

    horizontal : Polyline
        A chain with orientation "y_of_x".

    Returns
    ----------
    intersection : SplitIntersection
    """
    if vertical.orientation != X_OF_Y or horizontal.orientation != Y_OF_X:
        raise ValueError("split_intersection needs an x_of_y chain and a y_of_x chain")

    ts = np.unique(np.concatenate([horizontal.params, _preimages(horizontal, vertical.params)]))
    gs = ts - vertical(horizontal(ts))

    zero = np.abs(gs) <= SNAP
    if zero.any():
        indexes = np.flatnonzero(zero)
        if indexes[-1] - indexes[0] + 1 != len(indexes):
            raise InvariantViolationError()
        t_a, t_b = float(ts[indexes[0]]), float(ts[indexes[-1]])
    else:
        changes = np.flatnonzero((gs[:-1] < 0) & (gs[1:] > 0))
        if len(changes) == 0:
            raise SplitLineError()
        if len(changes) > 1:
            raise InvariantViolationError()
        i = int(changes[0])
        t_a = t_b = float(ts[i] - gs[i] * (ts[i + 1] - ts[i]) / (gs[i + 1] - gs[i]))

    a = np.array([t_a, float(horizontal(t_a))])
    if t_b - t_a <= SNAP:
        return SplitIntersection(kind="point", a=a, b=a.copy())

    b = np.array([t_b, float(horizontal(t_b))])
    slope = (b[1] - a[1]) / (b[0] - a[0])
    inside = horizontal.params[(horizontal.params > t_a) & (horizontal.params < t_b)]
    off_line = np.abs(horizontal(inside) - (a[1] + slope * (inside - t_a)))
    if abs(abs(slope) - 1.0) > 1e-6 or (off_line > 1e-6).any():
        raise InvariantViolationError("split line intersection is not a single segment of slope +1 or -1")
    return SplitIntersection(kind="segment", a=a, b=b, segment_slope=float(np.sign(slope)))
