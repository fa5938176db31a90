from typing import Any, Dict, Iterable, NamedTuple, Sequence, Tuple

import numpy as np
from scipy.spatial.distance import cdist
from toolz import curry

from dpfacility.exceptions.exceptions import InvalidInstanceError
from dpfacility.types import FacilitiesType, PointType

TOL = 1e-9

NORMS = ("L1", "L2")

_CDIST_METRIC = {"L1": "cityblock", "L2": "euclidean"}


class Agent(NamedTuple):
    """
    An agent with a public location and a declared preferred distance.

    Attributes
    ----------
    location : tuple of float
        One or two coordinates, in the same length units as the instance bound B.

    b : float
        The declared preferred distance, 0 <= b <= B.

    id : int
        Stable ordering key, unique within an instance.
    """
    location: Tuple[float, ...]
    b: float
    id: int


class Instance(NamedTuple):
    """
    The unit every mechanism and oracle consumes: agents, dimension, norm and the global bound B.
    The norm is only meaningful for dim=2; 1D instances carry "L1".
    """
    agents: Tuple[Agent, ...]
    dim: int
    norm: str
    B: float

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def locations(self) -> np.ndarray:
        return np.array([a.location for a in self.agents], dtype=float).reshape(self.n, self.dim)

    @property
    def bs(self) -> np.ndarray:
        return np.array([a.b for a in self.agents], dtype=float)

    @property
    def ids(self) -> np.ndarray:
        return np.array([a.id for a in self.agents], dtype=int)


class Placement(NamedTuple):
    """
    k >= 1 facility points (shape (k, dim)) with their social cost attached.
    """
    facilities: FacilitiesType
    social_cost: float


def validate_instance(instance: Instance) -> Instance:
    """
    Checks the instance invariants and returns the instance untouched.

    Raises
    ----------
    InvalidInstanceError
        If any invariant (dimension, norm, ids, finite values, 0 <= b <= B, B > 0, n >= 1) is broken.
    """
    if instance.dim not in (1, 2):
        raise InvalidInstanceError("dim must be 1 or 2, got {}".format(instance.dim))
    if instance.norm not in NORMS:
        raise InvalidInstanceError("norm must be one of {}, got {}".format(NORMS, instance.norm))
    if not np.isfinite(instance.B) or not instance.B > 0:
        raise InvalidInstanceError("B must be finite and positive")
    if instance.n < 1:
        raise InvalidInstanceError("an instance needs at least one agent")
    if [a.id for a in instance.agents] != list(range(instance.n)):
        raise InvalidInstanceError("agent ids must be 0..n-1 in order")
    for agent in instance.agents:
        if len(agent.location) != instance.dim:
            raise InvalidInstanceError("agent {} location has length {}, expected {}"
                                       .format(agent.id, len(agent.location), instance.dim))
        if not np.all(np.isfinite(agent.location)) or not np.isfinite(agent.b):
            raise InvalidInstanceError("agent {} has a non-finite location or preferred distance".format(agent.id))
        if agent.b < 0:
            raise InvalidInstanceError("agent {} has a negative preferred distance".format(agent.id))
        if agent.b > instance.B:
            raise InvalidInstanceError("preferred distance exceeds B (agent {}: {} > {})"
                                       .format(agent.id, agent.b, instance.B))
    return instance


def make_instance(locations: Iterable[Any], b: Iterable[float], B: float, norm: str = "L1") -> Instance:
    """
    Builds a validated instance from parallel sequences of locations and preferred distances.

    Parameters
    ----------
    locations : iterable
        Scalars (1D) or pairs (2D). Scalars are promoted to 1-tuples.

    b : iterable of float
        Preferred distances, one per agent.

    B : float
        Global preferred-distance bound.

    norm : str
        "L1" or "L2"; ignored (stored as "L1") for 1D instances.

    Returns
    ----------
    instance : Instance
    """
    points = [tuple(float(c) for c in np.atleast_1d(loc)) for loc in locations]
    bs = [float(v) for v in b]
    if len(points) != len(bs):
        raise InvalidInstanceError("got {} locations but {} preferred distances".format(len(points), len(bs)))
    dim = len(points[0]) if points else 1
    agents = tuple(Agent(location=p, b=v, id=i) for i, (p, v) in enumerate(zip(points, bs)))
    return validate_instance(Instance(agents=agents, dim=dim, norm=norm if dim == 2 else "L1", B=float(B)))


def with_reports(instance: Instance, reports: Dict[int, float]) -> Instance:
    """
    The instance as seen by a mechanism when the agents in `reports` declare b' instead of b.
    Locations are public and never change.
    """
    for agent_id, report in reports.items():
        if not 0 <= report <= instance.B:
            raise ValueError("report {} of agent {} is outside [0, B]".format(report, agent_id))
    agents = tuple(a._replace(b=float(reports[a.id])) if a.id in reports else a for a in instance.agents)
    return instance._replace(agents=agents)


def as_facilities(facilities: Any, dim: int) -> FacilitiesType:
    """
    Coerces a point, a scalar or a sequence of points into a (k, dim) float array.
    """
    array = np.asarray(facilities, dtype=float)
    if array.size == 0:
        raise ValueError("no facilities")
    if dim == 1:
        return array.reshape(-1, 1)
    array = np.atleast_2d(array)
    if array.shape[1] != dim:
        raise ValueError("facility points must have {} coordinates".format(dim))
    return array


def cost_1d(y: float, agent: Agent) -> float:
    """
    Cost of a 1D agent for a facility at y, using the two-case definition:
    |x - b - y| when y <= x, |x + b - y| otherwise. Zero exactly at x +/- b.
    """
    x = agent.location[0]
    if y <= x:
        return abs(x - agent.b - y)
    return abs(x + agent.b - y)


@curry
def cost_2d(y: PointType, agent: Agent, norm: str = "L1") -> float:
    """
    Cost of a 2D agent: | ||x - y|| - b | under the L1 or L2 norm. Zero exactly on the
    diamond (L1) or circle (L2) of radius b around the agent.
    """
    diff = np.asarray(agent.location, dtype=float) - np.asarray(y, dtype=float)
    dist = np.abs(diff).sum() if norm == "L1" else float(np.hypot(diff[0], diff[1]))
    return float(abs(dist - agent.b))


def distance_matrix(points: np.ndarray, facilities: FacilitiesType, norm: str) -> np.ndarray:
    return cdist(points, facilities, metric=_CDIST_METRIC[norm])


def agent_costs(facilities: Any, instance: Instance) -> np.ndarray:
    """
    Matrix of per-agent costs, shape (n, k): entry (i, j) is agent i's cost if served by facility j.
    """
    points = as_facilities(facilities, instance.dim)
    return np.abs(distance_matrix(instance.locations, points, instance.norm) - instance.bs[:, None])


def assign_facilities(facilities: Any, instance: Instance) -> np.ndarray:
    """
    Index of the cheapest facility per agent; ties go to the lowest facility index.
    """
    return np.argmin(agent_costs(facilities, instance), axis=1)


def social_cost(facilities: Any, instance: Instance) -> float:
    """
    Sum over agents of their cost at the cheapest facility.

    Parameters
    ----------
    facilities : array-like
        A single point, a 1D scalar, or a sequence of k points.

    instance : Instance

    Returns
    ----------
    sc : float
    """
    return float(agent_costs(facilities, instance).min(axis=1).sum())


def social_costs_at(points: np.ndarray, instance: Instance, chunk_size: int = 200_000) -> np.ndarray:
    """
    Social cost of a single facility placed at each of the given candidate points, shape (m,).
    Agents sharing location and b are evaluated once and weighted by their count, and
    candidates are processed in chunks so large candidate sets stay within memory.
    """
    candidates = as_facilities(points, instance.dim)
    types, counts = np.unique(np.column_stack([instance.locations, instance.bs]), axis=0, return_counts=True)
    locations, bs = types[:, :-1], types[:, -1]
    return np.concatenate([
        np.abs(distance_matrix(candidates[start:start + chunk_size], locations, instance.norm) - bs[None, :])
        @ counts
        for start in range(0, len(candidates), chunk_size)])


@curry
def cost_with_offset(facilities: Any, instance: Instance, c: float) -> float:
    """
    Social cost under the offset cost function, where every agent pays c on top of its cost.
    Used to express the additive guarantees as multiplicative ratios, at most 1 + B/c.
    """
    if not c > 0:
        raise ValueError("the offset c must be positive")
    return social_cost(facilities, instance) + instance.n * c


def multiplicative_ratio(sc: float, opt: float, n: int, c: float) -> float:
    if not c > 0:
        raise ValueError("the offset c must be positive")
    return (sc + n * c) / (opt + n * c)


def nearest_peak(y: float, agent: Agent) -> float:
    """
    The preferred location of a 1D agent that is closest to y (x - b for y <= x, x + b otherwise).
    """
    x = agent.location[0]
    return x - agent.b if y <= x else x + agent.b


def coincident_groups(instance: Instance) -> Sequence[Tuple[int, ...]]:
    """
    Maximal groups (size >= 2) of co-located agents with equal declared b, in order of first id.
    """
    groups: Dict[Tuple[Tuple[float, ...], float], Tuple[int, ...]] = {}
    for agent in instance.agents:
        key = (agent.location, agent.b)
        groups[key] = groups.get(key, ()) + (agent.id,)
    return [ids for ids in groups.values() if len(ids) > 1]
