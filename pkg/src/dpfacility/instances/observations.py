import hashlib
from typing import Callable, Dict, Iterable, NamedTuple, Tuple
import warnings

import numpy as np

from dpfacility.exceptions.exceptions import UnknownSelectorError
from dpfacility.instances.generators import (FamilySpec, L1_HARDNESS_BETA, L2_HARDNESS_BETA, beta_count,
                                             gen_2d_hardness, gen_I1, gen_I2, generate, hardness_2d_opt)
from dpfacility.mechanisms.geometry import split_intersection, split_lines
from dpfacility.model.cost import Instance, TOL, agent_costs, make_instance, social_cost, social_costs_at
from dpfacility.oracles.one_dim import opt_1d
from dpfacility.oracles.two_dim import opt_2d_l1
from dpfacility.types import CheckListType, CheckType, LogType, MechanismFnType

SAMPLES = 1000

OBSERVATIONS = ("obs1", "obs2", "obs3", "obs4", "obs5", "obs6", "obs7", "obs8",
                "det_L1", "det_L2", "thm10_regions", "thm11_regions")


class ObservationReport(NamedTuple):
    """
    Outcome of a numeric check of one observation.

    Attributes
    ----------
    obs_id : str

    instance_digest : str
        SHA-256 of the instance the observation is about.

    checks : list of (description, expected, actual, passed)

    all_pass : bool
    """
    obs_id: str
    instance_digest: str
    checks: CheckListType
    all_pass: bool


def instance_digest(instance: Instance) -> str:
    payload = np.column_stack([instance.locations, instance.bs]).astype(float).tobytes()
    header = "{}|{}|{!r}|".format(instance.dim, instance.norm, instance.B).encode()
    return hashlib.sha256(header + payload).hexdigest()


def _tolerance(expected: float) -> float:
    return TOL * max(1.0, abs(expected))


def equal_check(description: str, expected: float, actual: float) -> CheckType:
    return description, float(expected), float(actual), bool(abs(expected - actual) <= _tolerance(expected))


def at_most_check(description: str, bound: float, values: Iterable[float], strict: bool = False) -> CheckType:
    array = np.asarray(list(values), dtype=float)
    if array.size == 0:
        return description, float(bound), float(bound), True
    actual = float(array.max())
    passed = actual < bound if strict else actual <= bound + _tolerance(bound)
    return description, float(bound), actual, bool(passed)


def at_least_check(description: str, bound: float, values: Iterable[float]) -> CheckType:
    array = np.asarray(list(values), dtype=float)
    if array.size == 0:
        return description, float(bound), float(bound), True
    actual = float(array.min())
    return description, float(bound), actual, bool(actual >= bound - _tolerance(bound))


def _inside(lo: float, hi: float, closed: bool) -> np.ndarray:
    points = np.linspace(lo, hi, SAMPLES + (0 if closed else 2))
    return points if closed else points[1:-1]


def _outside(lo: float, hi: float, B: float, closed: bool) -> np.ndarray:
    sweep = np.linspace(-3 * B, 3 * B, 6 * SAMPLES + 1)
    if closed:
        just_outside = [np.nextafter(lo, -np.inf), np.nextafter(hi, np.inf)]
        return np.concatenate([sweep[(sweep < lo) | (sweep > hi)], just_outside])
    return np.concatenate([sweep[(sweep <= lo) | (sweep >= hi)], [lo, hi]])


def _optimum_checks(instance: Instance, location: float, value: float) -> CheckListType:
    result = opt_1d(instance)
    return [equal_check("optimal location", location, result.location[0]),
            equal_check("OPT", value, result.opt_value)]


def _interval_checks(instance: Instance, lo: float, hi: float, threshold: float, closed: bool) -> CheckListType:
    inside = social_costs_at(_inside(lo, hi, closed), instance)
    outside = social_costs_at(_outside(lo, hi, instance.B, closed), instance)
    if closed:
        return [equal_check("SC at the left end", threshold, social_cost(lo, instance)),
                equal_check("SC at the right end", threshold, social_cost(hi, instance)),
                at_most_check("SC inside is at most the threshold", threshold, inside),
                at_least_check("SC outside is at least the threshold", threshold, outside)]
    return [equal_check("SC at the left end", threshold, social_cost(lo, instance)),
            equal_check("SC at the right end", threshold, social_cost(hi, instance)),
            at_most_check("SC inside is below the threshold", threshold, inside, strict=True),
            at_least_check("SC outside is at least the threshold", threshold, outside)]


def _printed_sign_warning(obs_id: str) -> None:
    warnings.warn("{}: the printed statement bounds the cost inside the interval by O - mB/5, but the cost at "
                  "the interval ends is O + mB/5; the bound O + mB/5 is what gets checked".format(obs_id))


def _obs1(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    instance = gen_I1(spec.m, spec.B)
    return instance, _optimum_checks(instance, -3 * spec.B / 4, 3 * spec.m * spec.B / 4)


def _det_l1(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    instance = gen_I1(m, B)
    checks = _interval_checks(instance, -7 * B / 8, -5 * B / 8, 7 * m * B / 8, closed=False)
    return instance, checks + [equal_check("SC at B/4", 5 * m * B / 4, social_cost(B / 4, instance))]


def _obs3(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    instance = gen_I2(spec.m, spec.B)
    return instance, _optimum_checks(instance, spec.B, 3 * spec.m * spec.B / 4)


def _det_l2(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    instance = gen_I2(m, B)
    return instance, _interval_checks(instance, 7 * B / 8, 25 * B / 24, 7 * m * B / 8, closed=False)


def embedded_l1(instance: Instance) -> Instance:
    """
    A 1D instance placed on the x-axis of the plane with the L1 norm; 2D instances pass through.
    """
    if instance.dim == 2:
        return instance
    return make_instance([(x, 0.0) for x in instance.locations[:, 0]], instance.bs, instance.B, norm="L1")


def _obs4(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    instance = embedded_l1(generate(spec))
    if instance.norm != "L1":
        raise ValueError("split lines are only defined for the L1 norm")
    vertical, horizontal = split_lines(instance)
    intersection = split_intersection(vertical, horizontal)
    slopes = np.abs(np.concatenate([vertical.slopes, horizontal.slopes]))
    checks = [at_most_check("split line slopes are in {-1, 0, 1}", 0.0, np.minimum(slopes, np.abs(slopes - 1.0)))]
    if intersection.kind == "point":
        return instance, checks + [("intersection is a point", 1.0, 1.0, True)]

    slope = (intersection.b[1] - intersection.a[1]) / (intersection.b[0] - intersection.a[0])
    endpoints = np.vstack([intersection.a, intersection.b])
    on_boundary = (agent_costs(endpoints, instance) <= 1e-6).all(axis=1)
    return instance, checks + [equal_check("segment slope is +1 or -1", 1.0, abs(slope)),
                               ("segment endpoints lie on one diamond", 1.0, float(on_boundary.sum()),
                                bool(on_boundary.any()))]


def _obs5(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    _printed_sign_warning("obs5")
    instance = gen_I1(m, B)
    threshold = 3 * m * B / 4 + m * B / 5
    return instance, _interval_checks(instance, -19 * B / 20, -11 * B / 20, threshold, closed=True)


def _obs6(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    _printed_sign_warning("obs6")
    instance = gen_I2(m, B)
    threshold = 3 * m * B / 4 + m * B / 5
    return instance, _interval_checks(instance, 4 * B / 5, 16 * B / 15, threshold, closed=True)


def _obs7(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    instance = gen_I1(m, B)
    ys = _inside(-19 * B / 20, -11 * B / 20, closed=True)
    group_3_costs = agent_costs(ys, instance)[2 * m]
    return instance, [at_least_check("group 3 cost on the interval", 3 * B / 10, group_3_costs),
                      equal_check("group 3 cost at the right end", 3 * B / 10, group_3_costs[-1])]


def _pair_costs(points: np.ndarray, instance: Instance, m: int) -> np.ndarray:
    costs = agent_costs(points, instance)
    return costs[0] + costs[m]


def _obs8(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    instance = gen_I2(m, B)
    lo, hi = 4 * B / 5, 16 * B / 15
    return instance, [at_least_check("group 1 + group 2 cost inside", 3 * B / 4,
                                     _pair_costs(_inside(lo, hi, closed=True), instance, m)),
                      at_least_check("group 1 + group 2 cost outside", B / 4,
                                     _pair_costs(_outside(lo, hi, B, closed=True), instance, m))]


def region_grid(B: float, x_range: Tuple[float, float], y_range: Tuple[float, float], pitch: float) -> np.ndarray:
    """
    Grid points covering the given box at the given pitch, x-major.
    """
    xs = np.arange(x_range[0], x_range[1] + pitch / 2, pitch)
    ys = np.arange(y_range[0], y_range[1] + pitch / 2, pitch)
    return np.column_stack([a.ravel() for a in np.meshgrid(xs, ys, indexing="ij")])


def _without_group_3(instance: Instance, m: int) -> Instance:
    keep = [a for a in instance.agents if not 2 * m <= a.id < 3 * m]
    return make_instance([a.location for a in keep], [a.b for a in keep], instance.B, norm=instance.norm)


def _stated_constant_warning(m: int, B: float, n: int) -> None:
    warnings.warn("the error bound mB/100 equals nB/{:.0f} for n = {}; the statement quotes nB/500, the "
                  "derivation gives nB/380".format(n * B / (m * B / 100), n))


def _regions_l1(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    beta = L1_HARDNESS_BETA if spec.beta is None else spec.beta
    first = gen_2d_hardness(m, B, beta, "L1", "I1")
    second = gen_2d_hardness(m, B, beta, "L1", "I2")
    optimum = hardness_2d_opt(m, B, beta)
    threshold = optimum + m * B / 5
    height = B / (10 * beta)

    checks = [equal_check("agent count", 3 * m + 2 * beta_count(m, beta), first.n),
              equal_check("OPT of the first instance", optimum, opt_2d_l1(first).opt_value),
              equal_check("OPT of the second instance", optimum, opt_2d_l1(second).opt_value),
              equal_check("SC at the first region apex", threshold,
                          social_cost([-3 * B / 4 + height, height], first)),
              equal_check("SC at the mirrored first region apex", threshold,
                          social_cost([-3 * B / 4 + height, -height], first)),
              equal_check("SC at the second region apex", threshold, social_cost([B - height, height], second))]

    grid = region_grid(B, (-2 * B, 2 * B), (-B, B), B / 100)
    first_members = grid[social_costs_at(grid, first) <= threshold + _tolerance(threshold)]
    second_members = grid[social_costs_at(grid, second) <= threshold + _tolerance(threshold)]
    checks += [at_least_check("group 3 cost inside the first region", 3 * B / 10,
                              agent_costs(first_members, first)[2 * m]),
               at_least_check("group 1 + group 2 cost inside the second region", 3 * B / 4,
                              _pair_costs(second_members, second, m)),
               at_least_check("group 1 + group 2 cost everywhere", B / 4, _pair_costs(grid, second, m)),
               at_least_check("error bound mB/100 against the stated nB/500", first.n * B / 500, [m * B / 100])]
    _stated_constant_warning(m, B, first.n)
    return first, checks


def _regions_l2(spec: FamilySpec) -> Tuple[Instance, CheckListType]:
    m, B = spec.m, spec.B
    beta = L2_HARDNESS_BETA if spec.beta is None else spec.beta
    first = gen_2d_hardness(m, B, beta, "L2", "I1")
    second = gen_2d_hardness(m, B, beta, "L2", "I2")
    optimum = hardness_2d_opt(m, B, beta)
    threshold = optimum + m * B / 5

    grid = region_grid(B, (-2 * B, 2 * B), (-B / 2, B / 2), B / 100)
    first_members = grid[social_costs_at(grid, first) <= threshold + _tolerance(threshold)]
    second_in = social_costs_at(grid, second) <= threshold + _tolerance(threshold)
    rest = social_costs_at(grid, _without_group_3(second, m))

    checks = [equal_check("SC at the first optimum", optimum, social_cost([-3 * B / 4, 0.0], first)),
              equal_check("SC at the second optimum", optimum, social_cost([B, 0.0], second)),
              at_most_check("first region stays within B/60 of the axis", B / 60,
                            np.abs(first_members[:, 1]).tolist() + [0.0]),
              at_most_check("second region stays within B/60 of the axis", B / 60,
                            np.abs(grid[second_in][:, 1]).tolist() + [0.0]),
              at_least_check("group 3 cost inside the first region", 3 * B / 10,
                             agent_costs(first_members, first)[2 * m]),
              at_least_check("cost without group 3 inside the second region", 3 * m * B / 4 + 7 * m * B * beta / 4,
                             rest[second_in]),
              at_least_check("cost without group 3 outside the second region", m * B / 4 + 7 * m * B * beta / 4,
                             rest[~second_in])]
    return first, checks


OBSERVATION_CHECKS: Dict[str, Callable[[FamilySpec], Tuple[Instance, CheckListType]]] = {
    "obs1": _obs1,
    "obs2": _det_l1,
    "obs3": _obs3,
    "obs4": _obs4,
    "obs5": _obs5,
    "obs6": _obs6,
    "obs7": _obs7,
    "obs8": _obs8,
    "det_L1": _det_l1,
    "det_L2": _det_l2,
    "thm10_regions": _regions_l1,
    "thm11_regions": _regions_l2,
}


def validate_observation(family_spec: FamilySpec, obs_id: str) -> ObservationReport:
    """
    Evaluates the equalities and inequalities an observation states about an instance
    family. Interval statements are sampled at 1000 points per interval (ends included)
    and on a sweep of [-3B, 3B] outside it; region statements are sampled on a grid of
    pitch B/100. The group size and bound come from `family_spec`; obs4 builds the family
    itself (1D families are placed on the x-axis).

    Parameters
    ----------
    family_spec : FamilySpec

    obs_id : str
        One of OBSERVATIONS.

    Returns
    ----------
    report : ObservationReport
    """
    if obs_id not in OBSERVATION_CHECKS:
        raise UnknownSelectorError("unknown observation '{}', choose one of {}".format(obs_id, OBSERVATIONS))
    instance, checks = OBSERVATION_CHECKS[obs_id](family_spec)
    return ObservationReport(obs_id=obs_id,
                             instance_digest=instance_digest(instance),
                             checks=checks,
                             all_pass=all(passed for _, _, _, passed in checks))


def lower_bound_witness(mechanism: MechanismFnType, m: int = 1, B: float = 960.0) -> LogType:
    """
    Gap of a deterministic mechanism on the two three-group instances against the nB/24
    threshold every strategy-proof deterministic mechanism must reach on one of them.
    """
    first, second = gen_I1(m, B), gen_I2(m, B)
    gaps = [social_cost(mechanism(instance), instance) - opt_1d(instance).opt_value for instance in (first, second)]
    threshold = first.n * B / 24
    return {"lower_bound_witness": {"I1_gap": gaps[0],
                                    "I2_gap": gaps[1],
                                    "threshold": threshold,
                                    "witnessed": max(gaps) >= threshold - _tolerance(threshold)}}


def group3_deviation(mechanism: MechanismFnType, m: int = 1, B: float = 960.0) -> LogType:
    """
    True cost of a third-group agent of the first three-group instance when the group reports
    honestly and when it jointly reports b = B/2, turning the declaration into the second
    instance. A strategy-proof mechanism never lets this deviation pay off.
    """
    honest, deviating = gen_I1(m, B), gen_I2(m, B)
    member = 2 * m
    honest_cost = float(agent_costs(mechanism(honest), honest)[member].min())
    deviating_cost = float(agent_costs(mechanism(deviating), honest)[member].min())
    return {"group3_deviation": {"true_cost_honest": honest_cost,
                                 "true_cost_deviating": deviating_cost,
                                 "gain": honest_cost - deviating_cost}}
