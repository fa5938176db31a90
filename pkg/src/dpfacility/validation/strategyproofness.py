from itertools import product
from typing import Any, Dict, Iterable, List, NamedTuple, Optional, Sequence, Tuple, Union
import warnings

from joblib import Parallel, delayed
import numpy as np
import pandas as pd
from toolz.curried import curry, merge
from tqdm import tqdm

from dpfacility.exceptions.exceptions import OracleCapacityError
from dpfacility.instances.generators import FamilySpec, generate
from dpfacility.mechanisms.selectors import get_mechanism
from dpfacility.model.cost import Instance, TOL, agent_costs, coincident_groups, social_cost, with_reports
from dpfacility.oracles.kmedian import opt_k_1d_bruteforce
from dpfacility.oracles.two_dim import solve
from dpfacility.types import LogType, MechanismFnType, RecordType
from dpfacility.utils import log_running_time
from dpfacility.version import version_info

GROUP_SIZE_CAP = 3

MechanismType = Union[str, MechanismFnType]


class DeviationResult(NamedTuple):
    """
    The most profitable misreport found for a set of agents.

    Attributes
    ----------
    agent_ids : tuple of int

    best_reports : tuple of float
        The declared b' of each deviator, all on the search grid.

    true_cost_honest : float
        Cost of the (first) deviator, under its true b, when everybody reports honestly.

    true_cost_deviating : float
        The same cost when the deviators declare `best_reports`.

    gain : float
        true_cost_honest - true_cost_deviating; positive means the misreport pays off.

    grid_pitch : float
    """
    agent_ids: Tuple[int, ...]
    best_reports: Tuple[float, ...]
    true_cost_honest: float
    true_cost_deviating: float
    gain: float
    grid_pitch: float


class AuditReport(NamedTuple):
    """
    Per-instance audit records plus the worst additive gap and the worst deviation gain.
    """
    records: pd.DataFrame
    worst_gap: float
    worst_gain: float
    log: LogType


def _resolve(mechanism: MechanismType, **params: Any) -> MechanismFnType:
    return get_mechanism(mechanism, **params) if isinstance(mechanism, str) else mechanism


def breakpoint_reports(instance: Instance, agent_id: int) -> np.ndarray:
    """
    Declared distances at which one of the agent's peaks (or diamond corners) reaches another
    agent's location or peak, per coordinate and in the instance norm, clipped to [0, B].
    """
    locations, bs = instance.locations, instance.bs
    here = locations[agent_id]
    others = np.delete(np.arange(instance.n), agent_id)
    offsets = np.abs(locations[others] - here[None, :])
    distances = [offsets[:, d] for d in range(instance.dim)]
    if instance.dim == 2:
        distances.append(offsets.sum(axis=1) if instance.norm == "L1" else np.hypot(offsets[:, 0], offsets[:, 1]))
    b_others = bs[others]
    candidates = np.concatenate([np.concatenate([d, np.abs(d - b_others), d + b_others]) for d in distances])
    return np.unique(candidates[(candidates >= 0) & (candidates <= instance.B)])


def report_grid(instance: Instance, agent_id: int, pitch: float, breakpoints: bool = True) -> np.ndarray:
    """
    Misreports searched for an agent: {0, pitch, ..., B}, the honest b and, unless turned off,
    the breakpoint reports together with the midpoints between consecutive values.
    """
    if not pitch > 0:
        raise ValueError("pitch must be positive")
    base = np.append(np.arange(0.0, instance.B, pitch), instance.B)
    grid = np.unique(np.concatenate([base, [instance.bs[agent_id]]]))
    if not breakpoints:
        return grid
    grid = np.unique(np.concatenate([grid, breakpoint_reports(instance, agent_id)]))
    return np.unique(np.concatenate([grid, (grid[:-1] + grid[1:]) / 2]))


def _true_cost(mechanism: MechanismFnType, declared: Instance, truth: Instance, agent_id: int) -> float:
    return float(agent_costs(mechanism(declared), truth)[agent_id].min())


def _best(truth: Instance, agent_ids: Tuple[int, ...], reports: Sequence[Tuple[float, ...]],
          deviating_costs: np.ndarray, honest_cost: float, pitch: float) -> DeviationResult:
    gains = honest_cost - deviating_costs
    honest = tuple(float(truth.bs[i]) for i in agent_ids)
    if gains.max() <= TOL and honest in reports:
        winner = reports.index(honest)
    else:
        winner = int(np.argmax(gains))
    return DeviationResult(agent_ids=agent_ids,
                           best_reports=tuple(float(r) for r in reports[winner]),
                           true_cost_honest=honest_cost,
                           true_cost_deviating=float(deviating_costs[winner]),
                           gain=float(gains[winner]),
                           grid_pitch=pitch)


@curry
def best_unilateral_deviation(mechanism: MechanismType, instance: Instance, agent_id: int,
                              pitch: float) -> DeviationResult:
    """
    Tries every misreport of one agent on its search grid and returns the one lowering its
    true cost the most. Locations are public and never misreported; declarations stay
    within [0, B]. Mechanisms are step functions of a single report with steps where a peak
    passes another agent's location or peak, so the grid includes those reports.

    Parameters
    ----------
    mechanism : str or function
        A registered mechanism name (see `dpfacility.mechanisms.selectors`) or a function
        from an instance to its facility array.

    instance : Instance
        The truthful instance.

    agent_id : int
        The deviating agent.

    pitch : float
        Pitch of the regular part of the grid.

    Returns
    ----------
    deviation : DeviationResult
    """
    if not 0 <= agent_id < instance.n:
        raise ValueError("agent_id {} is not an agent of the instance".format(agent_id))
    mechanism_fn = _resolve(mechanism)
    grid = report_grid(instance, agent_id, pitch)
    honest_cost = _true_cost(mechanism_fn, instance, instance, agent_id)
    costs = np.array([_true_cost(mechanism_fn, with_reports(instance, {agent_id: float(r)}), instance, agent_id)
                      for r in grid])
    return _best(instance, (agent_id,), [(float(r),) for r in grid], costs, honest_cost, pitch)


def check_partial_group(instance: Instance, group_ids: Sequence[int]) -> None:
    """
    Raises ValueError unless all agents of the group share location and true b.
    """
    agents = [instance.agents[i] for i in group_ids]
    if not agents or any((a.location, a.b) != (agents[0].location, agents[0].b) for a in agents):
        raise ValueError("not a valid partial group: {}".format(list(group_ids)))


@curry
def best_group_deviation(mechanism: MechanismType, instance: Instance, group_ids: Sequence[int],
                         pitch: float) -> DeviationResult:
    """
    Joint misreports of a partial group (co-located agents with equal true b, who all pay the
    same cost). The search covers the product of the regular grid per member and every
    common report on the full single-agent grid, breakpoints included.

    Parameters
    ----------
    mechanism : str or function

    instance : Instance

    group_ids : sequence of int
        At most GROUP_SIZE_CAP agent ids.

    pitch : float

    Returns
    ----------
    deviation : DeviationResult
    """
    group = tuple(int(i) for i in group_ids)
    check_partial_group(instance, group)
    if len(group) > GROUP_SIZE_CAP:
        raise ValueError("groups are limited to {} agents, got {}".format(GROUP_SIZE_CAP, len(group)))
    if len(group) == 1:
        return best_unilateral_deviation(mechanism, instance, group[0], pitch)

    mechanism_fn = _resolve(mechanism)
    member = group[0]
    joint = list(product(report_grid(instance, member, pitch, breakpoints=False), repeat=len(group)))
    common = [(float(r),) * len(group) for r in report_grid(instance, member, pitch)]
    reports = list(dict.fromkeys([tuple(float(r) for r in joint_report) for joint_report in joint] + common))

    honest_cost = _true_cost(mechanism_fn, instance, instance, member)
    costs = np.array([_true_cost(mechanism_fn, with_reports(instance, dict(zip(group, report))), instance, member)
                      for report in reports])
    return _best(instance, group, reports, costs, honest_cost, pitch)


def _oracle_value(instance: Instance, mechanism_name: str, params: Dict[str, Any]) -> float:
    try:
        if mechanism_name == "k_median":
            return opt_k_1d_bruteforce(instance, params["k"]).opt_value
        return solve(instance, warn=False).opt_value
    except OracleCapacityError:
        return float("nan")


def audit_instance(mechanism_name: str, instance: Instance, pitch: float,
                   params: Optional[Dict[str, Any]] = None) -> RecordType:
    """
    Runs the mechanism and the matching oracle on one instance, then searches unilateral
    misreports of every agent and joint misreports of every maximal partial group (the
    first GROUP_SIZE_CAP members of larger groups).
    """
    params = params or {}
    mechanism_fn = get_mechanism(mechanism_name, **params)
    sc = social_cost(mechanism_fn(instance), instance)
    opt = _oracle_value(instance, mechanism_name, params)

    unilateral = max(best_unilateral_deviation(mechanism_fn, instance, i, pitch).gain for i in range(instance.n))
    group_gains = []
    for group in coincident_groups(instance):
        if len(group) > GROUP_SIZE_CAP:
            warnings.warn("partial group {} capped to its first {} agents".format(list(group), GROUP_SIZE_CAP))
        group_gains.append(best_group_deviation(mechanism_fn, instance, group[:GROUP_SIZE_CAP], pitch).gain)
    group_gain = max(group_gains) if group_gains else 0.0

    return {"n": instance.n,
            "B": instance.B,
            "mechanism": mechanism_name,
            "sc": sc,
            "opt": opt,
            "gap": sc - opt,
            "gap_per_nB": (sc - opt) / (instance.n * instance.B),
            "unilateral_gain": unilateral,
            "group_gain": group_gain,
            "gain": max(unilateral, group_gain)}


def _trial_specs(family_specs: Iterable[FamilySpec], trials: int) -> List[FamilySpec]:
    return [spec._replace(seed=spec.seed + trial) for spec in family_specs for trial in range(trials)]


@log_running_time(fn_name="audit_mechanism")
def _audit(mechanism_name: str, specs: List[FamilySpec], pitch: Optional[float], params: Dict[str, Any],
           n_jobs: int, verbose: bool) -> Tuple[pd.DataFrame, LogType]:

    def run(spec: FamilySpec) -> RecordType:
        instance = generate(spec)
        record = audit_instance(mechanism_name, instance, pitch if pitch is not None else instance.B / 16, params)
        return merge({"family": spec.family, "m": spec.m, "seed": spec.seed}, record)

    records = Parallel(n_jobs=n_jobs, backend="threading")(
        delayed(run)(spec) for spec in (tqdm(specs) if verbose else specs))
    frame = pd.DataFrame(records)
    return frame, {"audit_mechanism": {"mechanism": mechanism_name,
                                       "instances": len(frame),
                                       "worst_gap": float(frame["gap"].max()),
                                       "worst_gain": float(frame["gain"].max()),
                                       "version": version_info()}}


def audit_mechanism(mechanism: str, family_specs: Iterable[FamilySpec], pitch: Optional[float] = None,
                    trials: int = 1, n_jobs: int = 1, verbose: bool = False, **params: Any) -> AuditReport:
    """
    Strategy-proofness and approximation audit of a registered mechanism over instance
    families. Each family spec is instantiated `trials` times with seeds spec.seed,
    spec.seed + 1, ...; trials run on a joblib thread pool and the records keep submission
    order, so the outcome only depends on the seeds.

    Parameters
    ----------
    mechanism : str
        Registered mechanism name.

    family_specs : iterable of FamilySpec

    pitch : float, optional
        Report grid pitch; B/16 of each instance when omitted.

    trials : int
        Instances per family spec, at least 1.

    n_jobs : int
        Number of threads.

    verbose : bool
        Shows a progress bar.

    params :
        Mechanism parameters, e.g. k for k_median.

    Returns
    ----------
    report : AuditReport
        One record per instance with columns family, m, seed, n, B, mechanism, sc, opt, gap,
        gap_per_nB, unilateral_gain, group_gain and gain.
    """
    if trials < 1:
        raise ValueError("trials must be at least 1")
    get_mechanism(mechanism, **params)
    frame, log = _audit(mechanism, _trial_specs(family_specs, trials), pitch, params, n_jobs, verbose)
    return AuditReport(records=frame,
                       worst_gap=log["audit_mechanism"]["worst_gap"],
                       worst_gain=log["audit_mechanism"]["worst_gain"],
                       log=log)
