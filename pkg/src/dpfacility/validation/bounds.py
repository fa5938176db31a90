from typing import Any, Iterable, List, NamedTuple, Optional

import numpy as np
import pandas as pd
from toolz import curry

from dpfacility.mechanisms.selectors import get_mechanism
from dpfacility.model.cost import Instance, TOL, as_facilities, distance_matrix, social_cost
from dpfacility.oracles.common import OracleResult
from dpfacility.oracles.kmedian import opt_k_1d_bruteforce
from dpfacility.oracles.two_dim import solve

RECORD_COLUMNS = ["instance", "n", "B", "mechanism", "sc", "opt", "gap", "bound", "within_bound"]

FLOAT_FORMAT = "%.17g"


class RunRecord(NamedTuple):
    """
    One mechanism run compared against the oracle and the applicable approximation bound.

    Attributes
    ----------
    instance_ref : str
        A file path or a family reference such as "I1(m=1,B=960)".

    mechanism : str
        Registered mechanism name.

    facility : np.ndarray
        The (k, dim) facility array.

    sc : float
        Social cost of the facilities, under the declared (= true) preferred distances.

    opt : float
        The oracle value.

    gap : float
        sc - opt.

    bound_rhs : float
        Right-hand side of the bound; inf when the mechanism has none.

    within_bound : bool
        sc <= bound_rhs + TOL.

    n : int

    B : float
    """
    instance_ref: str
    mechanism: str
    facility: np.ndarray
    sc: float
    opt: float
    gap: float
    bound_rhs: float
    within_bound: bool
    n: int
    B: float


def additive_bound(instance: Instance, opt: float) -> float:
    """OPT + nB, the guarantee of Median-Plus."""
    return opt + instance.n * instance.B


def average_distance_bound(instance: Instance, facilities: Any, opt: float) -> float:
    """
    OPT + 2 r b_avg, where the r agents are those within distance B of their nearest facility
    and b_avg is their mean preferred distance. Valid for placements that are optimal once
    every preferred distance is reset to 0 (the median, the k-median placement, the L1
    coordinate median and the L2 geometric median).

    Parameters
    ----------
    instance : Instance

    facilities : array-like
        The placement the bound is about.

    opt : float
        The optimal social cost.

    Returns
    ----------
    bound : float
    """
    points = as_facilities(facilities, instance.dim)
    nearest = distance_matrix(instance.locations, points, instance.norm).min(axis=1)
    return opt + 2 * float(instance.bs[nearest <= instance.B].sum())


@curry
def bound_for(mechanism_name: str, instance: Instance, opt: float, k: Optional[int] = None) -> float:
    """
    The tightest approximation guarantee known for the mechanism on this instance.
    Median-Plus gets the smaller of OPT + nB and the average-distance bound of the median
    it dominates; 2D-Median-Plus gets the average-distance bound of the coordinate median it
    dominates. Mechanisms without a guarantee get inf.

    Parameters
    ----------
    mechanism_name : str

    instance : Instance

    opt : float
        The optimal social cost (the k-facility optimum for k_median).

    k : int, optional
        Number of facilities of k_median.

    Returns
    ----------
    bound : float
    """
    if mechanism_name == "median":
        return average_distance_bound(instance, get_mechanism("median")(instance), opt)
    if mechanism_name == "median_plus":
        return min(additive_bound(instance, opt),
                   average_distance_bound(instance, get_mechanism("median")(instance), opt))
    if mechanism_name == "k_median":
        return average_distance_bound(instance, get_mechanism("k_median", k=k)(instance), opt)
    if mechanism_name in ("coord_median", "2d_median_plus") and instance.norm == "L1":
        return average_distance_bound(instance, get_mechanism("coord_median")(instance), opt)
    if mechanism_name == "geometric_median" and instance.norm == "L2":
        return average_distance_bound(instance, get_mechanism("geometric_median")(instance), opt)
    return float("inf")


def matching_oracle(instance: Instance, mechanism_name: str, k: Optional[int] = None) -> OracleResult:
    """
    The oracle a mechanism is compared against: the k-facility brute force for k_median,
    the single-facility oracle of the instance setting otherwise.
    """
    if mechanism_name == "k_median":
        if k is None:
            raise ValueError("k_median needs the number of facilities k")
        return opt_k_1d_bruteforce(instance, k)
    return solve(instance)


def run_record(instance_ref: str, mechanism_name: str, instance: Instance, k: Optional[int] = None,
               oracle: Optional[OracleResult] = None) -> RunRecord:
    """
    Runs the mechanism and its oracle on the instance and checks the applicable bound.

    Parameters
    ----------
    instance_ref : str
        Stored as-is in the record.

    mechanism_name : str
        Registered mechanism name.

    instance : Instance

    k : int, optional
        Number of facilities, for k_median only.

    oracle : OracleResult, optional
        Precomputed oracle result, so one oracle run can serve several mechanisms.

    Returns
    ----------
    record : RunRecord
    """
    params = {"k": k} if mechanism_name == "k_median" else {}
    facilities = get_mechanism(mechanism_name, **params)(instance)
    oracle = oracle if oracle is not None else matching_oracle(instance, mechanism_name, k)

    sc = social_cost(facilities, instance)
    bound = bound_for(mechanism_name, instance, oracle.opt_value, k)
    return RunRecord(instance_ref=instance_ref,
                     mechanism=mechanism_name,
                     facility=facilities,
                     sc=sc,
                     opt=oracle.opt_value,
                     gap=sc - oracle.opt_value,
                     bound_rhs=bound,
                     within_bound=bool(sc <= bound + TOL),
                     n=instance.n,
                     B=instance.B)


def records_to_frame(records: Iterable[RunRecord]) -> pd.DataFrame:
    """
    Run records as a DataFrame with the stable columns
    instance, n, B, mechanism, sc, opt, gap, bound, within_bound.
    """
    rows: List[dict] = [{"instance": r.instance_ref,
                         "n": r.n,
                         "B": r.B,
                         "mechanism": r.mechanism,
                         "sc": r.sc,
                         "opt": r.opt,
                         "gap": r.gap,
                         "bound": r.bound_rhs,
                         "within_bound": r.within_bound} for r in records]
    return pd.DataFrame(rows, columns=RECORD_COLUMNS)


def to_csv_text(frame: pd.DataFrame) -> str:
    """
    CSV with a header row, LF line endings and 17 significant digits per float, so equal
    frames always render to identical text and every double reads back exactly.
    """
    return frame.to_csv(index=False, float_format=FLOAT_FORMAT).replace("\r\n", "\n")


def write_csv(frame: pd.DataFrame, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as file:
        file.write(to_csv_text(frame))


def within_all(frame: pd.DataFrame) -> bool:
    return bool(np.all(frame["within_bound"].to_numpy(dtype=bool)))
