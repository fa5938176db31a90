from typing import Any, Callable, Dict

from toolz import curry

from dpfacility.exceptions.exceptions import UnknownSelectorError
from dpfacility.mechanisms.one_dim import alg_k_median, mean_peaks, mech_median, mech_median_plus
from dpfacility.mechanisms.two_dim import mech_2d_median_plus, mech_coord_median, mech_geometric_median
from dpfacility.model.cost import Instance, Placement, as_facilities
from dpfacility.types import FacilitiesType, MechanismFnType

MECHANISMS: Dict[str, Callable[..., Any]] = {
    "median": mech_median,
    "median_plus": mech_median_plus,
    "k_median": alg_k_median,
    "mean_peaks": mean_peaks,
    "coord_median": mech_coord_median,
    "geometric_median": mech_geometric_median,
    "2d_median_plus": mech_2d_median_plus,
}

# mechanisms proven strategy-proof; mean_peaks is only there to be caught by the audits
STRATEGY_PROOF = ("median", "median_plus", "k_median", "coord_median", "geometric_median", "2d_median_plus")

ONE_DIMENSIONAL = ("median", "median_plus", "k_median", "mean_peaks")


@curry
def _as_placement_fn(mechanism: Callable[..., Any], instance: Instance) -> FacilitiesType:
    output = mechanism(instance)
    if isinstance(output, Placement):
        return output.facilities
    return as_facilities(output, instance.dim)


def get_mechanism(name: str, **params: Any) -> MechanismFnType:
    """
    Looks a mechanism up by name and returns it as a function from an instance to its
    (k, dim) facility array, with `params` (e.g. k for k_median, tol for geometric_median)
    already applied.

    Raises
    ----------
    UnknownSelectorError
        If no mechanism is registered under `name`.
    """
    if name not in MECHANISMS:
        raise UnknownSelectorError("unknown mechanism '{}', choose one of {}".format(name, sorted(MECHANISMS)))
    mechanism = MECHANISMS[name]
    if name == "k_median" and "k" not in params:
        raise ValueError("k_median needs the number of facilities k")
    configured = mechanism(**params) if params else mechanism
    return _as_placement_fn(configured)
