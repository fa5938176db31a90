import numpy as np
from toolz import curry

from dpfacility.mechanisms.ranking import median_rank
from dpfacility.model.cost import Instance, Placement, social_cost
from dpfacility.oracles.kmedian import opt_k_1d_zero_b


def _check_1d(instance: Instance, name: str) -> None:
    if instance.dim != 1:
        raise ValueError("{} needs a 1D instance".format(name))


def mech_median(instance: Instance) -> float:
    """
    Places the facility at the median agent position. Reported preferred distances are
    ignored, so no agent can gain by misreporting.

    Parameters
    ----------
    instance : Instance
        A 1D instance.

    Returns
    ----------
    location : float
    """
    _check_1d(instance, "mech_median")
    value, _ = median_rank(zip(instance.locations[:, 0], instance.ids))
    return value


def median_facing_peaks(instance: Instance) -> np.ndarray:
    """
    For each agent the preferred location facing the median agent: x + b for agents at or
    before the median in (x, id) order, x - b for the others.
    """
    xs, bs, ids = instance.locations[:, 0], instance.bs, instance.ids
    med_key = median_rank(zip(xs, ids))
    at_or_left = np.array([(x, i) <= med_key for x, i in zip(xs, ids)])
    return np.where(at_or_left, xs + bs, xs - bs)


def mech_median_plus(instance: Instance) -> float:
    """
    Median of the median-facing peaks. The facility always lands within B of the median
    agent, and its social cost is never above the plain median's.

    Parameters
    ----------
    instance : Instance
        A 1D instance.

    Returns
    ----------
    location : float
    """
    _check_1d(instance, "mech_median_plus")
    value, _ = median_rank(zip(median_facing_peaks(instance), instance.ids))
    return value


@curry
def alg_k_median(instance: Instance, k: int) -> Placement:
    """
    k facilities at the agent locations minimising the total distance, as if every
    preferred distance were 0. The returned social cost uses the true preferred distances.

    Parameters
    ----------
    instance : Instance
        A 1D instance.

    k : int
        Number of facilities, 1 <= k <= n.

    Returns
    ----------
    placement : Placement
    """
    _check_1d(instance, "alg_k_median")
    facilities = opt_k_1d_zero_b(instance.locations[:, 0], k).facilities
    return Placement(facilities=facilities, social_cost=social_cost(facilities, instance))


def mean_peaks(instance: Instance) -> float:
    """
    Average of the declared right peaks x + b. Manipulable: an agent can move the facility
    towards one of its peaks by over- or under-stating b.
    """
    _check_1d(instance, "mean_peaks")
    return float(np.mean(instance.locations[:, 0] + instance.bs))
