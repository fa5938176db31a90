from dpfacility.mechanisms.ranking import median_rank
from dpfacility.model.cost import Instance, social_costs_at
from dpfacility.oracles.common import BREAKPOINTS_1D, OracleResult, make_result
from dpfacility.oracles.kmedian import breakpoints_1d


def opt_1d(instance: Instance) -> OracleResult:
    """
    Exact single facility optimum in 1D. The social cost is piecewise linear with slope
    changes only at x - b, x and x + b, so its global minimum is attained on that candidate
    set. Ties resolve to the smallest coordinate.

    Parameters
    ----------
    instance : Instance
        A 1D instance.

    Returns
    ----------
    result : OracleResult
        ℓ*(I) as the placement and OPT(I) as opt_value.
    """
    if instance.dim != 1:
        raise ValueError("opt_1d needs a 1D instance")
    candidates = breakpoints_1d(instance)
    return make_result(candidates.reshape(-1, 1), social_costs_at(candidates, instance), BREAKPOINTS_1D)


def opt_1d_window(instance: Instance) -> OracleResult:
    """
    The breakpoint minimum restricted to [med - B, med + B], where med is the position median.
    Equal to `opt_1d` on every instance, since an optimal location always lies in that window.
    """
    if instance.dim != 1:
        raise ValueError("opt_1d_window needs a 1D instance")
    med, _ = median_rank(list(zip(instance.locations[:, 0], instance.ids)))
    candidates = breakpoints_1d(instance)
    window = candidates[(candidates >= med - instance.B) & (candidates <= med + instance.B)]
    return make_result(window.reshape(-1, 1), social_costs_at(window, instance), BREAKPOINTS_1D)
