from typing import List, NamedTuple, Optional, Tuple

import numpy as np
from toolz import curry

from dpfacility.exceptions.exceptions import UnknownSelectorError
from dpfacility.model.cost import Instance, make_instance
from dpfacility.types import LogType

DEFAULT_B = 960.0

L1_HARDNESS_BETA = 0.4
L2_HARDNESS_BETA = 3151.0

FAMILIES = ("I1", "I2", "det_I1", "det_I2", "hardness_2d_l1", "hardness_2d_l2", "skewed", "random")


class FamilySpec(NamedTuple):
    """
    Names an instance family and its parameters.

    Attributes
    ----------
    family : str
        One of I1, I2, det_I1, det_I2, hardness_2d_l1, hardness_2d_l2, skewed, random.

    m : int
        Group size of the three-group families.

    B : float
        Global preferred-distance bound. The default 960 makes every interval endpoint of
        the three-group families an integer.

    beta : float, optional
        Relative size of the zero-b groups of the 2D families; defaults per norm.

    seed : int
        Seed of the skewed and random families.

    n : int, optional
        Number of agents of the skewed and random families (2m + 1 and m when omitted).

    dim : int
        Dimension of the random family.

    norm : str
        Norm of the random family.

    which : str
        Which three-group layout ("I1" or "I2") the 2D families embed.
    """
    family: str
    m: int = 1
    B: float = DEFAULT_B
    beta: Optional[float] = None
    seed: int = 0
    n: Optional[int] = None
    dim: int = 1
    norm: str = "L1"
    which: str = "I1"


def _three_groups(m: int, B: float, group_3_b: float) -> Tuple[List[float], List[float]]:
    if m < 1:
        raise ValueError("m must be at least 1")
    if not B > 0:
        raise ValueError("B must be positive")
    locations = [0.0] * m + [-B / 4] * m + [B / 2] * m
    bs = [B] * m + [B / 2] * m + [group_3_b] * m
    return locations, bs


def gen_I1(m: int, B: float = DEFAULT_B) -> Instance:
    """
    Three groups of m agents: at 0 with b = B, at -B/4 with b = B/2 and at B/2 with b = 3B/4.
    The optimum is at -3B/4 with social cost 3mB/4.
    """
    locations, bs = _three_groups(m, B, 3 * B / 4)
    return make_instance(locations, bs, B)


def gen_I2(m: int, B: float = DEFAULT_B) -> Instance:
    """
    Same as `gen_I1` except that the third group declares b = B/2. The optimum moves to B,
    still with social cost 3mB/4.
    """
    locations, bs = _three_groups(m, B, B / 2)
    return make_instance(locations, bs, B)


def default_beta(norm: str) -> float:
    return L1_HARDNESS_BETA if norm == "L1" else L2_HARDNESS_BETA


def beta_count(m: int, beta: float) -> int:
    count = beta * m
    if abs(count - round(count)) > 1e-9:
        raise ValueError("beta * m must be an integer, got {} * {} = {}".format(beta, m, count))
    return int(round(count))


@curry
def gen_2d_hardness(m: int, B: float = DEFAULT_B, beta: Optional[float] = None, norm: str = "L1",
                    which: str = "I1") -> Instance:
    """
    The three-group layout placed on the x-axis of the plane, plus two groups of beta * m
    agents with b = 0 at (-3B/4, 0) and (B, 0). Those extra agents make every point off
    the axis expensive, so the optimum stays 3mB/4 + 7 beta m B / 4.

    Parameters
    ----------
    m : int
        Group size.

    B : float
        Global bound.

    beta : float, optional
        Relative size of each zero-b group; 2/5 for L1 and 3151 for L2 by default.

    norm : str
        "L1" or "L2".

    which : str
        "I1" or "I2".

    Returns
    ----------
    instance : Instance
        n = 3m + 2 beta m agents.
    """
    if which not in ("I1", "I2"):
        raise ValueError("which must be I1 or I2, got {}".format(which))
    beta = default_beta(norm) if beta is None else beta
    extra = beta_count(m, beta)
    locations, bs = _three_groups(m, B, 3 * B / 4 if which == "I1" else B / 2)
    points = [(x, 0.0) for x in locations] + [(-3 * B / 4, 0.0)] * extra + [(B, 0.0)] * extra
    return make_instance(points, bs + [0.0] * (2 * extra), B, norm=norm)


def hardness_2d_opt(m: int, B: float, beta: float) -> float:
    return 3 * m * B / 4 + 7 * beta * m * B / 4


def gen_skewed(n: int, B: float = DEFAULT_B, seed: int = 0) -> Tuple[Instance, LogType]:
    """
    A strongly skewed 1D instance: the median agent sits at 0 with b = B, and every other
    agent's median-facing peak falls in [-3B/4, -B/2], at least B/4 left of the median.
    Agents left of the median sit in [-5B/4, -B], those right of it in [B/8, B/4].

    Median-Plus lands among the skewed peaks while the plain median stays at 0, so every
    non-median agent gains at least B/4 and the median agent at least B/2.

    Parameters
    ----------
    n : int
        Odd number of agents, at least 3.

    B : float
        Global bound.

    seed : int
        Seed of the random generator.

    Returns
    ----------
    instance : Instance

    log : dict
        The skew margin and the guaranteed improvement (n - 1) B / 4 + B / 2 of Median-Plus
        over the median.
    """
    if n < 3 or n % 2 == 0:
        raise ValueError("gen_skewed needs an odd n >= 3, got {}".format(n))
    rng = np.random.default_rng(seed)
    half = (n - 1) // 2

    left_x = rng.uniform(-5 * B / 4, -B, half)
    left_peaks = rng.uniform(-3 * B / 4, -B / 2, half)
    right_x = rng.uniform(B / 8, B / 4, half)
    right_peaks = rng.uniform(-3 * B / 4, -B / 2, half)

    locations = np.concatenate([left_x, [0.0], right_x])
    bs = np.concatenate([left_peaks - left_x, [B], right_x - right_peaks])
    instance = make_instance(locations, np.clip(bs, 0.0, B), B)

    margin = B / 4
    return instance, {"gen_skewed": {"n": n,
                                     "B": B,
                                     "seed": seed,
                                     "margin": margin,
                                     "guaranteed_improvement": (n - 1) * B / 4 + B / 2}}


def gen_random(n: int, B: float = DEFAULT_B, dim: int = 1, norm: str = "L1", seed: int = 0) -> Instance:
    """
    Locations uniform in [-4B, 4B]^dim and preferred distances uniform in [0, B].
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    rng = np.random.default_rng(seed)
    locations = rng.uniform(-4 * B, 4 * B, (n, dim))
    bs = rng.uniform(0.0, B, n)
    return make_instance(list(locations) if dim == 2 else locations[:, 0], bs, B, norm=norm)


def generate(spec: FamilySpec) -> Instance:
    """
    Builds the instance a family spec names.

    Raises
    ----------
    UnknownSelectorError
        If the family is not one of FAMILIES.
    """
    family = spec.family
    if family in ("I1", "det_I1"):
        return gen_I1(spec.m, spec.B)
    if family in ("I2", "det_I2"):
        return gen_I2(spec.m, spec.B)
    if family in ("hardness_2d_l1", "hardness_2d_l2"):
        norm = "L1" if family == "hardness_2d_l1" else "L2"
        return gen_2d_hardness(spec.m, spec.B, spec.beta, norm, spec.which)
    if family == "skewed":
        instance, _ = gen_skewed(spec.n if spec.n is not None else 2 * spec.m + 1, spec.B, spec.seed)
        return instance
    if family == "random":
        return gen_random(spec.n if spec.n is not None else spec.m, spec.B, spec.dim, spec.norm, spec.seed)
    raise UnknownSelectorError("unknown family '{}', choose one of {}".format(family, FAMILIES))
