import numpy as np
import pytest

from dpfacility.exceptions.exceptions import UnknownSelectorError
from dpfacility.instances.generators import (FamilySpec, beta_count, gen_2d_hardness, gen_I1, gen_I2, gen_random,
                                             gen_skewed, generate, hardness_2d_opt)
from dpfacility.oracles.one_dim import opt_1d
from tests import B


def test_gen_I1():
    instance = gen_I1(1, B)
    assert list(instance.locations[:, 0]) == [0.0, -240.0, 480.0]
    assert list(instance.bs) == [960.0, 480.0, 720.0]

    bigger = gen_I1(3, B)
    assert bigger.n == 9
    assert list(bigger.ids) == list(range(9))
    assert list(bigger.locations[:3, 0]) == [0.0] * 3

    with pytest.raises(ValueError):
        gen_I1(0, B)
    with pytest.raises(ValueError):
        gen_I1(1, 0.0)


def test_gen_I2():
    instance = gen_I2(2, B)
    assert np.array_equal(instance.locations, gen_I1(2, B).locations)
    assert list(instance.bs) == [960.0, 960.0, 480.0, 480.0, 480.0, 480.0]


def test_gen_2d_hardness():
    instance = gen_2d_hardness(5, B)
    assert instance.n == 19
    assert instance.dim == 2
    assert instance.norm == "L1"
    assert instance.locations[15:].tolist() == [[-720.0, 0.0]] * 2 + [[960.0, 0.0]] * 2
    assert list(instance.bs[15:]) == [0.0] * 4

    second = gen_2d_hardness(5, B, which="I2")
    assert list(second.bs[10:15]) == [480.0] * 5

    euclidean = gen_2d_hardness(1, B, norm="L2")
    assert euclidean.n == 3 + 2 * 3151

    assert hardness_2d_opt(5, B, 0.4) == 6960.0


def test_gen_2d_hardness_errors():
    with pytest.raises(ValueError, match="integer"):
        beta_count(1, 0.4)
    with pytest.raises(ValueError):
        gen_2d_hardness(1, B, 0.4)
    with pytest.raises(ValueError):
        gen_2d_hardness(5, B, which="I3")

    assert beta_count(5, 0.4) == 2


def test_gen_skewed():
    instance, log = gen_skewed(7, B, seed=3)

    assert instance.n == 7
    assert instance.locations[3, 0] == 0.0
    assert instance.bs[3] == B
    assert np.all(instance.bs <= B)
    assert log["gen_skewed"]["margin"] == B / 4
    assert log["gen_skewed"]["guaranteed_improvement"] == 6 * B / 4 + B / 2

    for n in (1, 4):
        with pytest.raises(ValueError):
            gen_skewed(n, B)


def test_gen_random():
    first, again = gen_random(6, B, seed=1), gen_random(6, B, seed=1)
    assert np.array_equal(first.locations, again.locations)
    assert np.array_equal(first.bs, again.bs)
    assert not np.array_equal(first.locations, gen_random(6, B, seed=2).locations)

    assert np.all(np.abs(first.locations) <= 4 * B)
    assert np.all((first.bs >= 0) & (first.bs <= B))

    plane = gen_random(4, B, dim=2, norm="L2", seed=0)
    assert plane.locations.shape == (4, 2)
    assert plane.norm == "L2"

    assert opt_1d(gen_random(1, B, seed=9)).opt_value == 0.0

    with pytest.raises(ValueError):
        gen_random(0, B)


def test_generate():
    assert np.array_equal(generate(FamilySpec(family="det_I2", m=2)).bs, gen_I2(2, B).bs)
    assert generate(FamilySpec(family="hardness_2d_l2", m=1)).norm == "L2"
    assert generate(FamilySpec(family="skewed", m=2)).n == 5
    assert generate(FamilySpec(family="random", m=4, dim=2)).dim == 2
    assert generate(FamilySpec(family="random", m=4, n=6)).n == 6

    with pytest.raises(UnknownSelectorError, match="unknown family"):
        generate(FamilySpec(family="I3"))
