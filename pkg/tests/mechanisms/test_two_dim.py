import numpy as np
import pytest

from dpfacility.exceptions.exceptions import ConvergenceError
from dpfacility.instances.generators import gen_random
from dpfacility.mechanisms.geometry import working_domain
from dpfacility.mechanisms.two_dim import (alternating_moves, mech_2d_median_plus, mech_coord_median,
                                           mech_geometric_median)
from dpfacility.model.cost import make_instance, social_cost
from tests import B, FUZZ_SEEDS


@pytest.fixture()
def collinear():
    return make_instance([(0.0, 0.0), (1.0, 0.0), (5.0, 0.0)], [0.0] * 3, 1.0, norm="L2")


def test_mech_coord_median():
    instance = make_instance([(-2.0, 1.0), (0.0, 0.0), (4.0, 2.0)], [1.0, 0.0, 2.0], 2.0)
    assert mech_coord_median(instance).tolist() == [0.0, 1.0]

    with pytest.raises(ValueError, match="2D"):
        mech_coord_median(make_instance([0.0], [0.0], 1.0))


def test_mech_geometric_median(collinear):
    square = make_instance([(1.0, 1.0), (-1.0, 1.0), (-1.0, -1.0), (1.0, -1.0)], [0.0] * 4, 1.0, norm="L2")
    assert np.allclose(mech_geometric_median(square), [0.0, 0.0])

    assert np.allclose(mech_geometric_median(collinear), [1.0, 0.0], atol=1e-6)
    assert np.allclose(mech_geometric_median(tol=1e-9)(collinear), [1.0, 0.0], atol=1e-6)


def test_mech_geometric_median_errors(collinear):
    with pytest.raises(ConvergenceError) as error:
        mech_geometric_median(collinear, max_iterations=1)
    assert error.value.best_iterate is not None

    with pytest.raises(ValueError):
        mech_geometric_median(collinear, tol=0.0)


def test_mech_2d_median_plus():
    single = mech_2d_median_plus(make_instance([(0.0, 0.0)], [1.0], 1.0))
    assert single.tolist() == [0.5, 0.5]

    with pytest.raises(ValueError, match="L1"):
        mech_2d_median_plus(make_instance([(0.0, 0.0)], [1.0], 1.0, norm="L2"))
    with pytest.raises(ValueError, match="2D"):
        mech_2d_median_plus(make_instance([0.0], [1.0], 1.0))


def test_mech_2d_median_plus_without_preferred_distances():
    rng = np.random.default_rng(8)
    for n in range(1, 8):
        instance = make_instance(list(rng.uniform(-10, 10, (n, 2))), np.zeros(n), 1.0)
        assert np.allclose(mech_2d_median_plus(instance), mech_coord_median(instance))


def test_mech_2d_median_plus_fuzz():
    for seed in FUZZ_SEEDS:
        instance = gen_random(1 + seed % 7, B, dim=2, norm="L1", seed=seed)
        location = mech_2d_median_plus(instance)

        assert social_cost(location, instance) <= social_cost(mech_coord_median(instance), instance) + 1e-6
        (x_lo, x_hi), (y_lo, y_hi) = working_domain(instance)
        assert x_lo <= location[0] <= x_hi
        assert y_lo <= location[1] <= y_hi


def test_alternating_moves():
    for seed in FUZZ_SEEDS:
        instance = gen_random(1 + seed % 7, B, dim=2, norm="L1", seed=seed)
        path, costs = alternating_moves(instance)

        assert np.array_equal(path[0], mech_coord_median(instance))
        assert len(costs) == len(path)
        assert all(after <= before + 1e-6 for before, after in zip(costs, costs[1:]))
