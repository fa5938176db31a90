import pytest

from dpfacility.exceptions.exceptions import UnknownSelectorError
from dpfacility.instances.generators import gen_I1
from dpfacility.mechanisms.selectors import MECHANISMS, ONE_DIMENSIONAL, STRATEGY_PROOF, get_mechanism
from dpfacility.model.cost import make_instance
from tests import B


def test_registry():
    assert set(STRATEGY_PROOF) | {"mean_peaks"} == set(MECHANISMS)
    assert set(ONE_DIMENSIONAL) <= set(MECHANISMS)


def test_get_mechanism_shapes():
    i1 = gen_I1(1, B)
    plane = make_instance([(0.0, 0.0), (2.0, 1.0), (4.0, 3.0)], [1.0, 0.0, 2.0], 2.0)

    assert get_mechanism("median")(i1).tolist() == [[0.0]]
    assert get_mechanism("median_plus")(i1).tolist() == [[B / 4]]
    assert get_mechanism("k_median", k=2)(i1).shape == (2, 1)
    assert get_mechanism("mean_peaks")(i1).shape == (1, 1)
    assert get_mechanism("coord_median")(plane).tolist() == [[2.0, 1.0]]
    assert get_mechanism("geometric_median", tol=1e-8)(plane).shape == (1, 2)
    assert get_mechanism("2d_median_plus")(plane).shape == (1, 2)


def test_get_mechanism_errors():
    with pytest.raises(UnknownSelectorError, match="unknown mechanism 'mode'"):
        get_mechanism("mode")
    with pytest.raises(ValueError, match="k_median needs"):
        get_mechanism("k_median")
