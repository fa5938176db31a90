import pytest

from dpfacility.exceptions.exceptions import UnknownSelectorError
from dpfacility.instances.generators import FamilySpec, gen_I1
from dpfacility.instances.observations import (at_least_check, at_most_check, equal_check, group3_deviation,
                                               instance_digest, lower_bound_witness, validate_observation)
from dpfacility.mechanisms.selectors import get_mechanism
from dpfacility.model.cost import make_instance
from tests import B


@pytest.mark.parametrize("obs_id", ["obs1", "obs2", "obs3", "obs4", "obs7", "obs8", "det_L1", "det_L2"])
def test_validate_observation(obs_id):
    report = validate_observation(FamilySpec(family="I1", m=1, B=B), obs_id)

    assert report.obs_id == obs_id
    assert report.checks
    assert report.all_pass, [check for check in report.checks if not check[3]]


def test_validate_observation_for_larger_groups():
    for obs_id in ("obs1", "det_L1", "det_L2", "obs7", "obs8"):
        assert validate_observation(FamilySpec(family="I1", m=3, B=B), obs_id).all_pass


@pytest.mark.parametrize("obs_id", ["obs5", "obs6"])
def test_validate_observation_with_the_printed_sign(obs_id):
    with pytest.warns(UserWarning, match="O \\+ mB/5"):
        report = validate_observation(FamilySpec(family="I1", m=1, B=B), obs_id)
    assert report.all_pass


def test_validate_observation_split_lines_of_a_2d_family():
    report = validate_observation(FamilySpec(family="hardness_2d_l1", m=5, B=B), "obs4")
    assert report.checks[0][3]

    with pytest.raises(ValueError, match="L1"):
        validate_observation(FamilySpec(family="hardness_2d_l2", m=1, B=B), "obs4")


def test_validate_l1_regions():
    with pytest.warns(UserWarning, match="nB/500"):
        report = validate_observation(FamilySpec(family="hardness_2d_l1", m=5, B=B), "thm10_regions")

    assert report.all_pass, [check for check in report.checks if not check[3]]
    optimum = next(check for check in report.checks if check[0] == "OPT of the first instance")
    assert optimum[2] == pytest.approx(6960.0)


def test_validate_l2_regions():
    report = validate_observation(FamilySpec(family="hardness_2d_l2", m=1, B=B), "thm11_regions")
    assert report.all_pass, [check for check in report.checks if not check[3]]


def test_validate_observation_errors():
    with pytest.raises(UnknownSelectorError, match="unknown observation"):
        validate_observation(FamilySpec(family="I1"), "obs9")


def test_instance_digest():
    assert instance_digest(gen_I1(1, B)) == instance_digest(gen_I1(1, B))
    assert instance_digest(gen_I1(1, B)) != instance_digest(gen_I1(2, B))
    assert instance_digest(make_instance([0.0], [1.0], 2.0)) != instance_digest(make_instance([0.0], [1.0], 3.0))
    assert len(instance_digest(gen_I1(1, B))) == 64


def test_checks():
    assert equal_check("x", 720.0, 720.0 + 1e-8)[3]
    assert not equal_check("x", 720.0, 721.0)[3]
    assert at_most_check("x", 1.0, [0.5, 1.0])[3]
    assert not at_most_check("x", 1.0, [0.5, 1.0], strict=True)[3]
    assert at_least_check("x", 1.0, [])[3]
    assert not at_least_check("x", 1.0, [0.5, 2.0])[3]


def test_lower_bound_witness():
    median = lower_bound_witness(get_mechanism("median"))["lower_bound_witness"]
    assert median["I1_gap"] == 720.0
    assert median["I2_gap"] == 480.0
    assert median["threshold"] == 120.0
    assert median["witnessed"]

    plus = lower_bound_witness(get_mechanism("median_plus"))["lower_bound_witness"]
    assert plus["I1_gap"] == 480.0
    assert plus["I2_gap"] == 240.0
    assert plus["witnessed"]


def test_group3_deviation():
    log = group3_deviation(get_mechanism("median_plus"))["group3_deviation"]
    assert log["true_cost_honest"] == 480.0
    assert log["gain"] <= 1e-9

    # with two agents per group the facility already sits on a peak of the third group
    assert group3_deviation(get_mechanism("median_plus"), m=2)["group3_deviation"]["gain"] < 0.0

    assert group3_deviation(get_mechanism("median"))["group3_deviation"]["gain"] == 0.0
