import numpy as np
import pytest

from dpfacility.instances.generators import gen_I1, gen_random
from dpfacility.model.cost import make_instance
from dpfacility.validation.bounds import (RECORD_COLUMNS, RunRecord, additive_bound, average_distance_bound,
                                          bound_for, matching_oracle, records_to_frame, run_record, to_csv_text,
                                          within_all, write_csv)
from tests import B


@pytest.fixture()
def i1_records():
    instance = gen_I1(1, B)
    return [run_record("I1(m=1,B=960)", name, instance) for name in ("median", "median_plus")]


def test_bounds():
    instance = gen_I1(1, B)
    assert additive_bound(instance, 720.0) == 720.0 + 3 * B
    assert average_distance_bound(instance, 0.0, 720.0) == 720.0 + 2 * (960.0 + 480.0 + 720.0)

    # only agents within B of the facility count
    far = make_instance([0.0, 50.0], [1.0, 2.0], 2.0)
    assert average_distance_bound(far, 0.0, 10.0) == 12.0

    assert bound_for("median_plus", instance, 720.0) == 3600.0
    assert bound_for("mean_peaks", instance, 720.0) == float("inf")
    assert bound_for("k_median")(instance, 0.0, k=3) == 2 * (960.0 + 480.0 + 720.0)


def test_run_record(i1_records):
    median, plus = i1_records

    assert (median.sc, median.opt, median.gap, median.bound_rhs) == (1440.0, 720.0, 720.0, 5040.0)
    assert (plus.sc, plus.opt, plus.gap, plus.bound_rhs) == (1200.0, 720.0, 480.0, 3600.0)
    assert median.within_bound and plus.within_bound
    assert plus.facility.tolist() == [[240.0]]
    assert (plus.n, plus.B) == (3, B)


def test_run_record_k_median():
    instance = make_instance([0.0, 10.0], [1.0, 1.0], 1.0)
    record = run_record("pair", "k_median", instance, k=2)

    assert record.sc == 2.0
    assert record.opt == 0.0
    assert record.bound_rhs == 4.0
    assert record.within_bound

    with pytest.raises(ValueError, match="k_median needs"):
        matching_oracle(instance, "k_median")


def test_run_record_without_a_bound():
    instance = make_instance([(0.0, 0.0), (2.0, 1.0), (4.0, 3.0)], [1.0, 0.0, 2.0], 2.0)
    record = run_record("plane", "geometric_median", instance)

    assert record.bound_rhs == float("inf")
    assert record.within_bound
    assert np.isfinite(record.sc)


def test_records_to_frame(i1_records):
    frame = records_to_frame(i1_records)

    assert list(frame.columns) == RECORD_COLUMNS
    assert frame["mechanism"].tolist() == ["median", "median_plus"]
    assert within_all(frame)
    assert list(records_to_frame([]).columns) == RECORD_COLUMNS


def test_to_csv_text(i1_records):
    text = to_csv_text(records_to_frame(i1_records))

    assert text == ("instance,n,B,mechanism,sc,opt,gap,bound,within_bound\n"
                    "\"I1(m=1,B=960)\",3,960,median,1440,720,720,5040,True\n"
                    "\"I1(m=1,B=960)\",3,960,median_plus,1200,720,480,3600,True\n")
    assert text == to_csv_text(records_to_frame(i1_records))


def test_to_csv_text_float_format():
    record = RunRecord(instance_ref="x", mechanism="mean_peaks", facility=np.array([[0.1]]), sc=0.1, opt=0.0,
                       gap=0.1, bound_rhs=float("inf"), within_bound=True, n=1, B=1.0)
    frame = records_to_frame([record])
    assert to_csv_text(frame).splitlines()[1] == "x,1,1,mean_peaks,0.10000000000000001,0,0.10000000000000001,inf,True"

    frame.loc[0, "within_bound"] = False
    assert not within_all(frame)


def test_write_csv(tmp_path, i1_records):
    frame = records_to_frame(i1_records)
    path = str(tmp_path / "compare.csv")
    write_csv(frame, path)

    with open(path, "rb") as file:
        content = file.read()
    assert b"\r" not in content
    assert content.decode("utf-8") == to_csv_text(frame)


def test_bounds_hold_on_random_instances():
    for seed in range(200):
        line = gen_random(1 + seed % 9, B, seed=seed)
        for name in ("median", "median_plus"):
            assert run_record("random", name, line).within_bound

        small = gen_random(2 + seed % 7, B, seed=seed)
        assert run_record("random", "k_median", small, k=2).within_bound

    for seed in range(50):
        plane = gen_random(1 + seed % 6, B, dim=2, norm="L1", seed=seed)
        for name in ("coord_median", "2d_median_plus"):
            assert run_record("random", name, plane).within_bound

        euclidean = gen_random(1 + seed % 6, B, dim=2, norm="L2", seed=seed)
        record = run_record("random", "geometric_median", euclidean)
        # the L2 oracle is approximate
        assert record.sc <= record.bound_rhs + 1e-3
