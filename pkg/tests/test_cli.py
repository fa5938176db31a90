import io
import json

import pandas as pd
import pytest

from dpfacility.cli import build_parser, family_ref, main
from dpfacility.data.serialization import parse_instance, write_instance
from dpfacility.instances.generators import FamilySpec, gen_I1
from dpfacility.model.cost import make_instance
from dpfacility.oracles.common import BREAKPOINTS_1D
from tests import B


@pytest.fixture()
def i1_path(tmp_path):
    path = str(tmp_path / "i1.json")
    assert main(["generate", "--family", "I1", "--m", "1", "-o", path]) == 0
    return path


def test_family_ref():
    assert family_ref(FamilySpec(family="I1")) == "I1(m=1,B=960)"
    assert family_ref(FamilySpec(family="skewed", n=5, seed=2)) == "skewed(m=1,B=960,n=5,seed=2)"
    assert family_ref(FamilySpec(family="hardness_2d_l1", m=5, beta=0.4)) == \
        "hardness_2d_l1(m=5,B=960,beta=0.4,which=I1)"


def test_generate(i1_path):
    instance = parse_instance(i1_path)
    assert instance.locations.tolist() == gen_I1(1, B).locations.tolist()
    assert instance.bs.tolist() == gen_I1(1, B).bs.tolist()


def test_compare(i1_path, capsys):
    assert main(["compare", "--mech", "median", "median_plus", "-i", i1_path]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))

    assert frame["mechanism"].tolist() == ["median", "median_plus"]
    assert frame["gap"].tolist() == [720, 480]
    assert frame["within_bound"].all()


def test_compare_reruns_are_identical(i1_path, tmp_path):
    first, second = str(tmp_path / "first.csv"), str(tmp_path / "second.csv")
    for output in (first, second):
        assert main(["compare", "--mech", "median_plus", "mean_peaks", "-i", i1_path, "-o", output]) == 0

    with open(first, "rb") as a, open(second, "rb") as b:
        assert a.read() == b.read()


def test_solve_and_mech(i1_path, tmp_path, capsys):
    assert main(["solve", "-i", i1_path]) == 0
    solved = json.loads(capsys.readouterr().out)
    assert solved == {"method": BREAKPOINTS_1D, "facilities": [[-720.0]], "opt": 720.0, "guaranteed_exact": True}

    assert main(["mech", "--mech", "median_plus", "-i", i1_path]) == 0
    assert json.loads(capsys.readouterr().out) == {"mechanism": "median_plus", "facilities": [[240.0]], "sc": 1200.0}

    pair = str(tmp_path / "pair.json")
    write_instance(make_instance([0.0, 10.0], [1.0, 1.0], 1.0), pair)
    assert main(["solve", "-i", pair, "--k", "2"]) == 0
    assert json.loads(capsys.readouterr().out)["facilities"] == [[-1.0], [9.0]]


def test_validate(capsys):
    assert main(["validate", "--family", "I1", "--obs", "obs1"]) == 0
    report = json.loads(capsys.readouterr().out)

    assert report["obs_id"] == "obs1"
    assert report["all_pass"]
    assert report["checks"] == 2


def test_validate_plane_regions(capsys):
    assert main(["validate", "--family", "hardness_2d_l2", "--m", "1", "--obs", "thm11_regions"]) == 0
    report = json.loads(capsys.readouterr().out)

    assert report["obs_id"] == "thm11_regions"
    assert report["all_pass"]


def test_audit(tmp_path):
    output = str(tmp_path / "audit.csv")
    assert main(["audit", "--mech", "median_plus", "--n", "3", "--trials", "2", "-o", output]) == 0
    assert len(pd.read_csv(output)) == 2

    assert main(["audit", "--mech", "mean_peaks", "--trials", "3"]) == 1


def test_table(capsys):
    assert main(["table", "--mech", "median", "median_plus", "--family", "I1", "--values", "1", "2",
                 "--offset", "1"]) == 0
    frame = pd.read_csv(io.StringIO(capsys.readouterr().out))

    assert frame["instance"].tolist() == ["I1(m=1,B=960)"] * 2 + ["I1(m=2,B=960)"] * 2
    assert "ratio" in frame.columns
    assert frame["within_bound"].all()


def test_usage_errors(tmp_path):
    assert main([]) == 2
    assert main(["optimise"]) == 2
    assert main(["mech", "--mech", "mode", "-i", "x.json"]) == 2
    assert main(["--help"]) == 0
    assert main(["--version"]) == 0

    broken = tmp_path / "broken.json"
    broken.write_text("{")
    assert main(["compare", "--mech", "median", "-i", str(broken)]) == 2
    assert main(["solve", "-i", str(tmp_path / "missing.json")]) == 2


def test_build_parser():
    args = build_parser().parse_args(["audit", "--mech", "2d_median_plus"])
    assert args.family == "random"
    assert args.dim is None
    assert args.trials == 1
