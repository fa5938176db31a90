import numpy as np
import pytest

from dpfacility.data.serialization import dumps_instance, loads_instance, parse_instance, write_instance
from dpfacility.exceptions.exceptions import InstanceParseError
from dpfacility.instances.generators import gen_I1, gen_random
from tests import B, SMALL_B

SMALL_I1_TEXT = """{
  "dim": 1,
  "B": 8.0,
  "agents": [
    {"x": [0.0], "b": 8.0},
    {"x": [-2.0], "b": 4.0},
    {"x": [4.0], "b": 6.0}
  ]
}
"""


def _same(first, second):
    return (first.dim, first.norm, first.B) == (second.dim, second.norm, second.B) and \
        np.array_equal(first.locations, second.locations) and np.array_equal(first.bs, second.bs)


def test_loads_instance():
    instance = loads_instance('{"dim": 1, "B": 2, "agents": [{"x": [1], "b": 0.5}, {"x": [3], "b": 2}]}')

    assert instance.n == 2
    assert instance.norm == "L1"
    assert instance.B == 2.0
    assert list(instance.locations[:, 0]) == [1.0, 3.0]
    assert list(instance.ids) == [0, 1]

    plane = loads_instance('{"dim": 2, "norm": "L2", "B": 1, "agents": [{"x": [1, 2], "b": 0}]}')
    assert plane.locations.tolist() == [[1.0, 2.0]]
    assert plane.norm == "L2"


def test_dumps_instance():
    assert dumps_instance(gen_I1(1, SMALL_B)) == SMALL_I1_TEXT
    assert _same(loads_instance(SMALL_I1_TEXT), gen_I1(1, SMALL_B))

    plane = gen_random(4, B, dim=2, norm="L2", seed=3)
    text = dumps_instance(plane)
    assert '"norm": "L2"' in text
    assert _same(loads_instance(text), plane)


def test_loads_instance_points_at_the_offending_agent():
    text = SMALL_I1_TEXT.replace('{"x": [-2.0], "b": 4.0}', '{"x": [-2.0], "b": 9}')

    with pytest.raises(InstanceParseError, match="preferred distance exceeds B") as error:
        loads_instance(text)
    assert (error.value.line, error.value.column) == (6, 5)
    assert "agent 1: 9 > 8.0" in str(error.value)


@pytest.mark.parametrize("text, message", [
    ('{"dim": 1, "B": 8', "malformed document"),
    ('[1, 2]', "must be a JSON object"),
    ('{"dim": 1, "agents": [{"x": [0], "b": 0}]}', "missing key 'B'"),
    ('{"dim": 3, "B": 1, "agents": [{"x": [0], "b": 0}]}', "dim must be 1 or 2"),
    ('{"dim": 2, "B": 1, "agents": [{"x": [0, 0], "b": 0}]}', "dim/norm mismatch"),
    ('{"dim": 1, "norm": "L2", "B": 1, "agents": [{"x": [0], "b": 0}]}', "dim/norm mismatch"),
    ('{"dim": 2, "norm": "L1", "B": 1, "agents": [{"x": [0], "b": 0}]}', "dim/norm mismatch"),
    ('{"dim": 2, "norm": "Linf", "B": 1, "agents": [{"x": [0, 0], "b": 0}]}', "norm must be one of"),
    ('{"dim": 1, "B": 0, "agents": [{"x": [0], "b": 0}]}', "B must be a finite positive number"),
    ('{"dim": 1, "B": 1, "agents": []}', "non-empty"),
    ('{"dim": 1, "B": 1, "agents": [{"x": [0]}]}', "keys 'x' and 'b'"),
    ('{"dim": 1, "B": 1, "agents": [{"x": [0], "b": "1"}]}', "non-numeric"),
    ('{"dim": 1, "B": 1, "agents": [{"x": [0], "b": -1}]}', "negative preferred distance"),
])
def test_loads_instance_errors(text, message):
    with pytest.raises(InstanceParseError, match=message):
        loads_instance(text)


@pytest.mark.parametrize("text, message, line", [
    ('{\n  "dim": 1,\n  "B": 8,\n  "agents": [\n    {"x": [0], "b": NaN}\n  ]\n}', "agent 0 has a non-finite b", 5),
    ('{\n  "dim": 1,\n  "B": 8,\n  "agents": [\n    {"x": [0], "b": 1},\n    {"x": [Infinity], "b": 1}\n  ]\n}',
     "agent 1 has a non-finite location", 6),
    ('{\n  "dim": 1,\n  "B": Infinity,\n  "agents": [{"x": [0], "b": 1}]\n}', "B must be a finite positive number", 3),
])
def test_loads_instance_rejects_non_finite_values(text, message, line):
    with pytest.raises(InstanceParseError, match=message) as error:
        loads_instance(text)
    assert error.value.line == line


def test_malformed_document_position():
    with pytest.raises(InstanceParseError) as error:
        loads_instance('{\n  "dim": 1,\n  "B": ,\n}')
    assert error.value.line == 3


def test_instance_files(tmp_path):
    path = str(tmp_path / "i1.json")
    write_instance(gen_I1(2, B), path)

    with open(path, "rb") as file:
        assert b"\r" not in file.read()
    assert _same(parse_instance(path), gen_I1(2, B))

    with pytest.raises(OSError):
        parse_instance(str(tmp_path / "missing.json"))
