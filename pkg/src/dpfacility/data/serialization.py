import json
import math
import re
from numbers import Real
from typing import Any, Dict, List, Optional, Tuple

from dpfacility.exceptions.exceptions import InstanceParseError, InvalidInstanceError
from dpfacility.model.cost import NORMS, Instance, make_instance

_DECODER = json.JSONDecoder()

_SEPARATORS = " \t\r\n,"


def _position(text: str, offset: int) -> Tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    return line, offset - text.rfind("\n", 0, offset)


def _key_offset(text: str, key: str) -> int:
    match = re.search(r'"{}"\s*:'.format(re.escape(key)), text)
    return match.start() if match else 0


def _agent_offsets(text: str) -> List[int]:
    """
    Start offset of every element of the "agents" array of an already valid document.
    """
    match = re.search(r'"agents"\s*:\s*\[', text)
    if match is None:
        return []
    offsets, index = [], match.end()
    while True:
        while index < len(text) and text[index] in _SEPARATORS:
            index += 1
        if index >= len(text) or text[index] == "]":
            return offsets
        offsets.append(index)
        _, index = _DECODER.raw_decode(text, index)


def _is_number(value: Any) -> bool:
    return isinstance(value, Real) and not isinstance(value, bool)


def _is_finite(value: Any) -> bool:
    return _is_number(value) and math.isfinite(value)


class _Document:
    """Raises parse errors pointing at the offending part of the text."""

    def __init__(self, text: str) -> None:
        self.text = text
        self._agents: Optional[List[int]] = None

    def fail(self, msg: str, offset: int = 0) -> InstanceParseError:
        line, column = _position(self.text, offset)
        return InstanceParseError(msg, line=line, column=column)

    def fail_at_key(self, msg: str, key: str) -> InstanceParseError:
        return self.fail(msg, _key_offset(self.text, key))

    def fail_at_agent(self, msg: str, agent: int) -> InstanceParseError:
        if self._agents is None:
            self._agents = _agent_offsets(self.text)
        return self.fail(msg, self._agents[agent] if agent < len(self._agents) else 0)


def _parse_header(document: _Document, data: Dict[str, Any]) -> Tuple[int, str, float]:
    for key in ("dim", "B", "agents"):
        if key not in data:
            raise document.fail("missing key '{}'".format(key))

    dim = data["dim"]
    if dim not in (1, 2) or isinstance(dim, bool):
        raise document.fail_at_key("dim must be 1 or 2, got {!r}".format(dim), "dim")

    norm = data.get("norm", "L1" if dim == 1 else None)
    if norm is None:
        raise document.fail_at_key("dim/norm mismatch: a 2D instance needs a norm (L1 or L2)", "dim")
    if norm not in NORMS:
        raise document.fail_at_key("norm must be one of {}, got {!r}".format(NORMS, norm), "norm")
    if dim == 1 and norm != "L1":
        raise document.fail_at_key("dim/norm mismatch: 1D instances take no norm, got {!r}".format(norm), "norm")

    B = data["B"]
    if not _is_finite(B) or not B > 0:
        raise document.fail_at_key("B must be a finite positive number, got {!r}".format(B), "B")
    if not isinstance(data["agents"], list) or not data["agents"]:
        raise document.fail_at_key("agents must be a non-empty list", "agents")
    return dim, norm, float(B)


def _parse_agent(document: _Document, index: int, agent: Any, dim: int, B: float) -> Tuple[List[float], float]:
    if not isinstance(agent, dict) or "x" not in agent or "b" not in agent:
        raise document.fail_at_agent("agent {} must be an object with keys 'x' and 'b'".format(index), index)
    x, b = agent["x"], agent["b"]
    if not isinstance(x, list) or len(x) != dim or not all(_is_number(c) for c in x):
        raise document.fail_at_agent("dim/norm mismatch: agent {} needs x with {} number(s), got {!r}"
                                     .format(index, dim, x), index)
    if not all(math.isfinite(c) for c in x):
        raise document.fail_at_agent("agent {} has a non-finite location {!r}".format(index, x), index)
    if not _is_number(b):
        raise document.fail_at_agent("agent {} has a non-numeric b {!r}".format(index, b), index)
    if not math.isfinite(b):
        raise document.fail_at_agent("agent {} has a non-finite b {!r}".format(index, b), index)
    if b < 0:
        raise document.fail_at_agent("agent {} has a negative preferred distance".format(index), index)
    if b > B:
        raise document.fail_at_agent("preferred distance exceeds B (agent {}: {} > {})".format(index, b, B), index)
    return [float(c) for c in x], float(b)


def loads_instance(text: str) -> Instance:
    """
    Parses an instance document: a JSON object {"dim": 1 or 2, "norm": "L1" or "L2"
    (2D only), "B": number, "agents": [{"x": [coordinates], "b": number}, ...]}. Agent ids
    follow the order of the agents list.

    Parameters
    ----------
    text : str
        The document.

    Returns
    ----------
    instance : Instance

    Raises
    ----------
    InstanceParseError
        With the line and column of the offending part when the text is not JSON, a key is
        missing, dim and norm (or dim and a location) disagree or a preferred distance is
        negative or exceeds B.
    """
    document = _Document(text)
    try:
        data = json.loads(text)
    except json.JSONDecodeError as error:
        raise InstanceParseError("malformed document: {}".format(error.msg), line=error.lineno, column=error.colno)
    if not isinstance(data, dict):
        raise document.fail("an instance document must be a JSON object")

    dim, norm, B = _parse_header(document, data)
    agents = [_parse_agent(document, i, agent, dim, B) for i, agent in enumerate(data["agents"])]
    try:
        return make_instance([x if dim == 2 else x[0] for x, _ in agents], [b for _, b in agents], B, norm=norm)
    except InvalidInstanceError as error:
        raise document.fail(str(error))


def dumps_instance(instance: Instance) -> str:
    """
    Renders an instance as a document `loads_instance` reads back to an identical instance:
    one agent per line, floats in their shortest round-trip decimal form, norm only for 2D.
    """
    header = {"dim": instance.dim, "norm": instance.norm, "B": instance.B}
    if instance.dim == 1:
        del header["norm"]
    lines = ['  "{}": {},'.format(key, json.dumps(value)) for key, value in header.items()]
    agents = ['    {{"x": {}, "b": {}}}'.format(json.dumps(list(a.location)), json.dumps(a.b)) for a in instance.agents]
    return "{\n" + "\n".join(lines) + '\n  "agents": [\n' + ",\n".join(agents) + "\n  ]\n}\n"


def parse_instance(path: str) -> Instance:
    with open(path, "r", encoding="utf-8") as file:
        return loads_instance(file.read())


def write_instance(instance: Instance, path: str) -> None:
    with open(path, "w", newline="", encoding="utf-8") as file:
        file.write(dumps_instance(instance))
