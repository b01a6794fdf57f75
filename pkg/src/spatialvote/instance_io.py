"""JSON file formats for instances, scoring matrices and FLS matrices.

Rationals are written as integers when integral and as ``"num/den"``
strings otherwise, so files round-trip bit-exactly.
"""

from __future__ import annotations

import json
from pathlib import Path

from .election import ElectionInstance, ScoringMatrix
from .geometry import DimensionError, as_rat


class InstanceFormatError(ValueError):
    """A malformed input file; carries line/column when the JSON itself is broken."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        self.line = line
        self.col = col
        where = f" (line {line}, column {col})" if line is not None else ""
        super().__init__(message + where)


def _parse_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(exc.msg, exc.lineno, exc.colno) from None


def _rat_token(tok, where: str):
    if isinstance(tok, float) or isinstance(tok, bool) or not isinstance(tok, (int, str)):
        raise InstanceFormatError(f"{where}: {tok!r} is not an integer or 'a/b' rational")
    try:
        return as_rat(tok)
    except (ValueError, TypeError) as exc:
        raise InstanceFormatError(f"{where}: {exc}") from None


def _int_field(data: dict, key: str) -> int:
    if key not in data:
        raise InstanceFormatError(f"missing field {key!r}")
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise InstanceFormatError(f"field {key!r} must be an integer")
    return v


def _points(data: dict, key: str, d: int) -> list:
    raw = data.get(key)
    if not isinstance(raw, list):
        raise InstanceFormatError(f"field {key!r} must be a list of points")
    pts = []
    for i, pt in enumerate(raw):
        if not isinstance(pt, list):
            raise InstanceFormatError(f"{key}[{i}] must be a list of coordinates")
        if len(pt) != d:
            raise InstanceFormatError(f"{key}[{i}] has dimension {len(pt)}, expected {d}")
        pts.append(tuple(_rat_token(v, f"{key}[{i}]") for v in pt))
    return pts


def instance_from_dict(data) -> ElectionInstance:
    if not isinstance(data, dict):
        raise InstanceFormatError("instance must be a JSON object")
    d = _int_field(data, "d")
    p = _int_field(data, "p")
    voters = _points(data, "voters", d)
    candidates = _points(data, "candidates", d)
    try:
        return ElectionInstance(d, p, tuple(voters), tuple(candidates))
    except (ValueError, DimensionError) as exc:
        raise InstanceFormatError(str(exc)) from None


def _json_rat(x):
    x = as_rat(x)
    if x.denominator == 1:
        return int(x.numerator)
    return f"{int(x.numerator)}/{int(x.denominator)}"


def instance_to_dict(inst: ElectionInstance) -> dict:
    return {
        "d": inst.d,
        "p": inst.p,
        "voters": [[_json_rat(v) for v in pt] for pt in inst.voters],
        "candidates": [[_json_rat(v) for v in pt] for pt in inst.candidates],
    }


def dumps_instance(inst: ElectionInstance) -> str:
    return json.dumps(instance_to_dict(inst), separators=(",", ":")) + "\n"


def loads_instance(text: str) -> ElectionInstance:
    return instance_from_dict(_parse_json(text))


def load_instance(path) -> ElectionInstance:
    return loads_instance(Path(path).read_text())


def save_instance(inst: ElectionInstance, path) -> None:
    Path(path).write_text(dumps_instance(inst))


def _int_matrix(data, key: str) -> list[list[int]]:
    if not isinstance(data, dict) or not isinstance(data.get(key), list):
        raise InstanceFormatError(f"expected an object with a {key!r} matrix")
    rows = []
    for i, row in enumerate(data[key]):
        if not isinstance(row, list) or any(isinstance(v, bool) or not isinstance(v, int) for v in row):
            raise InstanceFormatError(f"{key}[{i}] must be a list of integers")
        rows.append(row)
    return rows


def loads_scoring(text: str) -> ScoringMatrix:
    rows = _int_matrix(_parse_json(text), "q")
    try:
        return ScoringMatrix(tuple(tuple(r) for r in rows))
    except ValueError as exc:
        raise InstanceFormatError(str(exc)) from None


def load_scoring(path) -> ScoringMatrix:
    return loads_scoring(Path(path).read_text())


def loads_fls(text: str) -> tuple[list[list[int]], int]:
    data = _parse_json(text)
    rows = _int_matrix(data, "A")
    k = _int_field(data, "k")
    for i, row in enumerate(rows):
        if any(v not in (-1, 1) for v in row):
            raise InstanceFormatError(f"A[{i}] has a non-bipolar entry")
    return rows, k


def load_matrix(path) -> tuple[list[list[int]], int]:
    """Load an FLS matrix file ``{"A": [[+-1, ...], ...], "k": int}``."""
    return loads_fls(Path(path).read_text())


def dumps_fls(A, k: int) -> str:
    return json.dumps({"A": [list(r) for r in A], "k": int(k)}, separators=(",", ":")) + "\n"


def dumps_scoring(q: ScoringMatrix) -> str:
    return json.dumps({"q": [list(r) for r in q.q]}, separators=(",", ":")) + "\n"
