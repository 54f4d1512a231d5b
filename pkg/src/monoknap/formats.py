"""JSON encodings shared by the command-line tools.

* instance: ``{"mode": "unbounded" | "zero-one", "capacity": W, "items": [[p, w], ...]}``
* sequence: ``{"base": b, "values": [v | "-inf", ...]}``
* step list: ``{"steps": [[w, p], ...]}``

Readers raise :class:`FormatError` naming the offending field.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .core import (
    MODES,
    NEG_FLOOR,
    VALUE_LIMIT,
    InvalidInstanceError,
    Item,
    KnapsackInstance,
    MonotoneSeq,
    Solution,
    StepList,
)

NEG_TOKEN = "-inf"


class FormatError(ValueError):
    """Malformed input; ``field`` names the offending JSON field."""

    def __init__(self, field: str, message: str) -> None:
        super().__init__(f"{field}: {message}")
        self.field = field


def _int(value, field: str, lo: int | None = None) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise FormatError(field, f"expected an integer, got {value!r}")
    if lo is not None and value < lo:
        raise FormatError(field, f"must be at least {lo}, got {value}")
    if abs(value) > VALUE_LIMIT:
        raise FormatError(field, f"magnitude exceeds 2^60: {value}")
    return value


def _obj(data, what: str) -> dict:
    if not isinstance(data, dict):
        raise FormatError(what, "expected a JSON object")
    return data


def _list(data: dict, key: str) -> list:
    if key not in data:
        raise FormatError(key, "missing")
    value = data[key]
    if not isinstance(value, list):
        raise FormatError(key, "expected a list")
    return value


def _pair(value, field: str) -> tuple[int, int]:
    if not isinstance(value, list) or len(value) != 2:
        raise FormatError(field, f"expected a two-element list, got {value!r}")
    return _int(value[0], f"{field}[0]"), _int(value[1], f"{field}[1]")


def instance_from_json(data) -> KnapsackInstance:
    data = _obj(data, "instance")
    mode = data.get("mode", "unbounded")
    if mode not in MODES:
        raise FormatError("mode", f"expected one of {list(MODES)}, got {mode!r}")
    if "capacity" not in data:
        raise FormatError("capacity", "missing")
    capacity = _int(data["capacity"], "capacity", 0)
    items = []
    for t, raw in enumerate(_list(data, "items")):
        p, w = _pair(raw, f"items[{t}]")
        try:
            items.append(Item(p, w))
        except InvalidInstanceError as exc:
            raise FormatError(f"items[{t}]", str(exc)) from None
    try:
        return KnapsackInstance(tuple(items), capacity, mode)
    except InvalidInstanceError as exc:
        raise FormatError("instance", str(exc)) from None


def instance_to_json(inst: KnapsackInstance) -> dict:
    return {"mode": inst.mode, "capacity": inst.capacity, "items": [list(p) for p in inst.pairs()]}


def seq_from_json(data) -> MonotoneSeq:
    data = _obj(data, "sequence")
    base = _int(data.get("base", 0), "base")
    values = []
    for t, v in enumerate(_list(data, "values")):
        values.append(None if v == NEG_TOKEN else _int(v, f"values[{t}]"))
    raw = np.array([NEG_FLOOR * 2 if v is None else v for v in values], dtype=np.int64)
    if raw.size > 1 and np.any(raw[1:] < raw[:-1]):
        bad = int(np.flatnonzero(raw[1:] < raw[:-1])[0]) + 1
        raise FormatError(f"values[{bad}]", "sequence is not non-decreasing")
    try:
        return MonotoneSeq(raw, base)
    except OverflowError as exc:
        raise FormatError("values", str(exc)) from None


def seq_to_json(seq: MonotoneSeq) -> dict:
    return {"base": seq.base, "values": [NEG_TOKEN if v <= NEG_FLOOR else int(v) for v in seq.values.tolist()]}


def steps_from_json(data) -> StepList:
    data = _obj(data, "step list")
    steps = [_pair(raw, f"steps[{t}]") for t, raw in enumerate(_list(data, "steps"))]
    try:
        return StepList(steps)
    except ValueError as exc:
        raise FormatError("steps", str(exc)) from None


def steps_to_json(steps: StepList) -> dict:
    return {"steps": [list(s) for s in steps.steps]}


def solution_to_json(sol: Solution) -> list[list[int]]:
    return sol.as_pairs()


def read_json(path: str | Path):
    """Parse a JSON file (``-`` reads standard input)."""
    try:
        if str(path) == "-":
            import sys

            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(str(path), f"invalid JSON ({exc.msg} at line {exc.lineno})") from None


def load_instance(path: str | Path) -> KnapsackInstance:
    return instance_from_json(read_json(path))


def load_seq(path: str | Path) -> MonotoneSeq:
    return seq_from_json(read_json(path))


def dumps(obj) -> str:
    """Compact, key-ordered JSON so identical results print identical bytes."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


__all__ = [
    "FormatError",
    "dumps",
    "instance_from_json",
    "instance_to_json",
    "load_instance",
    "load_seq",
    "read_json",
    "seq_from_json",
    "seq_to_json",
    "solution_to_json",
    "steps_from_json",
    "steps_to_json",
]
