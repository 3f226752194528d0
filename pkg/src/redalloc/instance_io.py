"""JSON instance files.

Schema::

    {"n": 2, "k": [2, 1],
     "r": [[0.9, 0.8], [0.95]],
     "c": [[5, 3], [4]],
     "l": [[0, 0], [0]],          # optional, defaults to zeros
     "u": [[2, 2], [3]],
     "R0": 0.9}
"""
from __future__ import annotations

import json
from pathlib import Path

from .errors import InvalidInstance
from .model import Instance

REQUIRED = ("n", "k", "r", "c", "u", "R0")


def instance_from_dict(doc) -> Instance:
    if not isinstance(doc, dict):
        raise InvalidInstance("top level: expected a JSON object")
    missing = [key for key in REQUIRED if key not in doc]
    if missing:
        raise InvalidInstance(f"missing field(s): {', '.join(missing)}")
    unknown = sorted(set(doc) - set(REQUIRED) - {"l"})
    if unknown:
        raise InvalidInstance(f"unknown field(s): {', '.join(unknown)}")
    n, k = doc["n"], doc["k"]
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise InvalidInstance(f"n: expected a positive integer, got {n!r}")
    if not isinstance(k, list) or len(k) != n:
        raise InvalidInstance(f"k: expected a list of {n} positive integers")
    for i, ki in enumerate(k):
        if isinstance(ki, bool) or not isinstance(ki, int) or ki < 1:
            raise InvalidInstance(f"k[{i}]: expected a positive integer, got {ki!r}")
    for name in ("r", "c", "u", "l"):
        rows = doc.get(name)
        if rows is None and name == "l":
            continue
        if not isinstance(rows, list) or len(rows) != n:
            raise InvalidInstance(f"{name}: expected {n} rows")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != k[i]:
                raise InvalidInstance(f"{name}[{i}]: expected {k[i]} entries to match k[{i}]")
    return Instance(r=doc["r"], c=doc["c"], u=doc["u"], R0=doc["R0"], l=doc.get("l"))


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return instance_from_dict(doc)


def load(path) -> Instance:
    return loads(Path(path).read_text())


def dumps(inst: Instance) -> str:
    return json.dumps(inst.to_dict(), indent=2)


def dump(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst) + "\n")
