"""JSON reading and writing for tables, partial tables and components.

Every writer goes through :func:`dumps`, so a table written twice is
byte-identical.
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Union

from .core import Hypercube, PartialQuasigroup
from .errors import UsageError
from .trades import Component

Loaded = Union[Hypercube, PartialQuasigroup, Component, list]


def to_obj(x) -> object:
    if isinstance(x, (Hypercube, PartialQuasigroup, Component)):
        return x.to_obj()
    if isinstance(x, (list, tuple)):
        return [to_obj(v) for v in x]
    if isinstance(x, dict):
        return {k: to_obj(v) for k, v in x.items()}
    return x


def from_obj(obj) -> Loaded:
    if isinstance(obj, list):
        return [from_obj(v) for v in obj]
    if not isinstance(obj, dict):
        raise UsageError(f"cannot interpret JSON value of type {type(obj).__name__}")
    if "pair" in obj and "points" in obj:
        return Component.from_obj(obj)
    if "components" in obj:
        return [Component.from_obj(c) for c in obj["components"]]
    if "domain" in obj:
        return PartialQuasigroup.from_obj(obj)
    if {"k", "n", "values"} <= obj.keys():
        return Hypercube.from_obj(obj)
    raise UsageError(f"unrecognized JSON object with keys {sorted(obj)}")


def dumps(x) -> str:
    return json.dumps(to_obj(x)) + "\n"


def loads(text: str) -> Loaded:
    return from_obj(json.loads(text))


def dump(x, path: Union[str, Path]) -> None:
    Path(path).write_text(dumps(x))


def load(path: Union[str, Path]) -> Loaded:
    try:
        return loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read {path}: {e}") from e


def load_table(path: Union[str, Path]) -> Hypercube:
    x = load(path)
    if not isinstance(x, Hypercube):
        raise UsageError(f"{path} does not hold a full table")
    return x
