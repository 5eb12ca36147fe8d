"""Run-time knobs shared by the CLI and the verification suite."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .core import DEFAULT_MATERIALIZE_CAP
from .enumerator import DEFAULT_CELL_CAP
from .errors import UsageError

DEFAULT_SEED = 20100917
WORKERS_ENV = "NQUASI_WORKERS"
FORMATS = ("json", "csv", "text")


def _default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"{WORKERS_ENV} must be a positive integer, got {raw!r}") from None


@dataclass(frozen=True)
class RunConfig:
    workers: int = field(default_factory=_default_workers)
    cell_cap: int = DEFAULT_CELL_CAP
    materialize_cap: int = DEFAULT_MATERIALIZE_CAP
    seed: int = DEFAULT_SEED
    fmt: str = "text"

    def __post_init__(self):
        if self.workers < 1 or self.cell_cap < 1 or self.materialize_cap < 1:
            raise UsageError("workers and caps must be >= 1")
        if self.fmt not in FORMATS:
            raise UsageError(f"format must be one of {FORMATS}, got {self.fmt!r}")
