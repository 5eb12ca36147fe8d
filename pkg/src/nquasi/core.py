"""Value types for n-ary operations on {0, ..., k-1} and their validation.

Tables are stored flat in row-major order with the last coordinate varying
fastest, so the value at ``(x_0, ..., x_{n-1})`` sits at index
``sum(x_i * k**(n-1-i))``.  Coordinates and variable indices are 0-based
throughout the package.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from types import MappingProxyType
from typing import Callable, Iterable, Iterator, Mapping, Sequence, Union

import numpy as np

from .errors import ResourceError, UsageError

Point = tuple[int, ...]

DEFAULT_MATERIALIZE_CAP = 2 ** 24


def point_index(point: Sequence[int], k: int) -> int:
    idx = 0
    for x in point:
        idx = idx * k + x
    return idx


def index_point(idx: int, k: int, n: int) -> Point:
    out = [0] * n
    for i in range(n - 1, -1, -1):
        idx, out[i] = divmod(idx, k)
    return tuple(out)


def all_points(k: int, n: int) -> Iterator[Point]:
    """All points of the cube in table order."""
    return itertools.product(range(k), repeat=n)


@dataclass(frozen=True)
class Hypercube:
    """Explicit value table of an n-ary operation of order k."""

    k: int
    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1 or self.n < 1:
            raise UsageError(f"order and arity must be >= 1, got k={self.k}, n={self.n}")
        vals = tuple(int(v) for v in self.values)
        if len(vals) != self.k ** self.n:
            raise UsageError(
                f"table of order {self.k} and arity {self.n} needs {self.k ** self.n} values, got {len(vals)}")
        if any(v < 0 or v >= self.k for v in vals):
            raise UsageError(f"table values must lie in 0..{self.k - 1}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_function(cls, k: int, n: int, fn: Callable[..., int]) -> "Hypercube":
        return cls(k, n, tuple(fn(*p) for p in all_points(k, n)))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "Hypercube":
        k = len(rows)
        return cls(k, 2, tuple(v for row in rows for v in row))

    @classmethod
    def from_array(cls, arr: np.ndarray) -> "Hypercube":
        arr = np.asarray(arr)
        k = arr.shape[0]
        if any(s != k for s in arr.shape):
            raise UsageError(f"array must be a k x ... x k cube, got shape {arr.shape}")
        return cls(k, arr.ndim, tuple(arr.reshape(-1).tolist()))

    @cached_property
    def table(self) -> np.ndarray:
        """Read-only numpy view with shape ``(k,) * n``."""
        arr = np.array(self.values, dtype=np.int64).reshape((self.k,) * self.n)
        arr.setflags(write=False)
        return arr

    def __call__(self, *point: int) -> int:
        return self.values[point_index(point, self.k)]

    def at(self, point: Sequence[int]) -> int:
        if len(point) != self.n:
            raise UsageError(f"point {tuple(point)} has length {len(point)}, expected {self.n}")
        return self.values[point_index(point, self.k)]

    def rows(self) -> list[list[int]]:
        if self.n != 2:
            raise UsageError("rows() needs a binary table")
        k = self.k
        return [list(self.values[r * k:(r + 1) * k]) for r in range(k)]

    def to_obj(self) -> dict:
        return {"k": self.k, "n": self.n, "values": list(self.values)}

    @classmethod
    def from_obj(cls, obj: Mapping) -> "Hypercube":
        return cls(int(obj["k"]), int(obj["n"]), tuple(obj["values"]))


def _lines_are_permutations(arr: np.ndarray, k: int) -> bool:
    ref = np.arange(k)
    for axis in range(arr.ndim):
        shape = [1] * arr.ndim
        shape[axis] = k
        if not np.array_equal(np.sort(arr, axis=axis), np.broadcast_to(ref.reshape(shape), arr.shape)):
            return False
    return True


def validate_quasigroup(h: Hypercube) -> bool:
    """True iff every axis-parallel line of ``h`` is a permutation of the symbols."""
    return _lines_are_permutations(h.table, h.k)


def validate_loop(h: Hypercube) -> bool:
    """True iff ``h`` is a quasigroup with identity element 0 in every position."""
    if not validate_quasigroup(h):
        return False
    ref = np.arange(h.k)
    for axis in range(h.n):
        idx = [0] * h.n
        idx[axis] = slice(None)
        if not np.array_equal(h.table[tuple(idx)], ref):
            return False
    return True


def is_idempotent(h: Hypercube) -> bool:
    if h.n != 2:
        raise UsageError(f"idempotency is defined for binary tables, got arity {h.n}")
    return all(h(x, x) == x for x in range(h.k))


# --- composed quasigroups -------------------------------------------------

@dataclass(frozen=True)
class Leaf:
    var: int


@dataclass(frozen=True)
class Node:
    table: Hypercube
    left: "Tree"
    right: "Tree"


Tree = Union[Leaf, Node]


def _leaves(t: Tree) -> Iterator[int]:
    if isinstance(t, Leaf):
        yield t.var
    else:
        yield from _leaves(t.left)
        yield from _leaves(t.right)


def _tables(t: Tree) -> Iterator[Hypercube]:
    if isinstance(t, Node):
        yield t.table
        yield from _tables(t.left)
        yield from _tables(t.right)


@dataclass(frozen=True)
class ComposedQuasigroup:
    """Expression tree of binary tables over the variables ``0..n-1``.

    Nothing is materialized until :func:`materialize` is called; evaluation
    at a point walks the tree.
    """

    root: Tree
    k: int
    n: int = field(init=False)

    def __post_init__(self):
        leaves = sorted(_leaves(self.root))
        if leaves != list(range(len(leaves))):
            raise UsageError(f"leaves must name each variable 0..n-1 exactly once, got {leaves}")
        checked: set[int] = set()
        for t in _tables(self.root):
            if t.n != 2 or t.k != self.k:
                raise UsageError(f"node tables must be binary of order {self.k}")
            if id(t) not in checked:
                if not validate_quasigroup(t):
                    raise UsageError("every node table must be a quasigroup")
                checked.add(id(t))
        object.__setattr__(self, "n", len(leaves))

    @classmethod
    def binary(cls, table: Hypercube) -> "ComposedQuasigroup":
        return cls(Node(table, Leaf(0), Leaf(1)), table.k)

    def node_tables(self) -> list[Hypercube]:
        return list(_tables(self.root))

    def __call__(self, *point: int) -> int:
        return evaluate(self, point)


def _eval(t: Tree, point: Sequence[int]) -> int:
    if isinstance(t, Leaf):
        return point[t.var]
    return t.table(_eval(t.left, point), _eval(t.right, point))


def evaluate(c: ComposedQuasigroup, point: Sequence[int]) -> int:
    if len(point) != c.n:
        raise UsageError(f"point has length {len(point)}, composition has {c.n} variables")
    return _eval(c.root, point)


def materialize(c: ComposedQuasigroup, cap: int = DEFAULT_MATERIALIZE_CAP) -> Hypercube:
    cells = c.k ** c.n
    if cells > cap:
        raise ResourceError(f"materializing {cells} cells exceeds the materialization cap of {cap}")

    def build(t: Tree) -> np.ndarray:
        if isinstance(t, Leaf):
            shape = [1] * c.n
            shape[t.var] = c.k
            return np.arange(c.k).reshape(shape)
        return t.table.table[build(t.left), build(t.right)]

    arr = np.broadcast_to(build(c.root), (c.k,) * c.n)
    return Hypercube(c.k, c.n, tuple(arr.reshape(-1).tolist()))


# --- partial quasigroups --------------------------------------------------

def box_domain(k: int, n: int, pair: tuple[int, int]) -> list[Point]:
    """Points of ``Sigma^(n-1) x B`` with ``B = Sigma minus pair``, in table order."""
    a, b = pair
    return [p for p in all_points(k, n) if p[-1] != a and p[-1] != b]


def _first_conflict(k: int, n: int, values: Mapping[Point, int]):
    seen: dict[tuple, Point] = {}
    for p, v in values.items():
        for i in range(n):
            key = (i, p[:i] + p[i + 1:], v)
            q = seen.get(key)
            if q is not None:
                return p, q
            seen[key] = p
    return None


@dataclass(frozen=True)
class PartialQuasigroup:
    """Values of an n-ary operation on a subset of the cube.

    ``box`` is set when the domain is ``Sigma^(n-1) x (Sigma minus {a, b})``
    (the excluded pair lives in the last coordinate).  The constructor
    rejects value assignments that repeat a symbol along a line.
    """

    k: int
    n: int
    values: Mapping[Point, int]
    box: tuple[int, int] | None = None

    def __post_init__(self):
        vals = {tuple(int(x) for x in p): int(v) for p, v in dict(self.values).items()}
        for p, v in vals.items():
            if len(p) != self.n or any(x < 0 or x >= self.k for x in p):
                raise UsageError(f"point {p} is not in the cube of order {self.k} and arity {self.n}")
            if not 0 <= v < self.k:
                raise UsageError(f"value {v} at {p} is not a symbol of order {self.k}")
        if self.box is not None:
            a, b = (int(x) for x in self.box)
            if a == b or not (0 <= a < self.k and 0 <= b < self.k):
                raise UsageError(f"box pair must be two distinct symbols, got {self.box}")
            object.__setattr__(self, "box", (min(a, b), max(a, b)))
            if set(vals) != set(box_domain(self.k, self.n, self.box)):
                raise UsageError("values do not cover exactly the box domain")
        conflict = _first_conflict(self.k, self.n, vals)
        if conflict is not None:
            raise UsageError(f"not a partial quasigroup: equal values at {conflict[0]} and {conflict[1]}")
        object.__setattr__(self, "values", MappingProxyType(dict(sorted(vals.items()))))

    @classmethod
    def restrict_box(cls, f: Hypercube, a: int, b: int) -> "PartialQuasigroup":
        return cls(f.k, f.n, {p: f.at(p) for p in box_domain(f.k, f.n, (a, b))}, box=(a, b))

    @classmethod
    def restrict(cls, f: Hypercube, points: Iterable[Sequence[int]]) -> "PartialQuasigroup":
        return cls(f.k, f.n, {tuple(p): f.at(p) for p in points})

    @property
    def domain(self) -> list[Point]:
        return list(self.values)

    def to_obj(self) -> dict:
        obj: dict = {"k": self.k, "n": self.n}
        if self.box is not None:
            obj["domain"] = {"box": list(self.box)}
        else:
            obj["domain"] = {"points": [list(p) for p in self.values]}
        obj["values"] = list(self.values.values())
        return obj

    @classmethod
    def from_obj(cls, obj: Mapping) -> "PartialQuasigroup":
        k, n = int(obj["k"]), int(obj["n"])
        dom = obj["domain"]
        if "box" in dom:
            pair = tuple(dom["box"])
            points = box_domain(k, n, pair)
        else:
            pair = None
            points = [tuple(p) for p in dom["points"]]
        if len(points) != len(obj["values"]):
            raise UsageError("domain and values have different lengths")
        return cls(k, n, dict(zip(points, obj["values"])), box=pair)
