"""Components, switching and disjoint component families.

A minimal {a,b}-component is a connected class of the graph on the cells
valued a or b in which the a-cell and the b-cell of every axis-parallel
line are joined.  Switching a component swaps a and b on it.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence, Union

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from .constructions import big_psi
from .core import (DEFAULT_MATERIALIZE_CAP, ComposedQuasigroup, Hypercube, Point, index_point,
                   materialize, point_index)
from .errors import ResourceError, UsageError

Table = Union[Hypercube, ComposedQuasigroup]

EXACT_LIMIT = 20
STRATEGIES = ("pair_partition", "greedy", "exact")


@dataclass(frozen=True)
class Component:
    pair: tuple[int, int]
    points: tuple[Point, ...]

    def __post_init__(self):
        a, b = self.pair
        if a == b:
            raise UsageError("a component needs two distinct values")
        object.__setattr__(self, "pair", (min(a, b), max(a, b)))
        object.__setattr__(self, "points", tuple(sorted(tuple(p) for p in self.points)))

    def __len__(self) -> int:
        return len(self.points)

    def flat(self, k: int) -> np.ndarray:
        return np.array([point_index(p, k) for p in self.points], dtype=np.int64)

    def is_box(self) -> bool:
        """True if the point set is a product of two-element coordinate sets."""
        if not self.points:
            return False
        n = len(self.points[0])
        axes = [sorted({p[i] for p in self.points}) for i in range(n)]
        return all(len(ax) == 2 for ax in axes) and len(self.points) == 2 ** n

    def to_obj(self) -> dict:
        return {"pair": list(self.pair), "points": [list(p) for p in self.points]}

    @classmethod
    def from_obj(cls, obj: Mapping) -> "Component":
        return cls(tuple(obj["pair"]), tuple(tuple(p) for p in obj["points"]))


def as_table(f: Table, cap: int = DEFAULT_MATERIALIZE_CAP) -> Hypercube:
    if isinstance(f, ComposedQuasigroup):
        return materialize(f, cap)
    return f


def value_support(f: Hypercube, a: int, b: int) -> list[Point]:
    """Points where ``f`` takes the value a or b, in table order."""
    if a == b:
        raise UsageError("value_support needs two distinct values")
    if not (0 <= a < f.k and 0 <= b < f.k):
        raise UsageError(f"values must be symbols of order {f.k}")
    flat = np.flatnonzero((f.table == a) | (f.table == b))
    return [index_point(int(i), f.k, f.n) for i in flat]


def _line_links(arr: np.ndarray, a: int, b: int):
    k, n = arr.shape[0], arr.ndim
    idx = np.arange(k ** n).reshape(arr.shape)
    heads, tails = [], []
    for axis in range(n):
        pa = np.argmax(arr == a, axis=axis)
        pb = np.argmax(arr == b, axis=axis)
        heads.append(np.take_along_axis(idx, np.expand_dims(pa, axis), axis).ravel())
        tails.append(np.take_along_axis(idx, np.expand_dims(pb, axis), axis).ravel())
    return np.concatenate(heads), np.concatenate(tails)


def find_components(f: Table, a: int, b: int, *, cap: int = DEFAULT_MATERIALIZE_CAP) -> list[Component]:
    """Minimal {a,b}-components of ``f``, ordered by their first point."""
    h = as_table(f, cap)
    if a == b:
        raise UsageError("find_components needs two distinct values")
    k, n = h.k, h.n
    arr = h.table
    u, v = _line_links(arr, a, b)
    size = k ** n
    graph = coo_matrix((np.ones(len(u), dtype=np.int8), (u, v)), shape=(size, size))
    _, labels = connected_components(graph, directed=False)
    support = np.flatnonzero(((arr == a) | (arr == b)).ravel())
    groups: dict[int, list[int]] = {}
    for cell in support.tolist():
        groups.setdefault(int(labels[cell]), []).append(cell)
    comps = [Component((a, b), tuple(index_point(c, k, n) for c in cells)) for cells in groups.values()]
    comps.sort(key=lambda c: c.points[0])
    return comps


def has_property_a(points: Sequence[Sequence[int]], k: int, n: int) -> bool:
    """Every member has, along every axis, another member on the same line."""
    if not points:
        return False
    mask = np.zeros((k,) * n, dtype=np.int64)
    for p in points:
        mask[tuple(p)] = 1
    for axis in range(n):
        line_count = mask.sum(axis=axis, keepdims=True)
        if np.any((mask == 1) & (line_count < 2)):
            return False
    return True


def is_component(f: Table, points: Sequence[Sequence[int]], pair: tuple[int, int], *,
                 cap: int = DEFAULT_MATERIALIZE_CAP) -> bool:
    h = as_table(f, cap)
    vals = {h.at(p) for p in points}
    return vals == set(pair) and has_property_a(points, h.k, h.n)


def _swap(values: list[int], cells: np.ndarray, a: int, b: int) -> None:
    for c in cells.tolist():
        values[c] = b if values[c] == a else a


def switch(f: Table, c: Component, *, cap: int = DEFAULT_MATERIALIZE_CAP) -> Hypercube:
    h = as_table(f, cap)
    if not is_component(h, c.points, c.pair):
        raise UsageError(f"the given point set is not a {set(c.pair)}-component of the table")
    values = list(h.values)
    _swap(values, c.flat(h.k), *c.pair)
    return Hypercube(h.k, h.n, tuple(values))


def _check_disjoint(family: Sequence[Component]) -> None:
    seen: set[Point] = set()
    for c in family:
        if seen.intersection(c.points):
            raise UsageError("family members overlap; switching needs pairwise disjoint components")
        seen.update(c.points)


def switch_family(f: Table, family: Sequence[Component], mask: Union[int, Sequence[bool]], *,
                  cap: int = DEFAULT_MATERIALIZE_CAP) -> Hypercube:
    """Switch the family members selected by ``mask`` (bit i selects member i)."""
    h = as_table(f, cap)
    _check_disjoint(family)
    if isinstance(mask, int):
        chosen = [bool(mask >> i & 1) for i in range(len(family))]
    else:
        chosen = [bool(x) for x in mask]
        if len(chosen) != len(family):
            raise UsageError(f"mask has {len(chosen)} entries for a family of {len(family)}")
    values = list(h.values)
    for take, c in zip(chosen, family):
        if not is_component(h, c.points, c.pair):
            raise UsageError(f"family member on {set(c.pair)} is not a component of the table")
        if take:
            _swap(values, c.flat(h.k), *c.pair)
    return Hypercube(h.k, h.n, tuple(values))


def all_components(f: Table, *, cap: int = DEFAULT_MATERIALIZE_CAP) -> list[Component]:
    h = as_table(f, cap)
    return [c for a, b in itertools.combinations(range(h.k), 2) for c in find_components(h, a, b)]


def _max_disjoint(cands: list[Component]) -> list[Component]:
    sets = [frozenset(c.points) for c in cands]
    conflict = [{j for j in range(len(cands)) if j != i and sets[i] & sets[j]} for i in range(len(cands))]
    best: list[int] = []

    def rec(i: int, chosen: list[int], blocked: set[int]) -> None:
        nonlocal best
        if len(chosen) + (len(cands) - i) <= len(best):
            return
        if i == len(cands):
            best = list(chosen)
            return
        if i not in blocked:
            chosen.append(i)
            rec(i + 1, chosen, blocked | conflict[i])
            chosen.pop()
        rec(i + 1, chosen, blocked)

    rec(0, [], set())
    return [cands[i] for i in best]


def disjoint_family(f: Table, strategy: str = "pair_partition", *,
                    cap: int = DEFAULT_MATERIALIZE_CAP) -> list[Component]:
    """A family of pairwise disjoint minimal components.

    ``pair_partition`` takes every minimal component for the pairs
    {0,1}, {2,3}, ...; ``greedy`` scans the components of all value pairs
    largest first; ``exact`` maximizes the family size by branch and bound
    and refuses more than ``EXACT_LIMIT`` candidates.
    """
    h = as_table(f, cap)
    if strategy == "pair_partition":
        return [c for i in range(h.k // 2) for c in find_components(h, 2 * i, 2 * i + 1)]
    if strategy not in STRATEGIES:
        raise UsageError(f"strategy must be one of {STRATEGIES}, got {strategy!r}")
    cands = all_components(h)
    if strategy == "exact":
        if len(cands) > EXACT_LIMIT:
            raise ResourceError(
                f"exact family search over {len(cands)} components exceeds the limit of {EXACT_LIMIT}")
        return _max_disjoint(cands)
    cands.sort(key=lambda c: (-len(c), c.pair, c.points))
    covered: set[Point] = set()
    out = []
    for c in cands:
        if covered.isdisjoint(c.points):
            out.append(c)
            covered.update(c.points)
    return out


def product_component(c1: Component, c2: Component, pair: tuple[int, int]) -> Component:
    """The point set ``C1 x C2`` labelled with the outer value pair."""
    return Component(pair, tuple(p + q for p in c1.points for q in c2.points))


def alpha_lower_bound(n: int, k: int) -> int:
    """Guaranteed number of minimal {2i,2i+1}-components of the psi tower, per i."""
    lo, hi = (k - 3) // 2, (k - 1) // 2
    j = n // 2
    if n % 2 == 0:
        return lo ** (j - 1) * hi ** j
    return lo ** j * hi ** j


@dataclass(frozen=True)
class AlphaReport:
    n: int
    m: int
    per_pair: tuple[int, ...]

    @property
    def alpha(self) -> int:
        return min(self.per_pair)

    @property
    def bound(self) -> int:
        return alpha_lower_bound(self.n, 2 * self.m + 1)


def alpha_report(n: int, m: int, *, cap: int = DEFAULT_MATERIALIZE_CAP) -> AlphaReport:
    h = materialize(big_psi(n, m), cap)
    counts = tuple(len(find_components(h, 2 * i, 2 * i + 1)) for i in range(m))
    return AlphaReport(n, m, counts)
