"""Structure of n-ary loops of order 4 and the recurrence counting them.

Every n-ary loop of order 4 is reducible or semilinear.  Reducible loops are
split by their root operation (one of the four binary loops, or an
irreducible loop of arity >= 3), and summing over set partitions of the
variables gives ``v_n``, the number of n-ary loops, for every n.
"""
from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator, Optional

import numpy as np

from .core import Hypercube, validate_loop
from .enumerator import iter_quasigroups
from .errors import UsageError
from .trades import value_support  # noqa: F401  (re-exported)

ORDER = 4


# --- semilinearity --------------------------------------------------------

def _require_loop4(f: Hypercube) -> None:
    if f.k != ORDER:
        raise UsageError(f"expected a loop of order 4, got order {f.k}")
    if not validate_loop(f):
        raise UsageError("expected a loop with identity 0")


def semilinear_offset(n: int) -> int:
    """Affine constant of the semilinearity congruence for arity n.

    At the all-zero point the loop takes the value 0 and every coordinate
    lies in {0, a}, which forces ``1 = offset + n (mod 2)``.
    """
    return (n + 1) % 2


def _is_a_semilinear(t: np.ndarray, a: int) -> bool:
    n = t.ndim
    lhs = (t == 0) | (t == a)
    ind = np.array([1 if x in (0, a) else 0 for x in range(ORDER)])
    rhs = np.full((1,) * n, semilinear_offset(n))
    for axis in range(n):
        shape = [1] * n
        shape[axis] = ORDER
        rhs = rhs + ind.reshape(shape)
    return bool(np.array_equal(lhs, (rhs % 2).astype(bool)))


def is_a_semilinear(f: Hypercube, a: int) -> bool:
    _require_loop4(f)
    if a not in (1, 2, 3):
        raise UsageError(f"a must be 1, 2 or 3, got {a}")
    return _is_a_semilinear(f.table, a)


@dataclass(frozen=True)
class SemilinearClass:
    flags: tuple[bool, bool, bool]
    epsilon: int

    @property
    def linear(self) -> bool:
        return sum(self.flags) >= 2

    @property
    def semilinear(self) -> bool:
        return any(self.flags)


def classify_semilinearity(f: Hypercube) -> SemilinearClass:
    _require_loop4(f)
    return SemilinearClass(tuple(_is_a_semilinear(f.table, a) for a in (1, 2, 3)),
                           semilinear_offset(f.n))


# --- reducibility ---------------------------------------------------------

@dataclass(frozen=True)
class ReductionWitness:
    """``f(x) = outer(inner(x[subset]), x[rest])`` with ``rest`` in increasing order."""

    subset: tuple[int, ...]
    inner: Hypercube
    outer: Hypercube

    @property
    def rest(self) -> tuple[int, ...]:
        n = len(self.subset) + self.outer.n - 1
        return tuple(i for i in range(n) if i not in self.subset)

    def recompose(self) -> Hypercube:
        n = len(self.subset) + self.outer.n - 1
        k = self.inner.k
        return Hypercube.from_function(
            k, n, lambda *x: self.outer(self.inner(*(x[i] for i in self.subset)), *(x[i] for i in self.rest)))


def _slices(t: np.ndarray, subset: tuple[int, ...]) -> np.ndarray:
    n, k = t.ndim, t.shape[0]
    rest = tuple(i for i in range(n) if i not in subset)
    return t.transpose(subset + rest).reshape(k ** len(subset), k ** len(rest))


def find_reduction(f: Hypercube) -> Optional[ReductionWitness]:
    """First variable subset (by size, then lexicographically) through which ``f`` factors.

    ``f`` factors through a subset M exactly when fixing the M-coordinates
    produces only k distinct functions of the remaining ones.  The inner
    operation labels each such function by its value at the all-zero rest.
    """
    t, k, n = f.table, f.k, f.n
    for size in range(2, n):
        for subset in itertools.combinations(range(n), size):
            mat = _slices(t, subset)
            if len(np.unique(mat, axis=0)) != k:
                continue
            inner = Hypercube(k, size, tuple(mat[:, 0].tolist()))
            rep = {}
            for r, label in enumerate(mat[:, 0].tolist()):
                rep.setdefault(label, r)
            outer = Hypercube(k, n - size + 1, tuple(v for y in range(k) for v in mat[rep[y]].tolist()))
            return ReductionWitness(subset, inner, outer)
    return None


# --- root operations -----------------------------------------------------

@lru_cache(maxsize=None)
def binary_loops() -> tuple[Hypercube, ...]:
    """The four binary loops of order 4, in lexicographic table order."""
    return tuple(iter_quasigroups(2, ORDER, "loops"))


def binary_loop_id(star: Hypercube) -> int:
    return binary_loops().index(star)


@dataclass(frozen=True)
class RootClass:
    kind: str  # "irreducible" | "binary_root" | "higher_root"
    star: Optional[Hypercube] = None
    partition: Optional[tuple[tuple[int, ...], ...]] = None

    @property
    def star_id(self) -> Optional[int]:
        return None if self.star is None else binary_loop_id(self.star)


def _factor_bipartition(t: np.ndarray, left: tuple[int, ...]) -> Optional[np.ndarray]:
    # f(x) = g(x_left) * h(x_right) with g, h the restrictions to zeros elsewhere
    mat = _slices(t, left)
    g = mat[:, 0]
    h = mat[0, :]
    k = t.shape[0]
    star = np.empty((k, k), dtype=np.int64)
    for u in range(k):
        r = int(np.argmax(g == u))
        for v in range(k):
            c = int(np.argmax(h == v))
            star[u, v] = mat[r, c]
    if np.array_equal(star[g[:, None], h[None, :]], mat):
        return star
    return None


def root_classification(f: Hypercube) -> RootClass:
    _require_loop4(f)
    n = f.n
    if n < 3:
        raise UsageError("root classification needs arity >= 3")
    t = f.table
    star = None
    splits = []
    for size in range(1, n):
        for left in itertools.combinations(range(n), size):
            if 0 not in left:
                continue
            s = _factor_bipartition(t, left)
            if s is None:
                continue
            if not np.array_equal(s, s.T):
                raise AssertionError("recovered root operation is not commutative")
            if star is not None and not np.array_equal(s, star):
                raise AssertionError("bipartitions factor through different root operations")
            star = s
            splits.append(set(left))
    if star is not None:
        star_h = Hypercube.from_array(star)
        if not validate_loop(star_h):
            raise AssertionError("recovered root operation is not a loop")
        blocks: dict[tuple[bool, ...], list[int]] = {}
        for i in range(n):
            blocks.setdefault(tuple(i in s for s in splits), []).append(i)
        partition = tuple(sorted(tuple(b) for b in blocks.values()))
        return RootClass("binary_root", star_h, partition)
    if find_reduction(f) is not None:
        return RootClass("higher_root")
    return RootClass("irreducible")


# --- partition shapes and the recurrence ---------------------------------

@dataclass(frozen=True)
class PartitionShape:
    """Block sizes ``sizes[0] < sizes[1] < ...`` each used ``mults[i]`` times."""

    sizes: tuple[int, ...]
    mults: tuple[int, ...]

    def __post_init__(self):
        if len(self.sizes) != len(self.mults) or not self.sizes:
            raise UsageError("sizes and multiplicities must be non-empty and equally long")
        if any(s <= 0 for s in self.sizes) or any(m <= 0 for m in self.mults):
            raise UsageError("block sizes and multiplicities must be positive")
        if any(a >= b for a, b in zip(self.sizes, self.sizes[1:])):
            raise UsageError("block sizes must be strictly increasing")

    @property
    def n(self) -> int:
        return sum(s * m for s, m in zip(self.sizes, self.mults))

    @property
    def blocks(self) -> int:
        return sum(self.mults)


def partition_count(shape: PartitionShape) -> int:
    """Number of set partitions of ``[n]`` with the given block-size profile."""
    den = 1
    for s, m in zip(shape.sizes, shape.mults):
        den *= math.factorial(s) ** m * math.factorial(m)
    return math.factorial(shape.n) // den


def _integer_partitions(n: int, parts: int, max_part: int) -> Iterator[tuple[int, ...]]:
    if parts == 0:
        if n == 0:
            yield ()
        return
    for first in range(min(n - parts + 1, max_part), 0, -1):
        for tail in _integer_partitions(n - first, parts - 1, first):
            yield (first,) + tail


def partition_shapes(n: int, blocks: Optional[int] = None) -> Iterator[PartitionShape]:
    counts = range(1, n + 1) if blocks is None else [blocks]
    for i in counts:
        for parts in _integer_partitions(n, i, n):
            c = Counter(parts)
            sizes = tuple(sorted(c))
            yield PartitionShape(sizes, tuple(c[s] for s in sizes))


def _shape_sum(n: int, blocks: int, factor) -> int:
    total = 0
    for shape in partition_shapes(n, blocks):
        term = partition_count(shape)
        for s, m in zip(shape.sizes, shape.mults):
            term *= factor(s) ** m
        total += term
    return total


@dataclass(frozen=True)
class RecurrenceRow:
    n: int
    l_a: int
    r_a_star: int
    r_a_0: int
    r_star: int
    r_0: int
    p_a: int
    p: int
    v: int
    Q: int

    FIELDS = ("n", "l_a", "r_a_star", "r_a_0", "r_star", "r_0", "p_a", "p", "v", "Q")

    def as_strings(self) -> dict[str, str]:
        return {f: str(getattr(self, f)) for f in self.FIELDS}


def semilinear_count(n: int) -> int:
    """Number of a-semilinear n-ary loops of order 4, for each fixed a."""
    return 2 ** (2 ** n - n - 1)


def q4_recurrence(n_max: int) -> list[RecurrenceRow]:
    """Ledger rows for n = 1..n_max; ``v`` is the number of n-ary loops of order 4.

    ``r_a_star`` and ``r_star`` count loops whose binary root is one fixed
    operation; the arity-2 values are 1 (the root itself).
    """
    if n_max < 1:
        raise UsageError("n_max must be >= 1")
    l_a, r_as, r_s, p_a, p, v = {}, {}, {}, {}, {}, {}
    rows = []
    for n in range(1, n_max + 1):
        l_a[n] = semilinear_count(n)
        if n == 1:
            r_as[n] = r_s[n] = r_a0 = r0 = 0
            v[n] = 1
        else:
            r_as[n] = sum(_shape_sum(n, i, lambda j: l_a[j] - r_as[j]) for i in range(2, n + 1))
            r_s[n] = sum(_shape_sum(n, i, lambda j: v[j] - r_s[j]) for i in range(2, n + 1))
            r_a0 = sum(p_a[i] * _shape_sum(n, i, lambda j: l_a[j]) for i in range(3, n))
            r0 = sum(p[i] * _shape_sum(n, i, lambda j: v[j]) for i in range(3, n))
        p_a[n] = l_a[n] - r_a0 - 2 * r_as[n]
        p[n] = 3 * p_a[n]
        if n >= 2:
            v[n] = p[n] + r0 + 4 * r_s[n]
        rows.append(RecurrenceRow(n, l_a[n], r_as[n], r_a0, r_s[n], r0, p_a[n], p[n], v[n],
                                  ORDER * math.factorial(ORDER - 1) ** n * v[n]))
    return rows


# --- census --------------------------------------------------------------

@dataclass
class CensusRecord:
    n: int
    total: int = 0
    semilinear: int = 0
    a_semilinear: dict[int, int] = field(default_factory=lambda: {1: 0, 2: 0, 3: 0})
    linear: int = 0
    reducible: int = 0
    binary_root: dict[int, int] = field(default_factory=lambda: {i: 0 for i in range(4)})
    higher_root: int = 0
    irreducible: int = 0
    violations: int = 0
    # a-semilinear loops split by root: keys (a, star_id), a, a
    a_binary_root: dict[tuple[int, int], int] = field(default_factory=dict)
    a_higher_root: dict[int, int] = field(default_factory=lambda: {1: 0, 2: 0, 3: 0})
    a_irreducible: dict[int, int] = field(default_factory=lambda: {1: 0, 2: 0, 3: 0})

    def add(self, sl: SemilinearClass, root: RootClass) -> None:
        self.total += 1
        self.semilinear += sl.semilinear
        self.linear += sl.linear
        for a, flag in zip((1, 2, 3), sl.flags):
            self.a_semilinear[a] += flag
        if root.kind == "binary_root":
            self.binary_root[root.star_id] += 1
        elif root.kind == "higher_root":
            self.higher_root += 1
        else:
            self.irreducible += 1
        if root.kind != "irreducible":
            self.reducible += 1
        elif not sl.semilinear:
            self.violations += 1
        for a, flag in zip((1, 2, 3), sl.flags):
            if not flag:
                continue
            if root.kind == "binary_root":
                key = (a, root.star_id)
                self.a_binary_root[key] = self.a_binary_root.get(key, 0) + 1
            elif root.kind == "higher_root":
                self.a_higher_root[a] += 1
            else:
                self.a_irreducible[a] += 1

    def to_obj(self) -> dict:
        return {
            "n": self.n, "total": self.total, "semilinear": self.semilinear,
            "a_semilinear": {str(a): c for a, c in self.a_semilinear.items()},
            "linear": self.linear, "reducible": self.reducible,
            "binary_root": {str(s): c for s, c in self.binary_root.items()},
            "higher_root": self.higher_root, "irreducible": self.irreducible,
            "violations": self.violations,
            "a_binary_root": {f"{a},{s}": c for (a, s), c in sorted(self.a_binary_root.items())},
            "a_higher_root": {str(a): c for a, c in self.a_higher_root.items()},
            "a_irreducible": {str(a): c for a, c in self.a_irreducible.items()},
        }


def semilinear_roots() -> dict[int, list[int]]:
    """For each a, the ids of the binary loops that are a-semilinear."""
    out: dict[int, list[int]] = {1: [], 2: [], 3: []}
    for i, star in enumerate(binary_loops()):
        for a, flag in zip((1, 2, 3), classify_semilinearity(star).flags):
            if flag:
                out[a].append(i)
    return out


def census(n: int) -> CensusRecord:
    """Classify every n-ary loop of order 4 (n in {3, 4}), streaming."""
    if n not in (3, 4):
        raise UsageError(f"census supports n in {{3, 4}}, got {n}")
    rec = CensusRecord(n)
    for f in iter_quasigroups(n, ORDER, "loops"):
        rec.add(classify_semilinearity(f), root_classification(f))
    return rec


def census_mismatches(rec: CensusRecord, row: RecurrenceRow) -> list[str]:
    """Differences between census tallies and the recurrence row of the same arity."""
    out = []

    def check(name: str, got: int, want: int) -> None:
        if got != want:
            out.append(f"{name}: census {got}, recurrence {want}")

    check("v", rec.total, row.v)
    check("r_0", rec.higher_root, row.r_0)
    check("p", rec.irreducible, row.p)
    for s, c in rec.binary_root.items():
        check(f"r_star[{s}]", c, row.r_star)
    roots = semilinear_roots()
    for a in (1, 2, 3):
        check(f"l_a[{a}]", rec.a_semilinear[a], row.l_a)
        check(f"p_a[{a}]", rec.a_irreducible[a], row.p_a)
        check(f"r_a_0[{a}]", rec.a_higher_root[a], row.r_a_0)
        for s in range(len(binary_loops())):
            want = row.r_a_star if s in roots[a] else 0
            check(f"r_a_star[{a},{s}]", rec.a_binary_root.get((a, s), 0), want)
    check("violations", rec.violations, 0)
    return out

