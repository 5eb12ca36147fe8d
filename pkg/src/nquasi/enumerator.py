"""Exact backtracking enumeration of quasigroups, loops and completions.

Cells are filled in table (lexicographic) order.  Every axis-parallel line
keeps a bitmask of the symbols already placed on it, so the candidates for
a cell are the symbols missing from all ``n`` lines through it.
"""
from __future__ import annotations

import math
import random
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator, Mapping

from .core import Hypercube, PartialQuasigroup, Point, all_points, point_index
from .errors import ResourceError, UsageError

DEFAULT_CELL_CAP = 4096
MODES = ("all", "loops")


class _Search:
    """Search state over one cube with some cells pinned in advance."""

    def __init__(self, k: int, n: int, pinned: Mapping[int, int]):
        if k > 64:
            raise UsageError("symbol bitmasks support orders up to 64")
        self.k, self.n = k, n
        size = k ** n
        plane = k ** (n - 1)
        self.full = (1 << k) - 1
        lines_of = []
        for c in range(size):
            ls = []
            for i in range(n):
                stride = k ** (n - 1 - i)
                reduced = (c // (stride * k)) * stride + c % stride
                ls.append(i * plane + reduced)
            lines_of.append(tuple(ls))
        self.lines_of = lines_of
        self.used = [0] * (n * plane)
        self.values = [-1] * size
        self.dead = False
        for c, v in pinned.items():
            bit = 1 << v
            if any(self.used[l] & bit for l in lines_of[c]):
                self.dead = True
            for l in lines_of[c]:
                self.used[l] |= bit
            self.values[c] = v
        self.free = [c for c in range(size) if c not in pinned]

    def candidates(self, c: int) -> int:
        m = self.full
        for l in self.lines_of[c]:
            m &= ~self.used[l]
        return m

    def walk(self, count_only: bool) -> Iterator[int]:
        """Depth-first walk yielding once per leaf.

        In count-only mode the last free cell is not branched on; the walk
        yields the number of its candidates instead.  Otherwise it yields 1
        per completed table, readable from ``self.values`` at that moment.
        """
        free, lines_of, used, values = self.free, self.lines_of, self.used, self.values
        if self.dead:
            return
        if not free:
            yield 1
            return
        last = len(free) - 1
        cand = [0] * len(free)
        placed = [0] * len(free)
        cand[0] = self.candidates(free[0])
        depth = 0
        while depth >= 0:
            c = free[depth]
            ls = lines_of[c]
            bit = placed[depth]
            if bit:
                for l in ls:
                    used[l] ^= bit
                placed[depth] = 0
            m = cand[depth]
            if not m:
                depth -= 1
                continue
            if depth == last and count_only:
                yield m.bit_count()
                cand[depth] = 0
                continue
            bit = m & -m
            cand[depth] = m ^ bit
            values[c] = bit.bit_length() - 1
            if depth == last:
                yield 1
                continue
            for l in ls:
                used[l] |= bit
            placed[depth] = bit
            depth += 1
            nc = free[depth]
            m = self.full
            for l in lines_of[nc]:
                m &= ~used[l]
            cand[depth] = m

    def count(self) -> int:
        return sum(self.walk(True))

    def tables(self) -> Iterator[list[int]]:
        for _ in self.walk(False):
            yield list(self.values)

    def prefixes(self, depth: int) -> Iterator[dict[int, int]]:
        """Consistent assignments of the first ``depth`` free cells."""
        cells = self.free[:depth]

        def rec(i: int, acc: dict[int, int]):
            if i == len(cells):
                yield dict(acc)
                return
            c = cells[i]
            m = self.candidates(c)
            while m:
                bit = m & -m
                m ^= bit
                for l in self.lines_of[c]:
                    self.used[l] |= bit
                acc[c] = bit.bit_length() - 1
                yield from rec(i + 1, acc)
                del acc[c]
                for l in self.lines_of[c]:
                    self.used[l] ^= bit

        if not self.dead:
            yield from rec(0, {})


def _loop_pins(k: int, n: int) -> dict[int, int]:
    pins = {}
    for i in range(n):
        for a in range(k):
            p = [0] * n
            p[i] = a
            pins[point_index(p, k)] = a
    return pins


def _check_budget(n: int, k: int, cell_cap: int) -> None:
    if n < 1 or k < 1:
        raise UsageError(f"need n >= 1 and k >= 1, got n={n}, k={k}")
    if k ** n > cell_cap:
        raise ResourceError(f"k^n = {k ** n} cells exceeds the enumeration cell cap of {cell_cap}")


def _pins_for(n: int, k: int, mode: str) -> dict[int, int]:
    if mode not in MODES:
        raise UsageError(f"mode must be one of {MODES}, got {mode!r}")
    return _loop_pins(k, n) if mode == "loops" else {}


def _count_subtree(args) -> int:
    k, n, pinned = args
    return _Search(k, n, pinned).count()


def _count_pinned(k: int, n: int, pinned: Mapping[int, int], workers: int, split_depth: int) -> int:
    if workers <= 1:
        return _Search(k, n, pinned).count()
    root = _Search(k, n, pinned)
    jobs = [(k, n, {**pinned, **pre}) for pre in root.prefixes(split_depth)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_count_subtree, jobs, chunksize=max(1, len(jobs) // (4 * workers))))


def count_quasigroups(n: int, k: int, mode: str = "all", *, cell_cap: int = DEFAULT_CELL_CAP,
                      workers: int = 1, split_depth: int = 3) -> int:
    """Exact number of n-ary quasigroups (``mode="all"``) or loops of order k.

    With ``workers > 1`` the search tree is cut after ``split_depth`` free
    cells and the subtrees are counted in a process pool.
    """
    _check_budget(n, k, cell_cap)
    return _count_pinned(k, n, _pins_for(n, k, mode), workers, split_depth)


def iter_quasigroups(n: int, k: int, mode: str = "all", *,
                     cell_cap: int = DEFAULT_CELL_CAP) -> Iterator[Hypercube]:
    """Yield every quasigroup (or loop) in lexicographic order of value tables."""
    _check_budget(n, k, cell_cap)
    s = _Search(k, n, _pins_for(n, k, mode))
    for vals in s.tables():
        yield Hypercube(k, n, tuple(vals))


def for_each(n: int, k: int, mode: str, visitor: Callable[[Hypercube], object], *,
             cell_cap: int = DEFAULT_CELL_CAP) -> int:
    visits = 0
    for h in iter_quasigroups(n, k, mode, cell_cap=cell_cap):
        visitor(h)
        visits += 1
    return visits


def count_completions(g: PartialQuasigroup, *, cell_cap: int = DEFAULT_CELL_CAP) -> int:
    """Number of quasigroups agreeing with ``g`` on its domain."""
    _check_budget(g.n, g.k, cell_cap)
    pinned = {point_index(p, g.k): v for p, v in g.values.items()}
    return _Search(g.k, g.n, pinned).count()


def _require_box(g: PartialQuasigroup) -> None:
    if g.box is None:
        raise UsageError("expected a partial quasigroup on a box domain Sigma^(n-1) x B")
    if g.k < 3:
        raise UsageError("box extension counting needs k >= 3")


def count_extensions(g: PartialQuasigroup, *, cell_cap: int = DEFAULT_CELL_CAP) -> int:
    _require_box(g)
    return count_completions(g, cell_cap=cell_cap)


def extension_bound(n: int, k: int) -> float:
    """The cap ``2^((k/2)^(n-1))`` on box extensions."""
    return 2.0 ** ((k / 2) ** (n - 1))


@dataclass(frozen=True)
class GammaReport:
    missing: dict[Point, tuple[int, int]]
    components: list[list[Point]]
    choices: list[int]

    @property
    def extension_count(self) -> int:
        return math.prod(self.choices)

    def to_obj(self) -> dict:
        return {
            "missing": [[list(p), list(pair)] for p, pair in self.missing.items()],
            "components": [[list(p) for p in comp] for comp in self.components],
            "choices": list(self.choices),
        }


def _neighbors(x: Point, k: int) -> Iterator[Point]:
    for i in range(len(x)):
        for c in range(k):
            if c != x[i]:
                yield x[:i] + (c,) + x[i + 1:]


def gamma_analysis(g: PartialQuasigroup) -> GammaReport:
    """Missing-pair graph of a box partial quasigroup and its component choices.

    Each vertex ``x`` of ``Sigma^(n-1)`` misses a pair ``G(x)`` of symbols on
    its last-coordinate line; fixing ``f(x, a)`` inside one component of the
    graph forces every other vertex of it, so a component admits 0, 1 or 2
    consistent choices.
    """
    _require_box(g)
    k, n = g.k, g.n
    a, _b = g.box
    missing: dict[Point, tuple[int, int]] = {}
    for x in all_points(k, n - 1):
        present = {g.values[x + (c,)] for c in range(k) if c not in g.box}
        pair = tuple(sorted(set(range(k)) - present))
        missing[x] = pair  # type: ignore[assignment]

    def adjacent(x: Point) -> Iterator[Point]:
        for y in _neighbors(x, k):
            if set(missing[x]) & set(missing[y]):
                yield y

    seen: set[Point] = set()
    components: list[list[Point]] = []
    choices: list[int] = []
    for start in missing:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            x = queue.popleft()
            for y in adjacent(x):
                if y not in seen:
                    seen.add(y)
                    comp.append(y)
                    queue.append(y)
        comp.sort()
        components.append(comp)
        choices.append(sum(_propagate(comp, missing, adjacent, first) for first in missing[start]))
    return GammaReport(missing, components, choices)


def _propagate(comp, missing, adjacent, first_value) -> bool:
    # value at layer a for each vertex; layer b gets the other missing symbol
    at_a = {comp[0]: first_value}
    queue = deque([comp[0]])
    while queue:
        x = queue.popleft()
        xa = at_a[x]
        xb = missing[x][0] if missing[x][1] == xa else missing[x][1]
        for y in adjacent(x):
            ya = at_a.get(y)
            if ya is None:
                # y's layer-a value must avoid xa and its layer-b value must avoid xb
                opts = [s for s in missing[y]
                        if s != xa and (missing[y][0] if missing[y][1] == s else missing[y][1]) != xb]
                if not opts:
                    return False
                # adjacent pairs share a symbol, which leaves exactly one option
                at_a[y] = opts[0]
                queue.append(y)
            else:
                yb = missing[y][0] if missing[y][1] == ya else missing[y][1]
                if ya == xa or yb == xb:
                    return False
    return True


# --- random instances -----------------------------------------------------

def random_fill(k: int, n: int, rng: random.Random, cells=None,
                pinned: Mapping[int, int] | None = None, max_nodes: int = 20_000) -> dict[int, int] | None:
    """Randomized depth-first fill of ``cells`` (default: every unpinned cell).

    Always branches on the open cell with the fewest candidates.  Returns
    the flat-index assignment, or None if the node budget runs out or the
    cells cannot be filled.
    """
    s = _Search(k, n, dict(pinned or {}))
    if s.dead:
        return None
    todo = set(s.free if cells is None else cells)
    out: dict[int, int] = {}
    nodes = 0

    def rec() -> bool:
        nonlocal nodes
        if not todo:
            return True
        nodes += 1
        if nodes > max_nodes:
            return False
        best, best_m, best_n = -1, 0, k + 1
        for c in todo:
            m = s.candidates(c)
            cnt = m.bit_count()
            if cnt < best_n:
                best, best_m, best_n = c, m, cnt
                if cnt <= 1:
                    break
        if best_n == 0:
            return False
        c = best
        todo.discard(c)
        opts = [v for v in range(k) if best_m >> v & 1]
        rng.shuffle(opts)
        for v in opts:
            bit = 1 << v
            for l in s.lines_of[c]:
                s.used[l] |= bit
            out[c] = v
            if rec():
                return True
            for l in s.lines_of[c]:
                s.used[l] ^= bit
            del out[c]
            if nodes > max_nodes:
                break
        todo.add(c)
        return False

    return out if rec() else None


def random_quasigroup(n: int, k: int, rng: random.Random, switches: int = 20,
                      max_tries: int = 100) -> Hypercube:
    """A random quasigroup of order k and arity n.

    Binary tables come from a randomized fill.  Higher arities compose
    random binary tables over a shuffled variable order and then switch
    ``switches`` randomly chosen minimal components so that the result is
    usually no longer a composition.
    """
    if n <= 2:
        for _ in range(max_tries):
            got = random_fill(k, n, rng)
            if got is not None:
                return Hypercube(k, n, tuple(got[c] for c in range(k ** n)))
        raise ResourceError(f"random fill of order {k}, arity {n} did not finish in {max_tries} tries")
    from .core import ComposedQuasigroup, Leaf, Node, materialize
    from .trades import find_components, switch

    order = list(range(n))
    rng.shuffle(order)
    trees = [Leaf(v) for v in order]
    while len(trees) > 1:
        i = rng.randrange(len(trees) - 1)
        trees[i:i + 2] = [Node(random_quasigroup(2, k, rng), trees[i], trees[i + 1])]
    f = materialize(ComposedQuasigroup(trees[0], k))
    for _ in range(switches):
        a, b = rng.sample(range(k), 2)
        f = switch(f, rng.choice(find_components(f, a, b)))
    return f


def random_box_partial(n: int, k: int, pair: tuple[int, int], rng: random.Random,
                       max_tries: int = 100) -> PartialQuasigroup:
    """A random partial quasigroup on ``Sigma^(n-1) x (Sigma minus pair)``."""
    cells = [point_index(p, k) for p in all_points(k, n) if p[-1] not in pair]
    for _ in range(max_tries):
        got = random_fill(k, n, rng, cells=cells)
        if got is not None:
            vals = {p: got[point_index(p, k)] for p in all_points(k, n) if p[-1] not in pair}
            return PartialQuasigroup(k, n, vals, box=pair)
    raise ResourceError(f"random box fill of order {k}, arity {n} did not finish in {max_tries} tries")
