"""Reproduce every checkable number and property in one run.

Each check yields :class:`CheckResult` lines; :func:`run` collects them.
Checks tagged ``slow`` (the 4-ary census and the order-5 square count) can
be skipped.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import Callable, Iterator, Optional

from . import bounds, census4, constructions, io, trades
from .config import RunConfig
from .core import ComposedQuasigroup, Leaf, Node, PartialQuasigroup, materialize, validate_quasigroup
from .enumerator import (count_extensions, count_quasigroups, gamma_analysis, iter_quasigroups,
                         random_box_partial, random_quasigroup)


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    expected: str
    actual: str

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.name}: expected {self.expected}, got {self.actual}"


def _eq(name: str, expected, actual) -> CheckResult:
    return CheckResult(name, expected == actual, str(expected), str(actual))


def _true(name: str, ok: bool, expected: str = "true", actual: Optional[str] = None) -> CheckResult:
    return CheckResult(name, bool(ok), expected, actual if actual is not None else str(bool(ok)).lower())


class Context:
    def __init__(self, cfg: RunConfig, fixtures_dir: Optional[Path], skip: set[str]):
        self.cfg = cfg
        self.fixtures_dir = fixtures_dir
        self.skip = skip
        self.counts: dict[tuple[int, int, str], int] = {}

    def count(self, n: int, k: int, mode: str = "all") -> int:
        key = (n, k, mode)
        if key not in self.counts:
            self.counts[key] = count_quasigroups(n, k, mode, cell_cap=max(self.cfg.cell_cap, 4096),
                                                 workers=self.cfg.workers)
        return self.counts[key]


ENUMERATED_ALL = {(2, 2): 2, (2, 3): 12, (3, 3): 24, (1, 4): 24, (2, 4): 576, (3, 4): 55296}
ENUMERATED_LOOPS = {(2, 4): 4, (3, 4): 64, (4, 4): 7132}


def check_recurrence(ctx: Context) -> Iterator[CheckResult]:
    loops, quasigroups = constructions.q4_listed_values(ctx.fixtures_dir)
    rows = census4.q4_recurrence(8)
    for row, lp, q in zip(rows, loops, quasigroups):
        yield _eq(f"1 recurrence Q'({row.n},4)", lp, row.v)
        yield _eq(f"1 recurrence Q({row.n},4)", q, row.Q)


def check_enumeration(ctx: Context) -> Iterator[CheckResult]:
    for (n, k), want in ENUMERATED_ALL.items():
        yield _eq(f"2 count Q({n},{k})", want, ctx.count(n, k))
    for (n, k), want in ENUMERATED_LOOPS.items():
        yield _eq(f"2 count Q'({n},{k})", want, ctx.count(n, k, "loops"))
    for n in (2, 3):
        yield _eq(f"2 Q({n},3) = 3*2^{n}", 3 * 2 ** n, ctx.count(n, 3))


def check_loop_factor(ctx: Context) -> Iterator[CheckResult]:
    pairs = sorted(set(ENUMERATED_ALL) & set(ENUMERATED_LOOPS)) + [(2, 2), (2, 3), (3, 3), (1, 4)]
    for n, k in pairs:
        total = ctx.count(n, k)
        loops = ctx.count(n, k, "loops")
        yield _eq(f"3 Q({n},{k}) = k((k-1)!)^n Q'({n},{k})", total, k * math.factorial(k - 1) ** n * loops)


def check_census(ctx: Context) -> Iterator[CheckResult]:
    expected = {
        3: dict(total=64, semilinear=46, linear=1, higher_root=0, irreducible=24, per_star=10, l_a=16),
        4: dict(total=7132, semilinear=6142, linear=1, higher_root=576, irreducible=5508, per_star=262,
                l_a=2048),
    }
    rows = census4.q4_recurrence(4)
    for n in (3, 4):
        if n == 4 and "slow" in ctx.skip:
            continue
        rec = census4.census(n)
        want = expected[n]
        for key in ("total", "semilinear", "linear", "higher_root", "irreducible"):
            yield _eq(f"4 census({n}) {key}", want[key], getattr(rec, key))
        yield _eq(f"4 census({n}) binary roots per operation", [want["per_star"]] * 4,
                  [rec.binary_root[s] for s in range(4)])
        yield _eq(f"4 census({n}) a-semilinear per a", [want["l_a"]] * 3, [rec.a_semilinear[a] for a in (1, 2, 3)])
        yield _eq(f"4 census({n}) loops neither reducible nor semilinear", 0, rec.violations)
        yield _eq(f"4 census({n}) vs recurrence mismatches", [], census4.census_mismatches(rec, rows[n - 1]))


def check_semilinear(ctx: Context) -> Iterator[CheckResult]:
    for n in (2, 3, 4):
        counts = {1: 0, 2: 0, 3: 0}
        for f in iter_quasigroups(n, 4, "loops"):
            for a in (1, 2, 3):
                counts[a] += census4.is_a_semilinear(f, a)
        want = census4.semilinear_count(n)
        yield _eq(f"5 a-semilinear {n}-ary loops per a", [want] * 3, [counts[a] for a in (1, 2, 3)])


def check_psi(ctx: Context) -> Iterator[CheckResult]:
    phi4 = constructions.load_fixture("phi4", ctx.fixtures_dir)
    psi9 = constructions.load_fixture("psi9", ctx.fixtures_dir)
    built = constructions.psi(4, phi4)
    yield _true("6 psi(4, phi4) equals reference table", built == psi9, "identical",
                "identical" if built == psi9 else f"{sum(x != y for x, y in zip(built.values, psi9.values))} cells differ")
    for m in range(3, 9):
        t = constructions.psi(m)
        counts, boxes = [], []
        for i in range(m):
            comps = trades.find_components(t, 2 * i, 2 * i + 1)
            counts.append(len(comps))
            boxes.append(sum(c.is_box() for c in comps))
        yield _true(f"6 psi({m}) is a quasigroup", validate_quasigroup(t))
        yield _eq(f"6 psi({m}) minimal components per pair", [m] * m, counts)
        yield _eq(f"6 psi({m}) box components per pair", [m - 1] * m, boxes)


LB_CASES = ((7, 2), (7, 3), (7, 4), (9, 2), (9, 3))


def check_lower_witness(ctx: Context) -> Iterator[CheckResult]:
    for k, n in LB_CASES:
        fam = trades.disjoint_family(trades.big_psi(n, (k - 1) // 2), "pair_partition",
                                     cap=ctx.cfg.materialize_cap)
        need = bounds.lower_bound_log2(n, k)
        yield _true(f"7 disjoint family of tower (k={k}, n={n}) >= {need}", len(fam) >= need,
                    f">= {need}", str(len(fam)))
    psi9 = constructions.load_fixture("psi9", ctx.fixtures_dir)
    fam = trades.disjoint_family(psi9, "pair_partition")[:12]
    seen = set()
    valid = True
    for mask in range(2 ** len(fam)):
        h = trades.switch_family(psi9, fam, mask)
        valid &= validate_quasigroup(h)
        seen.add(h.values)
    yield _eq("7 distinct switched quasigroups over 12 components", 2 ** 12, len(seen))
    yield _true("7 all switched quasigroups valid", valid)


def check_even_trades(ctx: Context) -> Iterator[CheckResult]:
    for n, k in ((2, 4), (3, 4), (2, 6), (3, 6)):
        f = constructions.interleaved_group(n, k)
        fam = trades.disjoint_family(f, "pair_partition")
        tb = bounds.trade_bounds(n, k)
        yield _eq(f"8 interleaved_group({n},{k}) disjoint components", (k // 2) ** n, len(fam))
        yield _eq(f"8 interleaved_group({n},{k}) component sizes", {2 ** n}, {len(c) for c in fam})
        yield _eq(f"8 trade bounds ({n},{k}) tight", (tb.upper, tb.upper), (tb.lower, k ** n // 2 ** n))


def box_partial_instances(rng: random.Random, count: int = 200) -> Iterator[PartialQuasigroup]:
    """Seeded random box partial quasigroups, n in {2,3}, k in {4,5,6}.

    Half come from random fills of the box alone (some have no extension),
    half are restrictions of random full quasigroups.
    """
    shapes = [(n, k) for n in (2, 3) for k in (4, 5, 6)]
    for i in range(count):
        n, k = shapes[i % len(shapes)]
        a, b = sorted(rng.sample(range(k), 2))
        if (i // len(shapes)) % 2:
            yield PartialQuasigroup.restrict_box(random_quasigroup(n, k, rng), a, b)
        else:
            yield random_box_partial(n, k, (a, b), rng)


def check_extensions(ctx: Context) -> Iterator[CheckResult]:
    rng = random.Random(ctx.cfg.seed)
    bad_product = bad_bound = bad_size = 0
    total = 0
    for g in box_partial_instances(rng):
        total += 1
        ext = count_extensions(g)
        rep = gamma_analysis(g)
        bad_product += ext != rep.extension_count
        bad_bound += not ext <= 2 ** ((g.k / 2) ** (g.n - 1))
        bad_size += any(len(c) < 2 ** (g.n - 1) for c in rep.components)
    yield _eq(f"9 extensions = product of component choices ({total} instances)", 0, bad_product)
    yield _eq(f"9 extensions <= 2^((k/2)^(n-1)) ({total} instances)", 0, bad_bound)
    yield _eq(f"9 graph components of size >= 2^(n-1) ({total} instances)", 0, bad_size)


def check_sandwich(ctx: Context) -> Iterator[CheckResult]:
    if "slow" not in ctx.skip:
        q25 = ctx.count(2, 5)
        yield _eq("10 count Q(2,5)", 161280, q25)
        lo = bounds.lower_bound_log2(2, 5)
        yield _eq("10 lower exponent (2,5)", 4, lo)
        yield _true("10 lower_bound_log2(2,5) <= log2 Q(2,5)", bounds.certify_log2_le(lo, q25))
        yield _true("10 log2 Q(2,5) <= upper_bound_log2(2,5)",
                    bounds.certify_log2_ge(bounds.upper_bound_log2_interval(2, 5), q25),
                    "<= %.4f" % bounds.upper_bound_log2(2, 5), "%.4f" % math.log2(q25))
    known = {3: {2: 12, 3: 24}, 4: {1: 24, 2: 576, 3: 55296}}
    known[4].update({row.n: row.Q for row in census4.q4_recurrence(8)})
    if "slow" not in ctx.skip:
        known[5] = {1: 120, 2: ctx.count(2, 5)}
    for k, vals in known.items():
        for n_from in sorted(vals):
            chain = bounds.chain_bound_interval(n_from, max(vals), k, vals[n_from])
            for step, hi in enumerate(chain, start=n_from + 1):
                if step in vals:
                    yield _true(f"10 chain bound k={k} from n={n_from} holds at n={step}",
                                bounds.certify_log2_ge(hi, vals[step]))


def check_asymptotics(ctx: Context) -> Iterator[CheckResult]:
    r8 = bounds.q4_asymptotic_ratio_exact(8)
    yield _true("11 |ratio(8) - 1| <= 0.01", abs(r8 - 1) <= Fraction(1, 100), "<= 0.01", "%.3g" % float(abs(r8 - 1)))
    yield _eq("11 ratio(3)", Fraction(4, 3), bounds.q4_asymptotic_ratio_exact(3))


def property_suite(seed: int) -> dict[str, list[bool]]:
    """Randomized property checks; returns per-property pass flags."""
    rng = random.Random(seed)
    out: dict[str, list[bool]] = {k: [] for k in
                                  ("involution", "commute", "size", "product", "roundtrip")}
    for _ in range(120):
        n, k = rng.choice([(2, 4), (2, 5), (2, 7), (3, 4), (3, 5)])
        f = random_quasigroup(n, k, rng)
        a, b = rng.sample(range(k), 2)
        comps = trades.find_components(f, a, b)
        c = rng.choice(comps)
        out["involution"].append(trades.switch(trades.switch(f, c), c) == f)
        out["size"].append(all(len(x) >= 2 ** n and trades.has_property_a(x.points, k, n) for x in comps))
        others = [x for x in trades.all_components(f) if set(x.points).isdisjoint(c.points)]
        if others:
            d = rng.choice(others)
            out["commute"].append(trades.switch(trades.switch(f, c), d) == trades.switch(trades.switch(f, d), c))
        part = PartialQuasigroup.restrict(f, rng.sample([p for p in itertools.product(range(k), repeat=n)],
                                                        k ** n // 2))
        out["roundtrip"].append(io.loads(io.dumps(f)) == f and io.loads(io.dumps(part)) == part
                                and io.loads(io.dumps(c)) == c)
    g = constructions.psi(3)
    boxes = [c for a, b in itertools.combinations(range(7), 2) for c in trades.find_components(g, a, b) if c.is_box()]
    for _ in range(60):
        outer = rng.choice(boxes)
        (c1, d1), (c2, d2) = [sorted({p[i] for p in outer.points}) for i in range(2)]
        q1, q2 = random_quasigroup(2, 7, rng), random_quasigroup(2, 7, rng)
        comp1 = rng.choice(trades.find_components(q1, c1, d1))
        comp2 = rng.choice(trades.find_components(q2, c2, d2))
        f = materialize(ComposedQuasigroup(Node(g, Node(q1, Leaf(0), Leaf(1)), Node(q2, Leaf(2), Leaf(3))), 7))
        prod = trades.product_component(comp1, comp2, outer.pair)
        out["product"].append(trades.is_component(f, prod.points, prod.pair))
    return out


def check_properties(ctx: Context) -> Iterator[CheckResult]:
    res = property_suite(ctx.cfg.seed)
    total = sum(len(v) for v in res.values())
    for key, flags in res.items():
        yield _eq(f"12 property {key} ({len(flags)} cases)", len(flags), sum(flags))
    yield _true("12 property cases >= 500", total >= 500, ">= 500", str(total))


CHECKS: list[tuple[str, Callable[[Context], Iterator[CheckResult]]]] = [
    ("recurrence", check_recurrence),
    ("enumeration", check_enumeration),
    ("loop_factor", check_loop_factor),
    ("census", check_census),
    ("semilinear", check_semilinear),
    ("psi", check_psi),
    ("lower_witness", check_lower_witness),
    ("even_trades", check_even_trades),
    ("extensions", check_extensions),
    ("sandwich", check_sandwich),
    ("asymptotics", check_asymptotics),
    ("properties", check_properties),
]


def run(cfg: RunConfig, skip: set[str] = frozenset(), fixtures_dir: Optional[Path] = None,
        emit: Optional[Callable[[CheckResult], None]] = None) -> list[CheckResult]:
    """Run every check group not named in ``skip`` ("slow" skips the long checks)."""
    ctx = Context(cfg, fixtures_dir, set(skip))
    results = []
    for name, fn in CHECKS:
        if name in ctx.skip:
            continue
        try:
            for r in fn(ctx):
                results.append(r)
                if emit:
                    emit(r)
        except (OSError, ValueError, KeyError) as e:
            r = CheckResult(f"{name} (aborted)", False, "no error", f"{type(e).__name__}: {e}")
            results.append(r)
            if emit:
                emit(r)
    return results


def verify_paper(cfg: Optional[RunConfig] = None, skip: set[str] = frozenset(),
                 fixtures_dir: Optional[Path] = None) -> list[CheckResult]:
    """Run the whole suite with default settings and return every result."""
    return run(cfg or RunConfig(), skip, fixtures_dir)
