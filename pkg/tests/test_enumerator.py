import itertools
import math
import random

import pytest

from nquasi import Hypercube, PartialQuasigroup, ResourceError, UsageError
from nquasi.core import validate_loop, validate_quasigroup
from nquasi.enumerator import (count_completions, count_extensions, count_quasigroups, extension_bound,
                               for_each, gamma_analysis, iter_quasigroups, random_box_partial,
                               random_quasigroup)

from conftest import zk


def brute_latin_squares(k):
    """Every latin square of order k, built row by row from permutations."""
    perms = list(itertools.permutations(range(k)))

    def rec(rows):
        if len(rows) == k:
            yield tuple(v for r in rows for v in r)
            return
        for p in perms:
            if all(p[j] != r[j] for r in rows for j in range(k)):
                yield from rec(rows + [p])

    yield from rec([])


def brute_extensions(g):
    assert g.n == 2
    return sum(all(sq[x * g.k + y] == v for (x, y), v in g.values.items()) for sq in brute_latin_squares(g.k))


@pytest.mark.parametrize("n,k,want", [(1, 2, 2), (2, 2, 2), (1, 3, 6), (2, 3, 12), (3, 3, 24), (1, 4, 24),
                                      (2, 4, 576)])
def test_count_all(n, k, want):
    assert count_quasigroups(n, k) == want


def test_count_brute_force_matches():
    for k in (2, 3, 4):
        assert count_quasigroups(2, k) == sum(1 for _ in brute_latin_squares(k))


@pytest.mark.parametrize("n,k,want", [(2, 4, 4), (3, 4, 64), (1, 4, 1), (2, 5, 56)])
def test_count_loops(n, k, want):
    assert count_quasigroups(n, k, "loops") == want


def test_for_each_visits():
    assert for_each(2, 2, "all", lambda h: None) == 2
    seen = []
    assert for_each(1, 4, "loops", seen.append) == 1
    assert seen[0].values == (0, 1, 2, 3)
    assert for_each(3, 4, "loops", lambda h: None) == 64


def test_iter_yields_valid_distinct_tables():
    tabs = list(iter_quasigroups(2, 4, "loops"))
    assert len({t.values for t in tabs}) == 4
    assert all(validate_loop(t) for t in tabs)
    tabs = list(iter_quasigroups(2, 3))
    assert len({t.values for t in tabs}) == 12
    assert all(validate_quasigroup(t) for t in tabs)


def test_cell_cap():
    with pytest.raises(ResourceError):
        count_quasigroups(3, 5, cell_cap=100)
    with pytest.raises(UsageError):
        count_quasigroups(2, 3, "bogus")


def test_parallel_count_matches():
    assert count_quasigroups(2, 4, workers=2, split_depth=2) == 576


def test_z3_column_extensions():
    z3 = zk(3)
    g = PartialQuasigroup.restrict_box(z3, 0, 1)
    assert [g.values[(x, 2)] for x in range(3)] == [2, 0, 1]
    assert count_extensions(g) == 2 == brute_extensions(g)
    rep = gamma_analysis(g)
    assert [len(c) for c in rep.components] == [3]
    assert rep.choices == [2]


def test_phi4_column_extensions(phi4):
    g = PartialQuasigroup.restrict_box(phi4, 0, 1)
    assert count_extensions(g) == 4 == brute_extensions(g)
    rep = gamma_analysis(g)
    assert sorted(sorted(c) for c in rep.components) == [[(0,), (3,)], [(1,), (2,)]]
    assert rep.choices == [2, 2]
    assert rep.missing[(0,)] == (0, 2) and rep.missing[(1,)] == (1, 3)


def test_inconsistent_partial_rejected():
    with pytest.raises(UsageError):
        PartialQuasigroup(3, 2, {(0, 2): 1, (1, 2): 1})


def test_extensions_need_box(phi4):
    with pytest.raises(UsageError):
        count_extensions(PartialQuasigroup.restrict(phi4, [(0, 0)]))


def test_count_completions_explicit(phi4):
    g = PartialQuasigroup.restrict(phi4, [(0, 0), (1, 1), (2, 2), (3, 3)])
    assert count_completions(g) == brute_extensions(g)


def test_random_box_instances_against_brute_force():
    rng = random.Random(7)
    for _ in range(10):
        k = rng.choice([4, 5])
        g = random_box_partial(2, k, tuple(sorted(rng.sample(range(k), 2))), rng)
        ext = count_extensions(g)
        rep = gamma_analysis(g)
        if k == 4:
            assert ext == brute_extensions(g)
        assert ext == rep.extension_count
        assert ext <= extension_bound(2, k)
        assert all(len(c) >= 2 for c in rep.components)
        assert sorted(p for c in rep.components for p in c) == sorted(itertools.product(range(k), repeat=1))


def test_gamma_components_partition_cube():
    rng = random.Random(3)
    g = PartialQuasigroup.restrict_box(random_quasigroup(3, 5, rng), 1, 3)
    rep = gamma_analysis(g)
    pts = sorted(p for c in rep.components for p in c)
    assert pts == sorted(itertools.product(range(5), repeat=2))
    assert all(len(set(v)) == 2 for v in rep.missing.values())
    assert rep.extension_count == count_extensions(g) >= 1


def test_random_quasigroup_valid():
    rng = random.Random(1)
    for n, k in [(2, 6), (3, 6), (4, 4), (3, 7)]:
        assert validate_quasigroup(random_quasigroup(n, k, rng))


def test_extension_bound():
    assert extension_bound(3, 4) == 16.0
    assert math.isclose(extension_bound(2, 5), 2 ** 2.5)
