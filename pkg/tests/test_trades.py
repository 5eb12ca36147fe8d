import random

import pytest

from nquasi import Hypercube, ResourceError, UsageError
from nquasi.constructions import big_psi, interleaved_group, psi
from nquasi.core import materialize, validate_quasigroup
from nquasi.enumerator import random_quasigroup
from nquasi.trades import (Component, alpha_report, disjoint_family, find_components, has_property_a,
                           is_component, switch, switch_family, value_support)

from conftest import xor4, zk


def test_psi9_components(psi9):
    comps = find_components(psi9, 0, 1)
    assert len(comps) == 4
    assert sorted(len(c) for c in comps) == [4, 4, 4, 6]
    assert sum(c.is_box() for c in comps) == 3


def test_xor_components():
    comps = find_components(xor4(), 0, 1)
    pts = [set(c.points) for c in comps]
    assert {(x, y) for x in (0, 1) for y in (0, 1)} in pts
    assert {(x, y) for x in (2, 3) for y in (2, 3)} in pts
    assert len(comps) == 2


def test_z5_single_component():
    comps = find_components(zk(5), 0, 1)
    assert [len(c) for c in comps] == [10]


def test_components_of_composed_match_materialized():
    c = big_psi(3, 3)
    assert find_components(c, 2, 3) == find_components(materialize(c), 2, 3)


def test_components_partition_support(rng):
    f = random_quasigroup(3, 5, rng)
    comps = find_components(f, 1, 4)
    pts = sorted(p for c in comps for p in c.points)
    assert pts == sorted(value_support(f, 1, 4))
    assert all(has_property_a(c.points, 5, 3) and len(c) >= 8 for c in comps)


def test_switch_xor_box():
    f = xor4()
    box = Component((0, 1), [(x, y) for x in (0, 1) for y in (0, 1)])
    g = switch(f, box)
    assert validate_quasigroup(g)
    assert sum(a != b for a, b in zip(f.values, g.values)) == 4
    assert switch(g, box) == f


def test_switch_rejects_non_component():
    with pytest.raises(UsageError):
        switch(xor4(), Component((0, 1), [(0, 0), (0, 1)]))
    assert not is_component(xor4(), [(0, 0), (0, 1)], (0, 1))


def test_switch_whole_support_relabels(rng):
    f = random_quasigroup(2, 6, rng)
    comps = find_components(f, 2, 5)
    g = switch_family(f, comps, (1 << len(comps)) - 1)
    swap = {2: 5, 5: 2}
    assert g.values == tuple(swap.get(v, v) for v in f.values)


def test_disjoint_family_sizes(psi9):
    assert len(disjoint_family(psi9)) == 16
    assert len(disjoint_family(psi(3))) == 9
    ig = interleaved_group(2, 4)
    for strategy in ("pair_partition", "greedy", "exact"):
        assert len(disjoint_family(ig, strategy)) == 4


def test_families_are_disjoint(psi9):
    for strategy in ("pair_partition", "greedy"):
        fam = disjoint_family(psi9, strategy)
        pts = [p for c in fam for p in c.points]
        assert len(pts) == len(set(pts))


def test_exact_limit(psi9):
    with pytest.raises(ResourceError):
        disjoint_family(psi9, "exact")
    with pytest.raises(UsageError):
        disjoint_family(psi9, "bogus")


def test_switch_family(psi9):
    fam = disjoint_family(psi9)
    assert switch_family(psi9, fam, 0) == psi9
    rng = random.Random(5)
    m1, m2 = rng.sample(range(1, 2 ** 16), 2)
    g1, g2 = switch_family(psi9, fam, m1), switch_family(psi9, fam, m2)
    assert g1 != g2 and validate_quasigroup(g1) and validate_quasigroup(g2)
    with pytest.raises(UsageError):
        switch_family(psi9, fam, [True])
    with pytest.raises(UsageError):
        switch_family(psi9, [fam[0], fam[0]], 1)


def test_alpha_reports():
    assert alpha_report(2, 4).alpha == 4
    r3 = alpha_report(3, 3)
    assert r3.alpha >= 6 and r3.alpha >= r3.bound
    r4 = alpha_report(4, 3)
    assert r4.alpha >= 18 and r4.alpha >= r4.bound


def test_component_roundtrip():
    c = Component((3, 1), [(1, 1), (0, 0)])
    assert c.pair == (1, 3) and c.points[0] == (0, 0)
    assert Component.from_obj(c.to_obj()) == c
    with pytest.raises(UsageError):
        Component((2, 2), [])
