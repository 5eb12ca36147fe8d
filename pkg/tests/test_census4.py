import pytest
from sympy.functions.combinatorial.numbers import bell, stirling

from nquasi import Hypercube, UsageError
from nquasi.census4 import (PartitionShape, binary_loops, census, classify_semilinearity, find_reduction,
                            is_a_semilinear, partition_count, partition_shapes, q4_recurrence,
                            root_classification, semilinear_count, semilinear_offset)
from nquasi.constructions import q4_listed_values
from nquasi.enumerator import iter_quasigroups
from nquasi.trades import value_support

from conftest import xor4, zk


def test_xor_support():
    pts = value_support(xor4(), 0, 1)
    assert len(pts) == 8
    assert set(pts) == {(x, y) for x in range(4) for y in range(4) if x >> 1 == y >> 1}


def test_psi_support_size(psi9):
    pts = value_support(psi9, 0, 1)
    assert len(pts) == 18
    assert all(sum(p[0] == r for p in pts) == 2 for r in range(9))


def test_support_size_general():
    f = zk(5, 3)
    assert len(value_support(f, 2, 4)) == 2 * 5 ** 2


def test_semilinear_flags():
    assert is_a_semilinear(xor4(), 1)
    assert is_a_semilinear(zk(4), 2)
    assert not is_a_semilinear(zk(4), 1)
    assert classify_semilinearity(xor4()).flags == (True, True, True)
    assert classify_semilinearity(xor4()).linear
    z = classify_semilinearity(zk(4))
    assert z.flags == (False, True, False)
    assert z.semilinear and not z.linear


def test_semilinear_offset():
    assert [semilinear_offset(n) for n in (1, 2, 3, 4)] == [0, 1, 0, 1]


def test_ternary_semilinear_count():
    assert sum(classify_semilinearity(f).semilinear for f in iter_quasigroups(3, 4, "loops")) == 46


@pytest.mark.parametrize("n", [2, 3])
def test_semilinear_count_formula(n):
    for a in (1, 2, 3):
        assert sum(is_a_semilinear(f, a) for f in iter_quasigroups(n, 4, "loops")) == semilinear_count(n)
    assert semilinear_count(n) == 2 ** (2 ** n - n - 1)


def test_reduction_of_cyclic_sum():
    f = zk(5, 3)
    w = find_reduction(f)
    assert w is not None and w.subset == (0, 1) and w.rest == (2,)
    assert w.recompose() == f


def test_no_reduction_for_binary(phi4):
    assert find_reduction(phi4) is None


def test_irreducible_ternary_loops_have_no_reduction():
    irr = [f for f in iter_quasigroups(3, 4, "loops") if root_classification(f).kind == "irreducible"]
    assert len(irr) == 24
    assert all(find_reduction(f) is None for f in irr)


def test_reductions_recompose():
    for f in iter_quasigroups(3, 4, "loops"):
        w = find_reduction(f)
        if w is not None:
            assert w.recompose() == f


def test_binary_loops():
    loops = binary_loops()
    assert len(loops) == 4
    assert loops[0] == xor4()


def test_root_binary_two_levels():
    x, z = binary_loops()[0], binary_loops()[1]
    f = Hypercube.from_function(4, 3, lambda a, b, c: z(x(a, b), c))
    r = root_classification(f)
    assert r.kind == "binary_root" and r.star == z
    assert r.partition == ((0, 1), (2,))


def test_root_xor_singletons():
    r = root_classification(xor4(3))
    assert r.kind == "binary_root" and r.star_id == 0
    assert r.partition == ((0,), (1,), (2,))


def test_root_needs_arity_three():
    with pytest.raises(UsageError):
        root_classification(xor4())


@pytest.mark.parametrize("sizes,mults,want", [((1, 2), (1, 1), 3), ((2,), (2,), 3), ((1, 3), (1, 1), 4)])
def test_partition_count_examples(sizes, mults, want):
    assert partition_count(PartitionShape(sizes, mults)) == want


@pytest.mark.parametrize("n", range(1, 9))
def test_partition_sums_match_stirling_and_bell(n):
    for i in range(1, n + 1):
        assert sum(partition_count(s) for s in partition_shapes(n, i)) == stirling(n, i)
    assert sum(partition_count(s) for s in partition_shapes(n)) == bell(n)


def test_shape_validation():
    with pytest.raises(UsageError):
        PartitionShape((2, 1), (1, 1))


def test_recurrence_rows():
    rows = q4_recurrence(8)
    r3 = rows[2]
    assert (r3.v, r3.Q, r3.r_star, r3.r_0, r3.p, r3.p_a, r3.r_a_star) == (64, 55296, 10, 0, 24, 8, 4)
    assert (rows[4].v, rows[4].Q) == (201538000, 6268637952000)
    assert rows[5].v == 432345572694417712
    loops, qs = q4_listed_values()
    assert [r.v for r in rows] == loops
    assert [r.Q for r in rows] == qs
    assert len(str(rows[7].Q)) == 82
    for r in rows[2:]:
        assert r.p_a == r.l_a - r.r_a_0 - 2 * r.r_a_star
        assert r.p == 3 * r.p_a
        assert r.v == r.p + r.r_0 + 4 * r.r_star
        assert r.Q == 4 * 6 ** r.n * r.v


def test_census3():
    rec = census(3)
    assert (rec.total, rec.semilinear, rec.linear, rec.reducible, rec.irreducible, rec.violations) == (
        64, 46, 1, 40, 24, 0)
    assert rec.a_semilinear == {1: 16, 2: 16, 3: 16}
    assert rec.binary_root == {0: 10, 1: 10, 2: 10, 3: 10}
    assert rec.higher_root == 0


def test_census_arity_checked():
    with pytest.raises(UsageError):
        census(5)
