import pytest

from nquasi import UsageError
from nquasi.constructions import big_psi, cyclic_sum, idempotent_quasigroup, interleaved_group, psi
from nquasi.core import is_idempotent, materialize, validate_quasigroup
from nquasi.trades import disjoint_family


def test_idempotent_small():
    assert idempotent_quasigroup(3).rows() == [[0, 2, 1], [2, 1, 0], [1, 0, 2]]
    h = idempotent_quasigroup(5)
    assert [h(x, x) for x in range(5)] == [0, 1, 2, 3, 4]


@pytest.mark.parametrize("m", range(3, 13))
def test_idempotent_valid(m):
    h = idempotent_quasigroup(m)
    assert validate_quasigroup(h) and is_idempotent(h)


def test_idempotent_rejects_small():
    with pytest.raises(UsageError):
        idempotent_quasigroup(2)


def test_psi_matches_fixture(phi4, psi9):
    assert psi(4, phi4) == psi9


@pytest.mark.parametrize("m", range(3, 9))
def test_psi_properties(m):
    t = psi(m)
    k = 2 * m + 1
    assert validate_quasigroup(t)
    assert t(k - 1, k - 1) == k - 1


def test_psi_rejects_bad_phi(phi4):
    with pytest.raises(UsageError):
        psi(4, cyclic_sum(2, 4))
    with pytest.raises(UsageError):
        psi(3, phi4)


def test_big_psi(psi9, phi4):
    assert materialize(big_psi(2, 4, phi4)) == psi9
    assert materialize(big_psi(2, 3)) == psi(3)
    h = materialize(big_psi(4, 3))
    assert len(h.values) == 2401 and validate_quasigroup(h)
    assert big_psi(3, 4, phi4)(0, 0, 0) == 8
    assert big_psi(5, 3).n == 5


def test_interleaved_group():
    for n, k, want in [(2, 4, 4), (3, 4, 8), (2, 6, 9)]:
        f = interleaved_group(n, k)
        assert validate_quasigroup(f)
        fam = disjoint_family(f)
        assert len(fam) == want
        assert all(c.is_box() for c in fam)
    with pytest.raises(UsageError):
        interleaved_group(2, 5)
