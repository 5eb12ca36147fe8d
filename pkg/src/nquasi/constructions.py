"""Explicit quasigroup constructions and the bundled table fixtures."""
from __future__ import annotations

import json
from importlib import resources
from pathlib import Path

from .core import ComposedQuasigroup, Hypercube, Leaf, Node, is_idempotent
from .errors import UsageError

FIXTURES = ("phi4", "psi9")


def fixture_path(name: str, directory: str | Path | None = None) -> Path:
    if directory is not None:
        return Path(directory) / f"{name}.json"
    return Path(str(resources.files("nquasi") / "fixtures" / f"{name}.json"))


def load_fixture(name: str, directory: str | Path | None = None) -> Hypercube:
    with open(fixture_path(name, directory)) as fh:
        return Hypercube.from_obj(json.load(fh))


def q4_listed_values(directory: str | Path | None = None) -> tuple[list[int], list[int]]:
    """The listed counts of n-ary loops and quasigroups of order 4, n = 1..8."""
    with open(fixture_path("q4_values", directory)) as fh:
        d = json.load(fh)
    return [int(x) for x in d["loops"]], [int(x) for x in d["quasigroups"]]


def cyclic_sum(n: int, k: int) -> Hypercube:
    """``x_1 + ... + x_n mod k``."""
    return Hypercube.from_function(k, n, lambda *x: sum(x) % k)


def idempotent_quasigroup(m: int) -> Hypercube:
    """An idempotent binary quasigroup of order ``m >= 3``.

    Odd orders use ``c*(x+y) mod m`` with ``2c = 1 mod m``.  An even order is
    prolonged from the odd table of order ``m-1`` along the transversal
    ``{(x, x+1)}``: those cells take the new symbol and their old values move
    to the new row and column.
    """
    if m < 3:
        raise UsageError(f"no idempotent quasigroup of order {m}; need m >= 3")
    if m % 2:
        c = (m + 1) // 2
        return Hypercube.from_function(m, 2, lambda x, y: c * (x + y) % m)
    base = idempotent_quasigroup(m - 1).rows()
    o = m - 1
    rows = [row + [0] for row in base] + [[0] * m]
    for x in range(o):
        y = (x + 1) % o
        old = base[x][y]
        rows[x][y] = o
        rows[x][o] = old
        rows[o][y] = old
    rows[o][o] = o
    return Hypercube.from_rows(rows)


def psi(m: int, phi: Hypercube | None = None) -> Hypercube:
    """Binary quasigroup of order ``2m+1`` with many {2i,2i+1}-components.

    Symbols ``2a`` and ``2a+1`` form the a-th pair; the top symbol ``2m`` is a
    two-sided identity.
    """
    if m < 3:
        raise UsageError(f"psi needs m >= 3, got {m}")
    if phi is None:
        phi = idempotent_quasigroup(m)
    if phi.n != 2 or phi.k != m:
        raise UsageError(f"phi must be a binary table of order {m}")
    if not is_idempotent(phi):
        raise UsageError("phi must be idempotent")
    k = 2 * m + 1
    top = k - 1
    t = [[0] * k for _ in range(k)]
    for a in range(m):
        for b in range(m):
            for d in (0, 1):
                for s in (0, 1):
                    x, y = 2 * a + d, 2 * b + s
                    if a != b:
                        t[x][y] = 2 * phi(a, b) + (d + s) % 2
                    elif d == s:
                        t[x][y] = 2 * a + 1 - d
                    else:
                        t[x][y] = top
    for x in range(top):
        t[top][x] = x
        t[x][top] = x
    t[top][top] = top
    return Hypercube.from_rows(t)


def big_psi(n: int, m: int, phi: Hypercube | None = None) -> ComposedQuasigroup:
    """The n-ary tower over ``psi(m)``.

    Arity 2 is ``psi`` itself; an odd arity adds one variable under a new
    outer ``psi`` node, an even arity adds ``psi(y, z)`` under one.
    """
    if n < 2:
        raise UsageError(f"the psi tower needs n >= 2, got {n}")
    table = psi(m, phi)
    tree = Node(table, Leaf(0), Leaf(1))
    built = 2
    while built < n:
        if n - built >= 2:
            tree = Node(table, tree, Node(table, Leaf(built), Leaf(built + 1)))
            built += 2
        else:
            tree = Node(table, tree, Leaf(built))
            built += 1
    return ComposedQuasigroup(tree, table.k)


def interleaved_group(n: int, k: int) -> Hypercube:
    """``f(x) = 2*(sum u_i mod k/2) + (sum d_i mod 2)`` where ``x_i = 2*u_i + d_i``.

    Every box ``{2u_1, 2u_1+1} x ... x {2u_n, 2u_n+1}`` is a minimal
    component, giving ``(k/2)^n`` disjoint ones.
    """
    if k % 2 or k < 4:
        raise UsageError(f"interleaved_group needs an even order >= 4, got {k}")
    h = k // 2
    return Hypercube.from_function(
        k, n, lambda *x: 2 * (sum(v // 2 for v in x) % h) + sum(v % 2 for v in x) % 2)
