"""Closed-form bounds on the number of n-ary quasigroups and on trade numbers.

Real-valued bounds are returned as floats for display.  Comparisons against
exact counts go through :func:`certify_log2_le`, which uses interval
arithmetic so that a passing comparison is rigorous.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from mpmath.ctx_iv import MPIntervalContext

from .constructions import big_psi, cyclic_sum, interleaved_group
from .core import DEFAULT_MATERIALIZE_CAP
from .errors import ResourceError, UsageError

PRECISION_BITS = 64

# private context so the working precision does not leak into mpmath.iv
iv = MPIntervalContext()
iv.prec = PRECISION_BITS


def _iv_log2(x) -> "iv.mpf":
    return iv.log(iv.mpf(x)) / iv.log(iv.mpf(2))


def c_k_interval(k: int) -> "iv.mpf":
    if k < 5:
        raise UsageError(f"the upper bound needs k >= 5, got {k}")
    return _iv_log2(math.factorial(k)) / (k - 2) + iv.mpf(k) / (k - 4)


def c_k(k: int) -> float:
    """``log2(k!)/(k-2) + k/(k-4)``."""
    return float(c_k_interval(k).mid)


def upper_bound_log2_interval(n: int, k: int) -> "iv.mpf":
    if n < 2:
        raise UsageError(f"the upper bound needs n >= 2, got {n}")
    return c_k_interval(k) * iv.mpf(k - 2) ** n


def upper_bound_log2(n: int, k: int) -> float:
    """Upper bound on ``log2 Q(n, k)``: ``c_k * (k-2)^n``."""
    return float(upper_bound_log2_interval(n, k).mid)


def lower_bound_log2(n: int, k: int) -> int:
    """Exponent e with ``Q(n, k) >= 2^e`` for odd ``k >= 5``."""
    if k < 5 or k % 2 == 0:
        raise UsageError(f"the lower bound needs odd k >= 5, got {k}")
    if n < 2:
        raise UsageError(f"the lower bound needs n >= 2, got {n}")
    return ((k - 3) // 2) ** ((n - 1) // 2) * ((k - 1) // 2) ** ((n + 2) // 2)


def certify_log2_le(lo, count: int) -> bool:
    """Rigorous ``lo <= log2(count)`` where lo is an int or an interval."""
    if isinstance(lo, int):
        return lo <= 0 or 2 ** lo <= count
    return bool(iv.mpf(lo).b <= _iv_log2(count).a)


def certify_log2_ge(hi, count: int) -> bool:
    """Rigorous ``log2(count) <= hi``."""
    if isinstance(hi, int):
        return hi >= 0 and count <= 2 ** hi
    return bool(_iv_log2(count).b <= iv.mpf(hi).a)


@dataclass(frozen=True)
class TradeBounds:
    lower: int
    upper: int
    method: str
    published: bool = True


def trade_bounds(n: int, k: int, *, cap: int = DEFAULT_MATERIALIZE_CAP) -> TradeBounds:
    """Constructive lower and counting upper bound on the trade number.

    Even k uses the interleaved group.  Odd ``k >= 7`` uses the pair-partition
    family of the psi tower.  k in {3, 5} falls back to the cyclic-sum
    operation, which is not one of the published constructions.
    """
    from .trades import disjoint_family

    if k < 3:
        raise UsageError(f"trade bounds need k >= 3, got {k}")
    upper = k ** n // 2 ** n
    if k ** n > cap:
        raise ResourceError(f"{k ** n} cells exceeds the materialization cap of {cap}")
    if k % 2 == 0:
        fam = disjoint_family(interleaved_group(n, k), "pair_partition", cap=cap)
        return TradeBounds(len(fam), upper, "interleaved_group")
    if k >= 7 and n >= 2:
        fam = disjoint_family(big_psi(n, (k - 1) // 2), "pair_partition", cap=cap)
        return TradeBounds(len(fam), upper, "big_psi")
    fam = disjoint_family(cyclic_sum(n, k), "pair_partition", cap=cap)
    return TradeBounds(len(fam), upper, "cyclic_sum", published=False)


def chain_bound(n_from: int, n_to: int, k: int, base: int) -> list[float]:
    """log2 upper bounds on ``Q(n, k)`` for ``n = n_from+1 .. n_to``.

    Iterates ``Q(n+1) <= Q(n)^(k-2) * 2^((k/2)^n)`` starting from
    ``Q(n_from, k) = base``.
    """
    if k < 3:
        raise UsageError(f"chain bound needs k >= 3, got {k}")
    if base < 1:
        raise UsageError("base count must be positive")
    out = []
    cur = math.log2(base)
    for n in range(n_from, n_to):
        cur = (k - 2) * cur + (k / 2) ** n
        out.append(cur)
    return out


def chain_bound_interval(n_from: int, n_to: int, k: int, base: int) -> list["iv.mpf"]:
    out = []
    cur = _iv_log2(base)
    for n in range(n_from, n_to):
        cur = (k - 2) * cur + (iv.mpf(k) / 2) ** n
        out.append(cur)
    return out


def q4_asymptotic_ratio_exact(n: int, count: int | None = None) -> Fraction:
    """``Q(n, 4) / (3^(n+1) * 2^(2^n + 1))`` as an exact fraction."""
    if count is None:
        from .census4 import q4_recurrence

        count = q4_recurrence(n)[-1].Q
    return Fraction(count, 3 ** (n + 1) * 2 ** (2 ** n + 1))


def q4_asymptotic_ratio(n: int) -> float:
    return float(q4_asymptotic_ratio_exact(n))


@dataclass(frozen=True)
class BoundsReport:
    n: int
    k: int
    c_k: float | None
    upper_log2: float | None
    lower_log2_exponent: int | None
    trd_lower: int | None
    trd_upper: int
    trd_method: str | None

    def to_obj(self) -> dict:
        return {
            "n": self.n, "k": self.k, "precision_bits": PRECISION_BITS,
            "c_k": self.c_k, "upper_log2": self.upper_log2,
            "lower_log2_exponent": None if self.lower_log2_exponent is None else str(self.lower_log2_exponent),
            "trd_lower": None if self.trd_lower is None else str(self.trd_lower),
            "trd_upper": str(self.trd_upper), "trd_method": self.trd_method,
        }


def bounds_report(n: int, k: int, *, cap: int = DEFAULT_MATERIALIZE_CAP) -> BoundsReport:
    ck = up = lo = None
    if k >= 5 and n >= 2:
        ck, up = c_k(k), upper_bound_log2(n, k)
        if k % 2:
            lo = lower_bound_log2(n, k)
    try:
        tb = trade_bounds(n, k, cap=cap)
        trd_lo, method = tb.lower, tb.method + ("" if tb.published else " (not a published construction)")
    except ResourceError:
        trd_lo, method = None, None
    return BoundsReport(n, k, ck, up, lo, trd_lo, k ** n // 2 ** n, method)

