"""Acceptance criteria 1-12, one printed pass/fail line per criterion."""
import time

import pytest

from nquasi import verify
from nquasi.config import RunConfig

# (criterion, check group, runtime limit in seconds)
CRITERIA = [
    (1, "recurrence", 1.0),
    (2, "enumeration", 30.0),
    (3, "loop_factor", 30.0),
    (4, "census", 300.0),
    (5, "semilinear", 60.0),
    (6, "psi", 5.0),
    (7, "lower_witness", 120.0),
    (8, "even_trades", 60.0),
    (9, "extensions", 120.0),
    (10, "sandwich", 60.0),
    (11, "asymptotics", 1.0),
    (12, "properties", 120.0),
]


@pytest.fixture(scope="module")
def ctx():
    return verify.Context(RunConfig(workers=1), None, set())


@pytest.mark.parametrize("num,group,limit", CRITERIA, ids=[f"criterion_{c[0]:02d}_{c[1]}" for c in CRITERIA])
def test_criterion(ctx, num, group, limit, capsys):
    fn = dict(verify.CHECKS)[group]
    start = time.perf_counter()
    results = list(fn(ctx))
    elapsed = time.perf_counter() - start
    failed = [r for r in results if not r.passed]
    ok = bool(results) and not failed and elapsed < limit
    with capsys.disabled():
        print(f"\ncriterion {num:2d} ({group}): {'PASS' if ok else 'FAIL'} "
              f"[{len(results) - len(failed)}/{len(results)} checks, {elapsed:.1f}s, limit {limit:.0f}s]")
        for r in failed:
            print("   " + r.line())
    assert results
    assert not failed, [r.line() for r in failed]
    assert elapsed < limit
