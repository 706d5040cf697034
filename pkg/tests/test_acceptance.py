# The acceptance battery as a test module: one test per criterion, each
# printing its pass/fail line.  All tolerances are exact equalities; the only
# statistical thresholds are the >= 95% genericity fractions inside C12, as
# stated.  The twenty (5,2) chain tensors are shared across criteria.

import time

import pytest

from instantons.fields import GF32003
from instantons.suite import CRITERIA, SuiteContext


@pytest.fixture(scope="module")
def ctx():
    return SuiteContext(GF32003, chain_count=20)


@pytest.mark.parametrize("cid,tag,desc,fn", CRITERIA, ids=[c[0] for c in CRITERIA])
def test_criterion(ctx, cid, tag, desc, fn):
    t0 = time.time()
    passed, details = fn(ctx)
    line = f"{cid:<4} {tag:<16} {'PASS' if passed else 'FAIL'} ({time.time() - t0:.1f}s) {desc}"
    print(line)
    assert passed, f"{cid} failed: {details}"
