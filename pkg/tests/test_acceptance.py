"""Acceptance criteria 1-14, one test each, with stated tolerances and runtime budgets.

Run alone with ``pytest tests/test_acceptance.py -s`` or as a script:
``python tests/test_acceptance.py [--seed S] [--workers W]``.
"""
import os
import sys
import time

import pytest

from ratiokit import formula, verify
from ratiokit.haar_mc import resolve_seed

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script from elsewhere
    ACCEPTANCE_LINES = []

SEED = resolve_seed(int(os.environ["RATIOKIT_SEED"], 0) if os.environ.get("RATIOKIT_SEED") else None)

# seconds; None where no budget is stated
BUDGET = {1: 1.0, 2: 1.0, 3: 300.0, 4: 120.0, 5: 1.0, 6: None, 7: None, 8: None,
          9: 60.0, 10: 120.0, 11: None, 12: None, 13: None, 14: None}


def run_criterion(cid, seed=SEED, workers=1):
    t0 = time.perf_counter()
    res = verify.CRITERIA[str(cid)](seed, workers)
    elapsed = time.perf_counter() - t0
    budget = BUDGET[cid]
    timing_ok = budget is None or elapsed < budget
    line = f"{res.line()}  [{elapsed:.2f}s" + (f" / budget {budget:g}s]" if budget else "]")
    return res, elapsed, timing_ok, line


@pytest.mark.parametrize("cid", range(1, 15))
def test_criterion(cid):
    res, elapsed, timing_ok, line = run_criterion(cid)
    print(line)
    ACCEPTANCE_LINES.append(line)
    assert res.passed, line
    assert timing_ok, line


def test_golden_eval_under_one_millisecond():
    formula.eval_thm1(verify.GOLDEN)
    best = min(_timed(lambda: formula.eval_thm1(verify.GOLDEN)) for _ in range(20))
    assert best < 1e-3


def _timed(fn):
    t0 = time.perf_counter()
    fn()
    return time.perf_counter() - t0


def main(argv=None):
    import argparse
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=lambda s: int(s, 0), default=SEED)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args(argv)
    ok = True
    for cid in range(1, 15):
        res, _, timing_ok, line = run_criterion(cid, args.seed, args.workers)
        print(line, flush=True)
        ok &= res.passed and timing_ok
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
