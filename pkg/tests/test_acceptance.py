"""Acceptance suite: one test per criterion, printing a pass/fail line.

Criteria with a stated runtime limit assert it (limits are generous at
desk scale).  The determinism criterion additionally replays the CLI in a
subprocess and compares raw bytes.
"""

import json
import subprocess
import sys
import time

import pytest

from ltcforge.acceptance import CRITERIA, NU_9
from ltcforge.algebra import DEFAULT_BUDGET

SEED = 0

# per-criterion wall-clock limits in seconds, where stated
LIMITS = {1: 4.0, 2: 60.0, 3: 5.0, 4: 1.0, 5: 5.0, 6: 120.0, 8: 1.0, 9: 1.0, 13: 600.0}


@pytest.mark.parametrize("cid,name,fn", CRITERIA, ids=[f"{c:02d}-{n}" for c, n, _ in CRITERIA])
def test_criterion(cid, name, fn):
    start = time.monotonic()
    result = fn(DEFAULT_BUDGET, SEED)
    elapsed = time.monotonic() - start
    status = result["status"]
    print(f"criterion {cid:2d} [{name}]: {status.upper()} ({elapsed:.2f}s)")
    assert status == "pass", result
    if cid in LIMITS:
        assert elapsed < LIMITS[cid], f"criterion {cid} took {elapsed:.2f}s"


def test_nu9_regression_constant():
    # frozen from an independent direct-definition scan of all 3^9 words
    from fractions import Fraction

    assert NU_9 == Fraction(2, 3)


def test_verify_all_cli_byte_identical():
    argv = [
        sys.executable,
        "-m",
        "ltcforge.cli",
        "verify",
        "all",
        "--only",
        "1,3,4,5,9,14",
        "--seed",
        "0",
    ]
    first = subprocess.run(argv, capture_output=True)
    second = subprocess.run(argv, capture_output=True)
    assert first.returncode == 0 and second.returncode == 0
    assert first.stdout == second.stdout
    doc = json.loads(first.stdout)
    assert doc["overall"] == "pass"
