"""Acceptance criteria, one test per criterion at its stated tolerance.

Each test prints a single [PASS]/[FAIL] line with its runtime, followed by the
metrics the verdict was based on.  Run with ``pytest tests/test_acceptance.py -v``.
"""
import json

import pytest

from hml.checks import CHECKS


@pytest.mark.slow
@pytest.mark.parametrize("criterion", sorted(CHECKS), ids=lambda c: f"criterion_{c:02d}")
def test_criterion(criterion, capsys):
    res = CHECKS[criterion]()
    with capsys.disabled():
        print()
        print(res.line())
        print("    " + json.dumps(res.metrics, default=str))
    assert res.passed, f"{res.name}: {res.metrics}"
