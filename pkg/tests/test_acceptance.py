"""Acceptance suite: one test per criterion, each at its own tolerance and time limit.

Every result line is printed and also collected for the terminal summary, so
``pytest -v`` shows all eleven pass/fail lines even without ``-s``.
"""

import pytest

from grassembed.acceptance import CRITERIA, DEFAULT_SEED, run_one

RESULT_LINES = []


@pytest.mark.parametrize("criterion", CRITERIA, ids=lambda c: f"criterion_{c.number}")
def test_criterion(criterion):
    result = run_one(criterion, DEFAULT_SEED)
    line = result.line()
    print(line)
    RESULT_LINES.append(line)
    assert result.elapsed <= criterion.limit, line
    assert result.passed, line
