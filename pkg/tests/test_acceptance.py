"""Acceptance suite: one PASS/FAIL line per criterion at its stated tolerance.

Run with ``pytest -s tests/test_acceptance.py`` to see the lines; each
criterion is also a separate test, so a failing criterion fails visibly.
"""

import pytest

from hulthen_monopole.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=lambda n: f"criterion{n}")
def test_criterion(number):
    result = run_criterion(number)
    print(result.line())
    for detail in result.details:
        print(f"    {detail}")
    assert result.passed, result.line()
