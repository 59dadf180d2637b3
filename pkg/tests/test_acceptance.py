"""Every acceptance criterion at its stated tolerance and time budget.

A one-line PASS/FAIL summary per criterion is printed at the end of the run.
"""

from __future__ import annotations

import pytest

from ietmorph.acceptance import CRITERIA, run_criterion

# sub-millisecond budgets measure steady-state calls, so warm those up once
WARM_UP = {2, 9}


@pytest.mark.parametrize("number", [c[0] for c in CRITERIA], ids=[f"c{c[0]:02d}-{c[1].replace(' ', '-')}" for c in CRITERIA])
def test_criterion(number, acceptance_log):
    if number in WARM_UP:
        run_criterion(number)
    result = run_criterion(number)
    acceptance_log.append(result.line())
    print(result.line())
    assert result.passed, result.detail
    assert result.in_budget, f"took {result.seconds:.3g}s, budget {result.budget:g}s"
