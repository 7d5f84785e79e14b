"""Acceptance gate: every bundled criterion must pass inside its budget.

The suite runs once per session and each criterion becomes its own test,
printing the same one-line report the CLI selftest emits.
"""

import pytest

from forcing_lab import acceptance

_RESULTS: dict | None = None


def results() -> dict:
    global _RESULTS
    if _RESULTS is None:
        _RESULTS = {r.name: r for r in acceptance.run_all()}
    return _RESULTS


@pytest.mark.parametrize("name", [name for name, _, _ in acceptance.CRITERIA])
def test_criterion(name):
    r = results()[name]
    print(r.line())
    assert r.passed, r.detail
    assert r.in_budget, f"took {r.elapsed:.2f}s, budget {r.budget}s"
