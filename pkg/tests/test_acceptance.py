"""Acceptance gate: every criterion runs here, one report line each."""

import pytest

from critdens import acceptance


@pytest.mark.parametrize(
    "index", range(1, len(acceptance.CRITERIA) + 1),
    ids=[name for name, _ in acceptance.CRITERIA])
def test_criterion(index, capsys):
    result = acceptance.run_criterion(index)
    status = "PASS" if result.passed else "FAIL"
    with capsys.disabled():
        print(f"\ncriterion {result.index:2d} [{status}] "
              f"({result.seconds:6.2f}s) {result.name}: {result.detail}")
    assert result.passed, f"criterion {index} failed: {result.detail}"
