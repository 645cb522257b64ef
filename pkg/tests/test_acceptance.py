"""One test per acceptance criterion; the PASS/FAIL lines are repeated in the terminal summary."""
import pytest

from hypertile.acceptance import CRITERIA, run_one

LINES: list[str] = []


@pytest.mark.parametrize("key", [k for k, _, _ in CRITERIA], ids=[f"criterion-{k}" for k, _, _ in CRITERIA])
def test_criterion(key):
    res = run_one(key)
    print(res.line())
    LINES.append(res.line())
    assert res.passed, res.detail
