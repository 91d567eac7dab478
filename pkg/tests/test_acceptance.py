"""Exit criteria, one test per criterion; each prints its PASS/FAIL line (run with ``-s`` to see them)."""
import pytest

from jcrevival.acceptance import CHECKS


@pytest.mark.slow
@pytest.mark.parametrize("check", CHECKS, ids=[c.__name__.removeprefix("check_") for c in CHECKS])
def test_criterion(check):
    result = check()
    print(result.line())
    assert result.passed, result.line()
