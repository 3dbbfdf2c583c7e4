"""One test per acceptance criterion; each prints a PASS/FAIL line.

Run directly with ``python3 tests/test_acceptance.py`` for the lines alone.
"""

import sys

import pytest

from fanoclass.acceptance import CRITERIA, run_criterion


@pytest.mark.parametrize("number", [n for n, _, _ in CRITERIA],
                         ids=[f"criterion_{n}" for n, _, _ in CRITERIA])
def test_criterion(number, capsys):
    result = run_criterion(number)
    with capsys.disabled():
        print("\n" + result.line())
    assert result.passed, result.detail


if __name__ == "__main__":
    results = [run_criterion(n) for n, _, _ in CRITERIA]
    for r in results:
        print(r.line())
    sys.exit(0 if all(r.passed for r in results) else 1)
