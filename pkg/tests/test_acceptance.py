"""Acceptance criteria 1 to 12, one PASS/FAIL line each.

Run under pytest (lines appear in the terminal summary) or directly with
``python3 tests/test_acceptance.py``.
"""

import sys
import time

import pytest

from plancherel.cli import main
from plancherel.suites import CRITERIA, SuiteOptions, run_suite

try:
    from conftest import ACCEPTANCE_LINES
except ImportError:  # running as a script outside the tests directory
    ACCEPTANCE_LINES = []

#: Runtime budget in seconds for each criterion.
BUDGETS = {1: 10, 2: 30, 3: 10, 4: 20, 5: 10, 6: 600, 7: 60, 8: 60, 9: 600, 10: 30,
           11: 60, 12: 300}

SUITE_OF = {number: name for name, number in CRITERIA.items()}


def _record(number: int, ok: bool, text: str) -> str:
    line = f"criterion {number} {'PASS' if ok else 'FAIL'} {text}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return line


def check_criterion(number: int) -> tuple[bool, str]:
    name = SUITE_OF[number]
    result = run_suite(name, SuiteOptions(profile="full"))
    failed = [r.check for r in result.rows if not r.passed]
    ok = result.passed and result.seconds <= BUDGETS[number]
    text = f"{name} ({len(result.rows)} rows, {result.seconds:.1f}s)"
    if failed:
        text += " failed: " + ", ".join(failed[:5])
    if result.seconds > BUDGETS[number]:
        text += f" over budget {BUDGETS[number]}s"
    return ok, _record(number, ok, text)


def check_verify_all(tmp_dir) -> tuple[bool, str]:
    start = time.perf_counter()
    code = main(["verify", "all", "--profile", "quick", "--out", f"{tmp_dir}/all.json"])
    seconds = time.perf_counter() - start
    ok = code == 0 and seconds <= BUDGETS[12] and sorted(CRITERIA.values()) == list(range(1, 12))
    return ok, _record(12, ok, f"verify all quick (exit {code}, {seconds:.1f}s)")


@pytest.mark.parametrize("number", range(1, 12))
def test_criterion(number):
    ok, line = check_criterion(number)
    assert ok, line


def test_criterion_12(tmp_path):
    ok, line = check_verify_all(tmp_path)
    assert ok, line


if __name__ == "__main__":
    import tempfile

    results = [check_criterion(i)[0] for i in range(1, 12)]
    with tempfile.TemporaryDirectory() as tmp:
        results.append(check_verify_all(tmp)[0])
    sys.exit(0 if all(results) else 1)
