import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

_ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


@pytest.fixture
def record_criterion():
    """Store one acceptance outcome; the terminal summary prints them all."""

    def _record(number, title, passed, detail=""):
        _ACCEPTANCE[number] = (title, bool(passed), detail)
        print(f"[criterion {number}] {'PASS' if passed else 'FAIL'}: {title} {detail}")

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        title, passed, detail = _ACCEPTANCE[number]
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'} {number:>2}  {title}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def diabetes_csv():
    path = os.environ.get("HSGIBBS_DIABETES_CSV")
    if not path or not os.path.exists(path):
        pytest.skip("set HSGIBBS_DIABETES_CSV to the diabetes CSV to run this check")
    return path
