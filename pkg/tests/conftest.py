import sys
import time

import pytest

from helpers import load

_START = time.monotonic()
SUITE_LIMIT_S = 180.0


@pytest.fixture
def program():
    return load


def _results():
    return getattr(sys.modules.get("test_acceptance"), "RESULTS", None)


@pytest.hookimpl(tryfirst=True)
def pytest_sessionfinish(session, exitstatus):
    results = _results()
    if not results:
        return
    elapsed = time.monotonic() - _START
    ok = elapsed < SUITE_LIMIT_S
    results[8] = (ok, f"whole suite in {elapsed:.1f} s (limit {SUITE_LIMIT_S:.0f} s)")
    if not ok and session.exitstatus == 0:
        session.exitstatus = pytest.ExitCode.TESTS_FAILED


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = _results()
    if not results:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for n in sorted(results):
        passed, detail = results[n]
        tr.write_line(f"criterion {n}: {'PASS' if passed else 'FAIL'} - {detail}")
