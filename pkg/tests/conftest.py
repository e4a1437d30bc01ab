import time
from fractions import Fraction

import pytest

from wallforge.chern import ChernChar

SUITE_BUDGET_SECONDS = 60.0
_results = pytest.StashKey[dict]()
_started = pytest.StashKey[float]()


@pytest.fixture
def v5():
    return ChernChar(0, 5, Fraction(-15, 2))


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")
    config.stash[_results] = {}
    config.stash[_started] = time.perf_counter()


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is None:
        return
    number, title = marker.args
    results = item.config.stash[_results]
    if report.when == "setup" and not report.passed:
        results[number] = (title, False)
    elif report.when == "call":
        results[number] = (title, report.passed)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    results = config.stash[_results]
    if not results:
        return
    elapsed = time.perf_counter() - config.stash[_started]
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        title, ok = results[number]
        if number == 12:
            within = elapsed < SUITE_BUDGET_SECONDS
            title = f"{title} (suite took {elapsed:.1f} s)"
            ok = ok and within
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {number:2d} {title}")
