import os
from pathlib import Path

import pytest

from tparwr import load_edge_list

ROOT = Path(__file__).resolve().parents[1]
SLASHDOT_CANDIDATES = [
    ROOT / "data" / "soc-sign-Slashdot090221.txt.gz",
    ROOT / "data" / "soc-sign-Slashdot090221.txt",
    ROOT / "data" / "slashdot.txt",
]

_results = {}


def slashdot_path():
    env = os.environ.get("TPARWR_SLASHDOT")
    if env:
        return Path(env)
    for p in SLASHDOT_CANDIDATES:
        if p.exists():
            return p
    return None


@pytest.fixture(scope="session")
def slashdot():
    path = slashdot_path()
    if path is None or not path.exists():
        pytest.fail("Slashdot edge list not found: set TPARWR_SLASHDOT or place "
                    "soc-sign-Slashdot090221.txt(.gz) under data/ (82,144 nodes, 549,202 edges)",
                    pytrace=False)
    g, ids = load_edge_list(path)
    return g


def pytest_runtest_logreport(report):
    number = getattr(report, "_acceptance_number", None)
    if number is None:
        return
    outcome = _results.get(number)
    if report.failed:
        _results[number] = ("FAIL", report.nodeid)
    elif report.when == "call" and outcome is None:
        _results[number] = ("PASS" if report.passed else "SKIP", report.nodeid)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("acceptance")
    if mark is not None:
        report._acceptance_number = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_results):
        status, nodeid = _results[number]
        terminalreporter.write_line(f"criterion {number:2d}: {status}  {nodeid.split('::')[-1]}")
