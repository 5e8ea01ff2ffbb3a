import numpy as np
import pytest

from capflow.core import Dataset, TimeSeries
from capflow.datasets import example_path, load_example

_ACCEPTANCE = {}


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def example_csv():
    return example_path()


@pytest.fixture
def panel():
    return load_example()


@pytest.fixture
def monthly():
    def make(name, values, start="2005-01"):
        return TimeSeries.from_values(name, values, start)
    return make


@pytest.fixture
def record(request):
    """Store a one-line measurement for the acceptance summary."""
    def _record(message):
        _ACCEPTANCE[request.node.nodeid] = message
    return _record


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance" in report.nodeid:
        _ACCEPTANCE.setdefault(report.nodeid, "")
        _ACCEPTANCE[report.nodeid] = (report.outcome, _ACCEPTANCE[report.nodeid])


def pytest_terminal_summary(terminalreporter):
    rows = {k: v for k, v in _ACCEPTANCE.items() if isinstance(v, tuple)}
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, (outcome, message) in sorted(rows.items()):
        name = nodeid.split("::")[-1]
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}  {message}")
