import pytest

from bkscheck.bks import get_entry

_acceptance: list[tuple[str, str]] = []


@pytest.fixture
def cabello14():
    return get_entry("cabello14").system


@pytest.fixture
def singlet5():
    return get_entry("singlet5").system


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py::" in report.nodeid:
        _acceptance.append((report.nodeid.split("::")[-1], report.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name, outcome in _acceptance:
        terminalreporter.write_line(f"{'PASS' if outcome == 'passed' else 'FAIL'}  {name}")
