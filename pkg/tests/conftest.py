import pytest

from goodarm.core import BanditInstance

ACCEPTANCE_LINES = []


@pytest.fixture
def synthetic():
    return BanditInstance((0.007, 0.006, 0.005, 0.003, 0.002, 0.001), 0.004, "synthetic")


@pytest.fixture
def easy():
    return BanditInstance((0.9, 0.8, 0.2, 0.1), 0.5, "easy")


@pytest.fixture
def report():
    """Record a one-line verdict for an acceptance criterion; printed at session end."""

    def _report(number, title, passed, detail=""):
        ACCEPTANCE_LINES.append((number, title, bool(passed), detail))
        return passed

    return _report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, passed, detail in sorted(ACCEPTANCE_LINES, key=lambda x: x[0]):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"[{verdict}] {number}. {title}: {detail}")
