import pytest

from hompulse.cli import execute_scan
from hompulse.scenarios import SCENARIOS, named_scenario

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def scenario_scans():
    """The six named scenarios at their defaults (seed 42, 10^5 trials per point)."""
    return {name: (named_scenario(name), *execute_scan(named_scenario(name), threads=8))
            for name in SCENARIOS if name != "custom"}


@pytest.fixture
def report():
    def record(criterion: str, passed: bool, detail: str):
        line = f"{'PASS' if passed else 'FAIL'}  criterion {criterion}: {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert passed, line

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
