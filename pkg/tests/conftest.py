import time

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "properties",
    max_examples=1000,
    deadline=None,
    derandomize=True,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("properties")

# one line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES = []


@pytest.fixture(scope="session")
def timed_report():
    from cfspectra.certify import run_catalog

    start = time.perf_counter()
    rep = run_catalog()
    return rep, time.perf_counter() - start


@pytest.fixture(scope="session")
def full_report(timed_report):
    return timed_report[0]


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
