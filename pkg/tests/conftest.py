import pytest

from cmrt import bounds
from cmrt._accel import HAS_NUMBA

BACKENDS = ["numpy"] + (["numba"] if HAS_NUMBA else [])


@pytest.fixture(scope="session")
def bundled_table():
    return bounds.load_table()


@pytest.fixture(scope="session")
def maxtable():
    return bounds.load_maxtable()


@pytest.fixture(params=BACKENDS)
def backend(request):
    return request.param


def pytest_terminal_summary(terminalreporter):
    """One PASS/FAIL line per acceptance criterion."""
    lines = []
    for outcome in ("passed", "failed", "error"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", "call") != "call" and outcome != "error":
                continue
            if "test_acceptance.py::" not in rep.nodeid:
                continue
            label = dict(rep.user_properties).get("criterion")
            if label:
                lines.append((label, "PASS" if outcome == "passed" else "FAIL"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for label, status in sorted(lines, key=lambda x: int(x[0].split()[0][2:])):
            terminalreporter.write_line(f"{status}  {label}")
