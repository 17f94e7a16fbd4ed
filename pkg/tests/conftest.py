import mpmath
import pytest


@pytest.fixture
def mp50():
    """mpmath at 50 digits for reference values, restored afterwards."""
    old = mpmath.mp.dps
    mpmath.mp.dps = 50
    yield mpmath.mp
    mpmath.mp.dps = old


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
