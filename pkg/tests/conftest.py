import numpy as np
import pytest

from disentangle.experiments import spectral_table
from disentangle.params import RunConfig


@pytest.fixture(scope="session")
def config():
    return RunConfig()


@pytest.fixture(scope="session")
def tables(config):
    """Spectral tables at the distances used across the suite (memoized per d)."""
    return lambda d: spectral_table(config, d)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


# criterion number -> (passed, detail); filled by test_acceptance.py
ACCEPTANCE = {}
ACCEPTANCE_COUNT = 12


@pytest.fixture
def verdict():
    """Record one acceptance criterion, then assert it."""
    def record(number, checks, detail=""):
        failed = [name for name, ok in checks.items() if not ok]
        ACCEPTANCE[number] = (not failed, detail + (f" | failed: {', '.join(failed)}" if failed else ""))
        assert not failed, f"criterion {number}: {ACCEPTANCE[number][1]}"
    return record


def pytest_terminal_summary(terminalreporter):
    if not any("test_acceptance" in str(r.nodeid) for rs in terminalreporter.stats.values()
               for r in rs if hasattr(r, "nodeid")):
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, ACCEPTANCE_COUNT + 1):
        passed, detail = ACCEPTANCE.get(n, (False, "did not complete"))
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
