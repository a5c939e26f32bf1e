import numpy as np
import pytest

from psinv.precision import extended


@pytest.fixture(scope="session")
def x100():
    """The 100-digit oracle context."""
    return extended(100)


@pytest.fixture
def rng():
    return np.random.Generator(np.random.PCG64(20240601))



def pytest_terminal_summary(terminalreporter):
    """Print the one-line-per-criterion acceptance results after the run."""
    import sys
    mod = next((m for name, m in list(sys.modules.items())
                if name.endswith("test_acceptance") and hasattr(m, "RESULTS")), None)
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        ok, detail = mod.RESULTS[n]
        terminalreporter.write_line(f"criterion {n:2d}: {'PASS' if ok else 'FAIL'}  {detail}")
