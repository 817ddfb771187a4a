import numpy as np
import pytest


def within_stderr(values, target, k=3.0):
    """True when the sample mean of ``values`` is within ``k`` stderr of ``target``."""
    v = np.asarray(values)
    se = np.sqrt(np.var(v.real, ddof=1) + np.var(v.imag, ddof=1)) / np.sqrt(len(v))
    return abs(v.mean() - target) <= k * se, v.mean(), se


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for key in sorted(results):
            terminalreporter.write_line(results[key])
