import numpy as np
import pytest

from retrench import make_params
from retrench.simulate import GridSpec

ACCEPTANCE_LINES: list[str] = []


def sweep_param_sets(n: int = 100, seed: int = 20240611):
    """Randomised (V, T_stop, N) with V in [1, 50], T_stop in [1, 12], N in [1, 64]."""
    rng = np.random.default_rng(seed)
    V = rng.uniform(1.0, 50.0, n)
    T_stop = rng.uniform(1.0, 12.0, n)
    N = rng.integers(1, 65, n)
    return [make_params(float(v), float(t), int(k)) for v, t, k in zip(V, T_stop, N)]


@pytest.fixture(scope="session")
def canonical():
    return make_params(20.0, 10.0, 10)


@pytest.fixture(scope="session")
def grid():
    return GridSpec(100)


@pytest.fixture(scope="session")
def sweep_sets():
    return sweep_param_sets()


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
