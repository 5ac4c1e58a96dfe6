import numpy as np
import pytest

from looprate import families


@pytest.fixture
def k3():
    return families.triangle()


@pytest.fixture
def c4():
    return families.cycle(4)


def random_graph(seed, n_max=6, **kw):
    rng = np.random.default_rng(seed)
    return families.random_connected(rng, int(rng.integers(2, n_max + 1)), **kw)


_CRITERIA = []


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion; echoed in the summary."""
    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'} criterion {label}: {detail}"
        _CRITERIA.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
