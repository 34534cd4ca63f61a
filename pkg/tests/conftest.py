import numpy as np
import pytest

from pimtc import kernels
from pimtc.graph_io import preprocess


def random_graph(n, p, seed):
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    keep = rng.random(len(iu)) < p
    return preprocess(np.column_stack([iu[keep], ju[keep]]), seed)


@pytest.fixture(params=sorted(kernels.available_backends()))
def backend(request):
    return request.param


@pytest.fixture
def k4():
    return np.array([(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)], dtype=np.int64)


_VERDICTS = []


@pytest.fixture
def verdict():
    """Record a one-line pass/fail for the terminal summary and echo it."""
    def record(label, ok, detail=""):
        line = f"{'PASS' if ok else 'FAIL'}  {label}" + (f"  ({detail})" if detail else "")
        _VERDICTS.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in _VERDICTS:
            terminalreporter.write_line(line)
