import numpy as np
import pytest

from qslbound import ModelParams

REGIMES = [0.1, 1.0, 5.0]


@pytest.fixture
def rng():
    return np.random.default_rng(20260418)


@pytest.fixture(params=REGIMES, ids=["weak", "intermediate", "strong"])
def eta(request):
    return request.param


@pytest.fixture
def weak():
    return ModelParams(eta=0.1, n_max=0)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
