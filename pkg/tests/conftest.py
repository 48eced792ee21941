import numpy as np
import pytest

from stochpp import RngStream
from stochpp.models import GmmData


@pytest.fixture
def rng():
    return RngStream(20240607)


def synthetic_gmm(n=200, seed=2024, mus=(-2.0, 2.0), sigma=0.5):
    r = RngStream(seed)
    comp = r.choice_index(len(mus), n)
    data = np.asarray(mus)[comp] + sigma * r.standard_normal(n)
    return GmmData(data, len(mus))


@pytest.fixture
def gmm_small():
    return synthetic_gmm(n=6, seed=7)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
