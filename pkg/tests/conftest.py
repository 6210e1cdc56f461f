import math

import numpy as np
import pytest

from trapent.pipeline import analyze

SQRT2 = math.sqrt(2.0)

_CACHE: dict = {}


def cached_analysis(g: float):
    if g not in _CACHE:
        _CACHE[g] = analyze(g)
    return _CACHE[g]


@pytest.fixture(scope="session")
def free():
    return cached_analysis(0.0)


@pytest.fixture(scope="session")
def taut():
    return cached_analysis(SQRT2)


@pytest.fixture(scope="session")
def mid():
    return cached_analysis(5.0)


@pytest.fixture(scope="session")
def strong():
    return cached_analysis(20.0)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
