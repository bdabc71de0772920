import numpy as np
import pytest
from hypothesis import settings

from graphkam import quadratic_family
from graphkam.corpus import two_parallel, triangle, triangle_chord

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("fast", max_examples=5, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(0)


@pytest.fixture
def parallel():
    return two_parallel()


@pytest.fixture
def free(parallel):
    return quadratic_family(parallel)


@pytest.fixture
def tri():
    return triangle()


@pytest.fixture
def chord():
    return triangle_chord()


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for n in sorted(RESULTS):
            terminalreporter.write_line(RESULTS[n])
