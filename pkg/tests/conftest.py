import numpy as np
import pytest

from softqc.channels import amplitude_damping, depolarizing, phase_damping
from softqc.linalg import random_density_matrix

NAMED = [depolarizing, phase_damping, amplitude_damping]


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_qubit_state(rng):
    return random_density_matrix(rng, 1)


def random_named_channel(rng):
    return NAMED[rng.integers(len(NAMED))](float(rng.uniform()))


def pytest_terminal_summary(terminalreporter):
    from .test_acceptance import RESULTS

    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
