import numpy as np
import pytest

from variance_vqe.pauli import PauliSum

# N=3, V/eps=0.5, W=0 quasispin matrix as printed (3 decimals)
PRINTED_MATRIX = np.array(
    [
        [-1.5, 0, -0.866, 0],
        [0, -0.5, 0, -0.866],
        [-0.866, 0, 0.5, 0],
        [0, -0.866, 0, 1.5],
    ]
)
PRINTED_PAULI = PauliSum([(-1.0, "ZI"), (-0.5, "IZ"), (-0.866, "XI")])
PRINTED_EXACT = (-1.823, -0.823, 0.823, 1.823)
COUPLING = np.sqrt(3) / 2


@pytest.fixture
def printed_matrix():
    return PRINTED_MATRIX.copy()


@pytest.fixture
def printed_pauli():
    return PRINTED_PAULI


@pytest.fixture
def exact_pauli():
    return PauliSum([(-1.0, "ZI"), (-0.5, "IZ"), (-COUPLING, "XI")])


_ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance_log():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
