import numpy as np
import pytest

from hadamard_bc.channel import HadamardChannelSpec

S2 = np.sqrt(0.5)


@pytest.fixture
def rng():
    return np.random.default_rng(20240613)


@pytest.fixture
def basis_identical():
    """Basis POVM, both outcomes prepare |0>: unitary to Bob, constant to Charlie."""
    return HadamardChannelSpec(np.eye(2), [[1, 0], [1, 0]])


@pytest.fixture
def basis_orthonormal():
    """Basis POVM, orthonormal outputs: both receivers see the dephased input."""
    return HadamardChannelSpec(np.eye(2), np.eye(2))


@pytest.fixture
def basis_plus():
    """Basis POVM with psi^0 = |0>, psi^1 = |+>."""
    return HadamardChannelSpec(np.eye(2), [[1, 0], [S2, S2]])


_ACCEPTANCE_LINES = []


def record_acceptance(line):
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
