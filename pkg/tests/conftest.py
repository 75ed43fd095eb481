import numpy as np
import pytest

ACCEPTANCE_LINES = []


def random_matrix(rng, n=4, scale=1.0):
    return scale * (rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n)))


def random_hermitian(rng, n=4, scale=1.0):
    a = random_matrix(rng, n, scale)
    return 0.5 * (a + a.conj().T)


def random_density(rng, n=4, rank=None):
    rank = rank or n
    a = random_matrix(rng, n)[:, :rank]
    rho = a @ a.conj().T
    return rho / np.trace(rho)


@pytest.fixture
def rng():
    return np.random.default_rng(20201015)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
