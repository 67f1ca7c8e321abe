import functools

import numpy as np
import pytest

SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
I2 = np.eye(2, dtype=complex)


def site_op(op, site, n):
    """Single-site operator on a 1-based site via explicit Kronecker products."""
    return functools.reduce(np.kron, [op if s == site else I2 for s in range(1, n + 1)])


def kron_hamiltonian(model, n, periodic=True):
    """Independent dense construction of the ring Hamiltonian (J = 1)."""
    axes = (SX, SY, SZ) if model == "heisenberg" else (SX, SY)
    bonds = [(i, i + 1) for i in range(1, n)] + ([(n, 1)] if periodic else [])
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for i, j in bonds:
        for p in axes:
            h += site_op(p, i, n) @ site_op(p, j, n)
    return h


def random_state(n, rng):
    z = rng.standard_normal(2 ** n) + 1j * rng.standard_normal(2 ** n)
    return z / np.linalg.norm(z)


def random_density(n, rng, rank=None):
    d = 2 ** n
    rank = rank or d
    g = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# ----------------------------------------------------- acceptance reporting

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
