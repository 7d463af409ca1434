import numpy as np
import pytest

from ghzlab import qcore


def random_pure_state(rng, num_qubits=3) -> qcore.StateVector:
    dim = 2 ** num_qubits
    raw = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return qcore.StateVector(raw / np.linalg.norm(raw))


def random_bloch_qubit(rng) -> np.ndarray:
    theta = np.arccos(rng.uniform(-1.0, 1.0))
    phi = rng.uniform(0.0, 2.0 * np.pi)
    return np.array([np.cos(theta / 2.0),
                     np.sin(theta / 2.0) * np.exp(1j * phi)])


def random_product_state(rng) -> qcore.StateVector:
    psi = np.array([1.0 + 0j])
    for _ in range(3):
        psi = np.kron(psi, random_bloch_qubit(rng))
    return qcore.StateVector(psi)


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)
