import numpy as np
import pytest

from qrecur import Hamiltonian, validate_density


def random_state(n, seed):
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    return validate_density(m / m.trace().real)


def random_system(n, seed):
    rng = np.random.default_rng(seed)
    return Hamiltonian(np.sort(rng.uniform(0.0, 1.0, size=n))), random_state(n, seed + 1)


@pytest.fixture
def qubit_superposition():
    from qrecur import pure_state
    from qrecur.states import qubit_hamiltonian

    return qubit_hamiltonian(1.0), pure_state(np.array([1.0, 1.0]) / np.sqrt(2.0))
