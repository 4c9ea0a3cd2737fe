import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_state
from qrecur import (
    DistanceSample,
    Hamiltonian,
    bures_distance,
    distance_sample,
    energy_stats,
    evolve,
    fidelity,
    fvg_check,
    hs_norm,
    make_kernel,
    pure_state,
    trace_distance_norm,
    validate_density,
)
from qrecur.errors import DimensionMismatch
from qrecur.metrics import sqrtm_psd


def basis(i):
    v = np.zeros(2)
    v[i] = 1.0
    return pure_state(v)


class TestFidelity:
    def test_identical_states(self):
        rho = random_state(3, 0)
        assert fidelity(rho, rho) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_pure_states(self):
        assert fidelity(basis(0), basis(1)) == pytest.approx(0.0, abs=1e-12)

    def test_qubit_overlap_closed_form(self):
        # equal superposition under E=(0, omega): F = |cos(omega t / 2)|
        omega = 1.3
        H = Hamiltonian(np.array([0.0, omega]))
        rho0 = pure_state(np.array([1.0, 1.0]) / np.sqrt(2.0))
        k = make_kernel(H, rho0)
        for t in (0.3, 1.0, 2.5, 4.0):
            expected = abs(math.cos(omega * t / 2.0))
            assert fidelity(rho0, evolve(k, t)) == pytest.approx(expected, abs=1e-12)

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            fidelity(random_state(2, 0), random_state(3, 0))

    def test_symmetric(self):
        a, b = random_state(4, 1), random_state(4, 2)
        assert fidelity(a, b) == pytest.approx(fidelity(b, a), abs=1e-12)


class TestBures:
    def test_identical(self):
        rho = random_state(3, 3)
        assert bures_distance(rho, rho) == pytest.approx(0.0, abs=1e-6)

    def test_half_fidelity_pair(self):
        # pure states with overlap 1/2: F = 1/sqrt(2)... use mixed construction
        # instead: F = 0.5 gives bures = sqrt(2 - 1) = 1
        rho = basis(0)
        sigma = pure_state(np.array([0.5, math.sqrt(0.75)]))
        assert fidelity(rho, sigma) == pytest.approx(0.5, abs=1e-12)
        assert bures_distance(rho, sigma) == pytest.approx(1.0, abs=1e-12)

    def test_orthogonal_maximum(self):
        assert bures_distance(basis(0), basis(1)) == pytest.approx(math.sqrt(2.0))


class TestTraceDistance:
    def test_identical(self):
        rho = random_state(3, 4)
        assert trace_distance_norm(rho, rho) == 0.0

    def test_orthogonal_pure_states(self):
        assert trace_distance_norm(basis(0), basis(1)) == pytest.approx(2.0)

    def test_diagonal_pair(self):
        a = validate_density(np.diag([0.7, 0.3]).astype(complex))
        b = validate_density(np.diag([0.3, 0.7]).astype(complex))
        assert trace_distance_norm(a, b) == pytest.approx(0.8, abs=1e-12)


class TestHsNorm:
    def test_zero(self):
        assert hs_norm(np.zeros((3, 3))) == 0.0

    def test_identity(self):
        assert hs_norm(np.eye(2)) == pytest.approx(math.sqrt(2.0))

    def test_pauli_x(self):
        assert hs_norm([[0.0, 1.0], [1.0, 0.0]]) == pytest.approx(math.sqrt(2.0))


class TestEnergyStats:
    def test_equal_superposition(self):
        omega = 2.0
        H = Hamiltonian(np.array([0.0, omega]))
        rho0 = pure_state(np.array([1.0, 1.0]) / np.sqrt(2.0))
        mean, de = energy_stats(H, rho0)
        assert mean == pytest.approx(omega / 2.0)
        assert de == pytest.approx(omega / 2.0)

    def test_maximally_mixed(self):
        H = Hamiltonian(np.array([0.0, 1.0]))
        mean, de = energy_stats(H, validate_density(np.eye(2) / 2.0))
        assert (mean, de) == (pytest.approx(0.5), pytest.approx(0.5))

    def test_basis_state_has_zero_uncertainty(self):
        H = Hamiltonian(np.array([0.0, 1.0]))
        assert energy_stats(H, basis(1)) == (pytest.approx(1.0), pytest.approx(0.0))


class TestFvg:
    def test_identical(self):
        rho = random_state(3, 5)
        assert fvg_check(rho, rho) == (True, True)

    def test_orthogonal_pure(self):
        assert fvg_check(basis(0), basis(1)) == (True, True)

    @settings(max_examples=40, deadline=None)
    @given(n=st.integers(2, 4), seed=st.integers(0, 2000))
    def test_random_pairs(self, n, seed):
        assert fvg_check(random_state(n, seed), random_state(n, seed + 10000)) == (
            True,
            True,
        )


class TestDistanceSample:
    def test_consistency_enforced(self):
        with pytest.raises(ValueError):
            DistanceSample(t=0.0, fidelity=1.0, bures=0.5, trace_dist=0.0, hs_dist=0.0)

    def test_helper_builds_consistent_record(self):
        a, b = random_state(3, 6), random_state(3, 7)
        s = distance_sample(1.5, b, a)
        assert s.t == 1.5
        assert s.bures == pytest.approx(math.sqrt(2.0 - 2.0 * s.fidelity), abs=1e-12)
        assert s.torus_dist is None


def test_sqrtm_psd_squares_back():
    rho = random_state(4, 8)
    a = sqrtm_psd(rho.matrix)
    assert np.allclose(a @ a, rho.matrix, atol=1e-12)
    assert np.abs(a - a.conj().T).max() <= 1e-12
