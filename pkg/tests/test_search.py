import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_state, random_system
from qrecur import (
    Grid,
    Hamiltonian,
    bures_distance,
    default_dt,
    energy_bounds,
    evolve,
    fidelity_series,
    find_recurrence,
    make_kernel,
    pure_state,
    stroboscopic_recurrence,
    torus_surrogate_scan,
    validate_density,
)
from qrecur.bounds import dimension_bound, threshold_to_epsilon, EPS_BURES_SCALE
from qrecur.errors import BadParameter, GridTooCoarse


def qubit():
    return (
        Hamiltonian(np.array([0.0, 1.0])),
        pure_state(np.array([1.0, 1.0]) / np.sqrt(2.0)),
    )


class TestGrid:
    def test_times(self):
        g = Grid(1.0, 0.5, 3)
        assert np.allclose(g.times(), [1.0, 1.5, 2.0])

    def test_bad_grid(self):
        with pytest.raises(BadParameter):
            Grid(0.0, 0.0, 10)
        with pytest.raises(BadParameter):
            Grid(0.0, 0.1, 0)


class TestDefaultDt:
    def test_quarter_period_of_fastest_line(self):
        H = Hamiltonian(np.array([0.0, 1.0, 5.0]))
        assert default_dt(H) == pytest.approx(math.pi / 20.0)

    def test_hbar_scaling(self):
        H = Hamiltonian(np.array([0.0, 2.0]), hbar=3.0)
        assert default_dt(H) == pytest.approx(3.0 * math.pi / 8.0)


class TestFidelitySeries:
    def test_matches_qubit_closed_form(self):
        H, rho0 = qubit()
        k = make_kernel(H, rho0)
        ts = np.linspace(0.0, 10.0, 101)
        f = fidelity_series(k, ts)
        assert np.allclose(f, np.abs(np.cos(ts / 2.0)), atol=1e-12)

    def test_chunking_consistency(self):
        H, rho0 = random_system(3, 0)
        k = make_kernel(H, rho0)
        ts = np.linspace(0.0, 20.0, 500)
        whole = fidelity_series(k, ts)
        parts = np.concatenate([fidelity_series(k, ts[:123]), fidelity_series(k, ts[123:])])
        assert np.array_equal(whole, parts)


class TestFindRecurrence:
    def test_qubit_period(self):
        H, rho0 = qubit()
        dt = default_dt(H)
        grid = Grid(0.0, dt, math.ceil(7.0 / dt))
        res = find_recurrence(H, rho0, 0.999, grid)
        assert res.t_departure is not None
        assert abs(res.t_rec - 2.0 * math.pi) <= dt
        assert not res.stationary

    def test_qubit_bracket_check(self):
        H, rho0 = qubit()
        eps = threshold_to_epsilon(0.999, EPS_BURES_SCALE)
        report = energy_bounds(H, rho0, eps)
        dt = default_dt(H)
        grid = Grid(0.0, dt, math.ceil(7.0 / dt))
        res = find_recurrence(H, rho0, 0.999, grid, report=report)
        assert res.bracket_check["lower_ok"] and res.bracket_check["upper_ok"]
        assert report.lower_mt == pytest.approx(2.0 * eps, rel=1e-12)
        assert report.upper_product == pytest.approx(4.0 * math.pi**2 / eps, rel=1e-12)

    def test_stationary_state(self):
        H = Hamiltonian(np.array([0.0, 1.0]))
        rho0 = validate_density(np.diag([0.6, 0.4]).astype(complex))
        res = find_recurrence(H, rho0, 0.999, Grid(0.0, default_dt(H), 1000))
        assert res.stationary
        assert res.t_departure is None and res.t_rec is None

    def test_commensurate_three_level(self):
        H = Hamiltonian(np.array([0.0, 1.0, 2.0]))
        rho0 = random_state(3, 3)
        dt = default_dt(H)
        grid = Grid(0.0, dt, math.ceil(7.0 / dt))
        res = find_recurrence(H, rho0, 0.999, grid)
        assert res.t_rec is not None
        assert res.t_rec <= 2.0 * math.pi + dt

    def test_coarse_grid_refused(self):
        H, rho0 = qubit()
        coarse = Grid(0.0, 10.0 * default_dt(H), 100)
        with pytest.raises(GridTooCoarse):
            find_recurrence(H, rho0, 0.999, coarse)
        res = find_recurrence(H, rho0, 0.999, coarse, allow_coarse=True)
        assert res.threshold == 0.999

    def test_refinement_tightens_qubit(self):
        H, rho0 = qubit()
        dt = default_dt(H)
        grid = Grid(0.0, dt, math.ceil(7.0 / dt))
        res = find_recurrence(H, rho0, 0.999, grid, refine=True)
        # F = |cos(t/2)| crosses 0.999 just before 2 pi; bisection should
        # land within dt/2^10 of the true crossing
        true_cross = 2.0 * math.pi - 2.0 * math.acos(0.999)
        assert res.refined
        assert abs(res.t_rec - true_cross) <= dt / 2.0**9

    def test_record_samples(self):
        H, rho0 = qubit()
        grid = Grid(0.0, default_dt(H), 50)
        res = find_recurrence(H, rho0, 0.999, grid, record_samples=True)
        assert len(res.samples) == 50
        s = res.samples[0]
        assert s.fidelity == pytest.approx(1.0, abs=1e-12)
        assert s.torus_dist is not None

    def test_bad_threshold(self):
        H, rho0 = qubit()
        with pytest.raises(BadParameter):
            find_recurrence(H, rho0, 1.0, Grid(0.0, 0.1, 10))

    def test_to_dict_records_definition(self):
        H, rho0 = qubit()
        res = find_recurrence(H, rho0, 0.999, Grid(0.0, default_dt(H), 10))
        d = res.to_dict()
        assert "departure" in d["definition"]
        assert d["grid"]["steps"] == 10


class TestStroboscopic:
    def test_exact_period_gives_one(self):
        H, rho0 = qubit()
        res = stroboscopic_recurrence(H, rho0, 0.9, 2.0 * math.pi)
        assert res.j_found == 1
        assert not res.cap_exceeded

    def test_immediate_return_for_low_floor(self):
        H, rho0 = qubit()
        # at t = 0.01 the fidelity is still almost 1, so j = 1 suffices
        res = stroboscopic_recurrence(H, rho0, 0.5, 0.01)
        assert res.j_found == 1

    def test_irrational_step_found_below_theory(self):
        H, rho0 = Hamiltonian(np.array([0.0, 1.0])), random_state(2, 11)
        res = stroboscopic_recurrence(H, rho0, 0.5, math.sqrt(2.0))
        jmax, _ = dimension_bound(2, 0.5)
        assert res.j_found is not None
        assert res.j_found <= jmax

    def test_cap_reported(self):
        H, rho0 = Hamiltonian(np.array([0.0, 1.0])), random_state(2, 12)
        res = stroboscopic_recurrence(H, rho0, 0.9, math.sqrt(2.0), jmax_cap=500)
        jmax, _ = dimension_bound(2, 0.9)
        assert res.cap == 500
        assert res.jmax_theory == pytest.approx(jmax)
        if res.j_found is None:
            assert res.cap_exceeded

    def test_bad_step(self):
        H, rho0 = qubit()
        with pytest.raises(BadParameter):
            stroboscopic_recurrence(H, rho0, 0.5, 0.0)


class TestTorusSurrogate:
    def test_qubit_surrogate_is_exact_witness(self):
        H, rho0 = qubit()
        dt = default_dt(H)
        grid = Grid(0.0, dt, math.ceil(14.0 / dt))
        r = math.sqrt(2.0 - 2.0 * 0.999)
        t_surr, bures_ok = torus_surrogate_scan(H, rho0, r, grid)
        assert bures_ok
        # with the mean-energy gauge the torus itself only closes up at 4 pi
        # (at 2 pi both phases sit at the antipode, which projects to rho0
        # but is far on the torus), so the surrogate witness is one full
        # torus period -- still an exact recurrence of the state
        assert t_surr == pytest.approx(4.0 * math.pi, abs=dt / 2.0)
        f = fidelity_series(make_kernel(H, rho0), np.array([t_surr]))[0]
        assert f >= 0.999

    def test_single_level_support_never_moves(self):
        # one-dimensional support: the mean-energy gauge freezes the phase,
        # so the very first grid sample is the recurrence witness
        H = Hamiltonian(np.array([0.7]))
        rho0 = validate_density(np.array([[1.0 + 0.0j]]))
        t_surr, bures_ok = torus_surrogate_scan(H, rho0, 0.5, Grid(0.3, 0.1, 100))
        assert t_surr == pytest.approx(0.3)
        assert bures_ok

    @settings(max_examples=10, deadline=None)
    @given(seed=st.integers(0, 200))
    def test_surrogate_never_beats_exact(self, seed):
        # the torus distance dominates Bures, so whenever the torus is back
        # within r the true state is too
        H, rho0 = random_system(3, seed)
        dt = default_dt(H)
        grid = Grid(0.0, dt, 2000)
        t_surr, bures_ok = torus_surrogate_scan(H, rho0, 0.4, grid)
        assert bures_ok
        if t_surr is not None and t_surr > 0.0:
            d = bures_distance(rho0, evolve(make_kernel(H, rho0), t_surr))
            assert d <= 0.4 + 1e-9


class TestLipschitzContinuity:
    @settings(max_examples=15, deadline=None)
    @given(n=st.integers(2, 4), seed=st.integers(0, 300))
    def test_fidelity_series_is_lipschitz(self, n, seed):
        H, rho0 = random_system(n, seed)
        k = make_kernel(H, rho0)
        dt = default_dt(H)
        ts = np.arange(0.0, 400.0 * dt, dt)
        f = fidelity_series(k, ts)
        # slope never exceeds the fastest oscillation (factor-2 slack)
        assert np.abs(np.diff(f)).max() <= 2.0 * dt * k.max_frequency


class TestDimensionCeilingHolds:
    def test_qubit_family_at_moderate_floor(self):
        # at eps = 0.5 the n = 2 ceiling is small enough to check exhaustively
        jmax, _ = dimension_bound(2, 0.5)
        assert jmax < 100000
        H = Hamiltonian(np.array([0.0, 1.0]))
        for seed in range(10):
            rho0 = random_state(2, seed)
            res = stroboscopic_recurrence(H, rho0, 0.5, math.e / 3.0)
            assert res.j_found is not None
            assert res.j_found <= jmax
