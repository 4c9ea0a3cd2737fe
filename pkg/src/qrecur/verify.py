"""Verification suites with independent oracles.

Every suite returns a dict with an "ok" flag plus enough detail to
diagnose a failure. The oracles here (Simpson quadrature, gamma product
recursions, Monte Carlo cap volumes, brute-force scans) deliberately
avoid the code paths they check.
"""

from __future__ import annotations

import math

import mpmath as mp
import numpy as np

from . import bounds, metrics, search, states, torus
from .errors import PreconditionViolated, StationaryState
from .evolution import make_kernel
from .search import Grid, default_dt, fidelity_series
from .torus import (
    FiniteMetricSpace,
    metric_recurrence_oracle,
    torus_distance_series,
    torus_from_state,
    torus_phase_at,
)
from .truncation import delta_time_invariance_check, truncate

CHUNK = 32768


# ---------------------------------------------------------------------------
# oracles


def simpson_sin_power(m: int, x: float, panels: int = 1_000_000) -> float:
    """Composite-Simpson integral of sin^m over [0, x]; the quadrature
    oracle for the special-function suite."""
    if x == 0.0:
        return 0.0
    s = np.linspace(0.0, x, 2 * panels + 1)
    y = np.sin(s) ** m
    w = np.ones_like(y)
    w[1:-1:2] = 4.0
    w[2:-1:2] = 2.0
    return float((x / (2 * panels) / 3.0) * (w @ y))


def gamma_product_log(base: float, steps: int, log_gamma_base: float) -> float:
    """ln Gamma(base + steps) from ln Gamma(base) via the recurrence."""
    acc = log_gamma_base
    for k in range(steps):
        acc += math.log(base + k)
    return acc


def monte_carlo_cap_volume(n: int, r: float, samples: int, seed: int) -> float:
    """Monte Carlo volume of the geodesic ball of radius r in the unit
    n-sphere, via uniform Gaussians on the embedding space."""
    full = 2.0 * math.pi ** ((n + 1) / 2.0) / math.gamma((n + 1) / 2.0)
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < samples:
        block = min(samples - done, 2_000_000)
        x = rng.standard_normal((block, n + 1))
        cosang = x[:, 0] / np.linalg.norm(x, axis=1)
        hits += int((np.arccos(np.clip(cosang, -1.0, 1.0)) <= r).sum())
        done += block
    return full * hits / samples


def _sqrt_rho_mp(rho0: np.ndarray):
    """High-precision Hermitian square root, for re-checking borderline
    fidelity values beyond double precision."""
    with mp.workdps(40):
        m = mp.matrix([[mp.mpc(z) for z in row] for row in rho0])
        # the float64 entries carry an O(eps) trace defect that would put a
        # sqrt(eps) floor under the Bures distance; renormalize exactly
        m = m / mp.re(sum(m[k, k] for k in range(m.rows)))
        vals, vecs = mp.eighe(m)
        root = mp.diag([mp.sqrt(max(v, mp.mpf(0))) for v in vals])
        return vecs * root * vecs.H


def _bures_hp(sqrt_rho, energies: np.ndarray, hbar: float, t: float) -> float:
    """Bures distance between rho0 and its phase evolution at time t.

    The fidelity is the nuclear norm of sqrt(rho0) U(t) sqrt(rho0); both
    it and sqrt(2 - 2F) are formed at 40 working digits, because near
    F = 1 the square root amplifies double-precision noise to ~1e-8.
    """
    with mp.workdps(40):
        phases = mp.diag(
            [mp.exp(mp.mpc(0, -1) * mp.mpf(e) * mp.mpf(t) / mp.mpf(hbar)) for e in energies]
        )
        a = sqrt_rho * phases * sqrt_rho
        sv = mp.svd_c(a, compute_uv=False)
        deficit = max(2 - 2 * sum(sv), mp.mpf(0))
        return float(mp.sqrt(deficit))


def _submersion_excess_hp(
    sqrt_rho, energies: np.ndarray, hbar: float, times: np.ndarray, tdist: np.ndarray
) -> float:
    """Largest (Bures - torus distance) over the given samples, with the
    fidelity recomputed in high precision."""
    worst = -math.inf
    for t, d in zip(times, tdist):
        bures = _bures_hp(sqrt_rho, energies, hbar, float(t))
        worst = max(worst, bures - float(d))
    return worst


# ---------------------------------------------------------------------------
# suites


def qubit_example_suite() -> dict:
    """Worked qubit case: equal superposition, E = (0, 1), threshold 0.999."""
    H = states.qubit_hamiltonian(1.0)
    rho0 = states.pure_state(np.array([1.0, 1.0]) / math.sqrt(2.0))
    threshold = 0.999
    eps = bounds.threshold_to_epsilon(threshold, bounds.EPS_BURES_SCALE)
    report = bounds.energy_bounds(H, rho0, eps)
    dt = default_dt(H)
    grid = Grid(0.0, dt, 64)
    result = search.find_recurrence(H, rho0, threshold, grid, report=report)
    t_rec = result.t_rec
    ok = (
        t_rec is not None
        and abs(t_rec - 2.0 * math.pi) <= dt + 1e-12
        and report.lower_mt <= t_rec <= report.upper_product
    )
    return {
        "ok": bool(ok),
        "t_rec": t_rec,
        "dt": dt,
        "lower_mt": report.lower_mt,
        "upper_product": report.upper_product,
        "epsilon": eps,
    }


def _random_instance(seed_pair):
    rng = np.random.default_rng(seed_pair)
    n = int(rng.integers(2, 6))
    H = states.Hamiltonian(np.sort(rng.uniform(0.0, 1.0, size=n)))
    g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    m = g @ g.conj().T
    rho0 = states.validate_density(m / m.trace().real)
    u = float(rng.uniform(0.45, 0.7))
    return H, rho0, u


def bracket_ensemble_suite(
    count: int = 200, seed: int = 42, horizon_samples: int = 1_000_000
) -> dict:
    """Seeded random systems: measured first returns must respect the
    energy-uncertainty bracket to within one grid step.

    Instances whose upper bound does not fit the sample horizon are
    skipped and counted. The scan also accumulates the submersion check
    (Bures <= torus distance) and the trace-norm ceiling at each
    measured recurrence.
    """
    violations = []
    skipped = no_departure = checked = 0
    submersion_excess = -math.inf
    fvg_ceiling_ok = True
    recurrences = []
    for i in range(count):
        H, rho0, u = _random_instance([seed, i])
        eps = u * math.pi * float(np.sqrt(rho0.populations.min()))
        threshold = 1.0 - eps**2 / 4.0
        report = bounds.energy_bounds(H, rho0, eps)
        dt = min(default_dt(H), report.lower_mt / 4.0)
        steps = math.ceil((report.upper_product + 2.0 * dt) / dt)
        if steps > horizon_samples:
            skipped += 1
            continue
        checked += 1
        kernel = make_kernel(H, rho0)
        tor = torus_from_state(rho0)
        lam = report.lambda_shift
        times = Grid(0.0, dt, steps).times()
        sqrt_rho_hp = None
        dep_idx = rec_idx = None
        for lo in range(0, steps, CHUNK):
            ts = times[lo : lo + CHUNK]
            f = fidelity_series(kernel, ts)
            bures = np.sqrt(np.clip(2.0 - 2.0 * f, 0.0, None))
            tdist = torus_distance_series(tor, torus_phase_at(H, lam, ts))
            # float64 fidelity noise inflates near-zero Bures distances by
            # ~sqrt(eps); re-check flagged samples in high precision
            flagged = np.flatnonzero(bures > tdist + 1e-9)
            if flagged.size:
                if sqrt_rho_hp is None:
                    sqrt_rho_hp = _sqrt_rho_mp(rho0.matrix)
                submersion_excess = max(
                    submersion_excess,
                    _submersion_excess_hp(
                        sqrt_rho_hp, H.energies, H.hbar, ts[flagged], tdist[flagged]
                    ),
                )
            if dep_idx is None:
                below = np.flatnonzero(f < threshold)
                if below.size == 0:
                    continue
                dep_idx = lo + int(below[0])
                f = f[below[0] :]
                offset = dep_idx
            else:
                offset = lo
            above = np.flatnonzero(f >= threshold)
            if above.size:
                rec_idx = offset + int(above[0])
                break
        if dep_idx is None:
            no_departure += 1
            continue
        if rec_idx is None:
            violations.append({"instance": i, "kind": "no_return_within_upper"})
            continue
        t_rec = float(times[rec_idx])
        recurrences.append((i, t_rec))
        if not (report.lower_mt - dt <= t_rec <= report.upper_product + dt):
            violations.append(
                {
                    "instance": i,
                    "kind": "bracket",
                    "t_rec": t_rec,
                    "lower": report.lower_mt,
                    "upper": report.upper_product,
                }
            )
        rho_t = states.DensityMatrix(
            rho0.matrix * np.exp(1j * kernel.omega * t_rec)
        )
        tnorm = metrics.trace_distance_norm(rho_t, rho0)
        if tnorm**2 > 2.0 * eps**2 * (1.0 - eps**2 / 8.0) + 1e-6:
            fvg_ceiling_ok = False
    return {
        "ok": not violations and fvg_ceiling_ok and submersion_excess <= 1e-9,
        "count": count,
        "checked": checked,
        "skipped": skipped,
        "no_departure": no_departure,
        "violations": violations,
        "submersion_excess": submersion_excess,
        "fvg_ceiling_ok": fvg_ceiling_ok,
        "n_recurrences": len(recurrences),
    }


def strobe_suite(
    count: int = 50, seed: int = 42, epsilon: float = 0.9, cap: int = 100_000
) -> dict:
    """Stroboscopic search on two-level systems with random step lengths."""
    jmax, _ = bounds.dimension_bound(2, epsilon)
    violations = []
    found = 0
    for i in range(count):
        rng = np.random.default_rng([seed, 7000 + i])
        H = states.Hamiltonian(np.sort(rng.uniform(0.0, 1.0, size=2)))
        g = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        m = g @ g.conj().T
        rho0 = states.validate_density(m / m.trace().real)
        t = float(rng.uniform(0.1, 10.0))
        res = search.stroboscopic_recurrence(H, rho0, epsilon, t, jmax_cap=cap)
        if res.j_found is not None:
            found += 1
            if math.isfinite(res.jmax_theory) and res.j_found > math.ceil(
                res.jmax_theory
            ):
                violations.append({"instance": i, "j": res.j_found})
        elif res.jmax_theory <= cap:
            violations.append({"instance": i, "j": None})
    return {
        "ok": not violations,
        "count": count,
        "found": found,
        "jmax_theory": jmax,
        "theory_within_cap": jmax <= cap,
        "violations": violations,
    }


def fvg_suite(pairs: int = 500, seed: int = 42) -> dict:
    """Fuchs-van de Graaf double inequality on random state pairs."""
    failures = 0
    for i in range(pairs):
        rng = np.random.default_rng([seed, 9000 + i])
        n = int(rng.integers(2, 5))
        pair = []
        for _ in range(2):
            g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            m = g @ g.conj().T
            pair.append(states.validate_density(m / m.trace().real))
        lower_ok, upper_ok = metrics.fvg_check(*pair)
        if not (lower_ok and upper_ok):
            failures += 1
    return {"ok": failures == 0, "pairs": pairs, "failures": failures}


def truncation_suite(
    systems: int = 20, n_times: int = 50, seed: int = 42, n: int = 6, N: int = 3
) -> dict:
    """Time-invariance of the truncation error and the corollary distance
    ceiling at measured recurrences of the normalized block."""
    worst_dev = 0.0
    ceiling_failures = []
    stationary = 0
    for i in range(systems):
        rng = np.random.default_rng([seed, 3000 + i])
        H = states.Hamiltonian(np.sort(rng.uniform(0.0, 1.0, size=n)))
        g = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
        m = g @ g.conj().T
        rho0 = states.validate_density(m / m.trace().real)
        times = rng.uniform(0.0, 100.0, size=n_times)
        worst_dev = max(worst_dev, delta_time_invariance_check(H, rho0, N, times))

        trunc = truncate(rho0, N)
        H_N = states.Hamiltonian(H.energies[:N], H.hbar)
        eps = 0.8 * math.pi * float(np.sqrt(trunc.sigma_tilde.populations.min()))
        try:
            sub_report = bounds.energy_bounds(H_N, trunc.sigma_tilde, eps)
        except (StationaryState, PreconditionViolated):
            stationary += 1
            continue
        threshold = 1.0 - eps**2 / 4.0
        dt = min(default_dt(H_N), sub_report.lower_mt / 4.0)
        steps = min(400_000, math.ceil((sub_report.upper_product + 2 * dt) / dt))
        res = search.find_recurrence(
            H_N, trunc.sigma_tilde, threshold, Grid(0.0, dt, steps), report=sub_report
        )
        if res.t_rec is None:
            continue
        kernel = make_kernel(H, rho0)
        rho_t = rho0.matrix * np.exp(1j * kernel.omega * res.t_rec)
        measured_hs = float(np.linalg.norm(rho_t - rho0.matrix))
        ceiling = 2.0 * math.sqrt(trunc.delta_N) + math.sqrt(
            2.0
        ) * trunc.P_N * eps * math.sqrt(1.0 - eps**2 / 8.0)
        if measured_hs > ceiling + 1e-9:
            ceiling_failures.append(
                {"instance": i, "measured_hs": measured_hs, "ceiling": ceiling}
            )
    return {
        "ok": worst_dev <= 1e-9 and not ceiling_failures,
        "worst_invariance_dev": worst_dev,
        "ceiling_failures": ceiling_failures,
        "stationary_blocks": stationary,
    }


def geometry_suite(mc_samples: int = 10_000_000, seed: int = 42) -> dict:
    """Ball and tube volumes against closed forms and a Monte Carlo cap."""
    closed = {1: 2.0 * math.pi, 2: 4.0 * math.pi, 3: 2.0 * math.pi**2}
    full_ok = all(
        abs(torus.sphere_ball_volume(n, math.pi) - v) <= 1e-10
        for n, v in closed.items()
    )
    cap_exact = torus.sphere_ball_volume(3, math.pi / 2.0)
    cap_mc = monte_carlo_cap_volume(3, math.pi / 2.0, mc_samples, seed)
    cap_ok = abs(cap_mc - cap_exact) <= 0.01 * cap_exact
    theta, length = 0.3, 2.5
    tube_ok = (
        abs(torus.tube_volume(2, theta, length) - 2.0 * theta * length) <= 1e-12
        and abs(torus.tube_volume(3, theta, length) - math.pi * theta**2 * length)
        <= 1e-12
    )
    return {
        "ok": full_ok and cap_ok and tube_ok,
        "full_sphere_ok": full_ok,
        "cap_exact": cap_exact,
        "cap_mc": cap_mc,
        "tube_ok": tube_ok,
    }


def _cycle_space(m: int, scale: float) -> FiniteMetricSpace:
    idx = np.arange(m)
    hops = np.minimum((idx[None, :] - idx[:, None]) % m, (idx[:, None] - idx[None, :]) % m)
    return FiniteMetricSpace(
        points=tuple(range(m)), dist=scale * hops, measure=np.full(m, 1.0)
    )


def _xor_ultrametric(depth: int, rng) -> FiniteMetricSpace:
    m = 2**depth
    levels = np.sort(rng.uniform(0.5, 2.0, size=depth))[::-1]  # deeper split, smaller
    idx = np.arange(m)
    x = idx[:, None] ^ idx[None, :]
    d = np.zeros((m, m))
    mask = x > 0
    top_bit = np.zeros((m, m), dtype=int)
    top_bit[mask] = np.floor(np.log2(x[mask])).astype(int)
    d[mask] = levels[depth - 1 - top_bit[mask]]
    return FiniteMetricSpace(points=tuple(range(m)), dist=d, measure=np.full(m, 1.0))


def metric_recurrence_suite(count: int = 100, seed: int = 42) -> dict:
    """Random finite metric spaces with permutation isometries: brute-forced
    return steps never exceed the measure-ratio ceiling."""
    failures = []
    for i in range(count):
        rng = np.random.default_rng([seed, 5000 + i])
        if i % 2 == 0:
            m = int(rng.integers(5, 31))
            space = _cycle_space(m, float(rng.uniform(0.2, 2.0)))
            shift = int(rng.integers(1, m))
            perm = (np.arange(m) + shift) % m
        else:
            depth = int(rng.integers(2, 6))
            space = _xor_ultrametric(depth, rng)
            mask = int(rng.integers(1, 2**depth))
            perm = np.arange(2**depth) ^ mask
        p = int(rng.integers(0, space.size))
        r = float(rng.uniform(0.1, 1.5) * space.dist.max())
        res = metric_recurrence_oracle(space, perm, p, r)
        if not res.ok:
            failures.append({"instance": i, "n_rec": res.n_rec, "bound": res.bound})
    return {"ok": not failures, "count": count, "failures": failures}


def special_function_suite() -> dict:
    """Closed forms and brute-force oracles for the special functions."""
    n1_ok = True
    for eps in np.linspace(0.05, 0.999, 20):
        jmax, _ = bounds.dimension_bound(1, float(eps))
        exact = 4.0 / math.sqrt(2.0 - 2.0 * eps)
        if abs(jmax - exact) > 1e-12 * exact:
            n1_ok = False
    # product oracle: ln Gamma(16) from 15!, ln Gamma(16.5) from Gamma(0.5)
    ref = gamma_product_log(1.0, 15, 0.0) - gamma_product_log(
        0.5, 16, math.log(math.sqrt(math.pi))
    )
    ratio_ok = abs(bounds.log_gamma_ratio(16.0, 16.5) - ref) <= 1e-10
    sin_ok = True
    worst = 0.0
    for m in (0, 1, 6, 30):
        for x in (0.1, 0.5, math.pi / 2.0, math.pi):
            dev = abs(bounds.sin_power_integral(m, x) - simpson_sin_power(m, x))
            worst = max(worst, dev)
            if dev > 1e-10:
                sin_ok = False
    return {
        "ok": n1_ok and ratio_ok and sin_ok,
        "closed_form_ok": n1_ok,
        "gamma_ratio_ok": ratio_ok,
        "sin_integral_worst_dev": worst,
    }


def invariance_suite(seed: int = 42) -> dict:
    """Recurrence results are unchanged by a zero-point energy shift."""
    rng = np.random.default_rng([seed, 1])
    H, rho0, u = _random_instance([seed, 101])
    eps = u * math.pi * float(np.sqrt(rho0.populations.min()))
    threshold = 1.0 - eps**2 / 4.0
    grid = Grid(0.0, default_dt(H), 50_000)
    base = search.find_recurrence(H, rho0, threshold, grid)
    mismatches = 0
    for _ in range(10):
        lam = float(rng.uniform(-5.0, 5.0))
        shifted = search.find_recurrence(H.shifted(lam), rho0, threshold, grid)
        if (shifted.t_departure, shifted.t_rec) != (base.t_departure, base.t_rec):
            mismatches += 1
    return {
        "ok": mismatches == 0,
        "mismatches": mismatches,
        "t_rec": base.t_rec,
    }


ALL_SUITES = {
    "qubit_example": qubit_example_suite,
    "bracket_ensemble": bracket_ensemble_suite,
    "strobe": strobe_suite,
    "fvg": fvg_suite,
    "truncation": truncation_suite,
    "geometry": geometry_suite,
    "metric_recurrence": metric_recurrence_suite,
    "special_functions": special_function_suite,
    "invariance": invariance_suite,
}


def run_suites(names=None, seed: int = 42) -> dict:
    """Run the named suites (default: all); seed flows to the random ones."""
    results = {}
    for name, fn in ALL_SUITES.items():
        if names and name not in names:
            continue
        kwargs = {"seed": seed} if "seed" in fn.__code__.co_varnames else {}
        results[name] = fn(**kwargs)
    results["ok"] = all(r["ok"] for r in results.values())
    return results
