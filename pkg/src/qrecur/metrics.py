"""Distance and uncertainty functionals on density matrices.

Two norms show up and are never interchangeable: the trace norm (the one
in the Fuchs-van de Graaf inequalities) and the Hilbert-Schmidt norm
(the one under which single-coherence blocks are orthogonal). Reports
elsewhere label which norm was used.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, EigenFailure
from .states import DensityMatrix, Hamiltonian

EIG_CLIP = 1e-12  # negative eigenvalues below this magnitude are noise


@dataclass(frozen=True)
class DistanceSample:
    """All distances between rho(t) and rho0 at one sample time."""

    t: float
    fidelity: float
    bures: float
    trace_dist: float
    hs_dist: float
    torus_dist: float | None = None

    def __post_init__(self):
        expected = float(np.sqrt(max(0.0, 2.0 - 2.0 * self.fidelity)))
        if abs(self.bures - expected) > 1e-12:
            raise ValueError("bures inconsistent with fidelity")


def sqrtm_psd(m: np.ndarray) -> np.ndarray:
    """Hermitian square root of a PSD matrix via eigendecomposition."""
    try:
        vals, vecs = np.linalg.eigh(m)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from None
    vals = np.clip(vals, 0.0, None)
    return (vecs * np.sqrt(vals)) @ vecs.conj().T


def fidelity(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Uhlmann fidelity tr sqrt(sqrt(rho) sigma sqrt(rho)), clamped to [0, 1]."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"{rho.dim} != {sigma.dim}")
    a = sqrtm_psd(rho.matrix)
    try:
        vals = np.linalg.eigvalsh(a @ sigma.matrix @ a)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from None
    f = float(np.sqrt(np.clip(vals, 0.0, None)).sum())
    return min(max(f, 0.0), 1.0)


def bures_distance(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    return float(np.sqrt(max(0.0, 2.0 - 2.0 * fidelity(rho, sigma))))


def trace_distance_norm(rho: DensityMatrix, sigma: DensityMatrix) -> float:
    """Trace norm of rho - sigma; range [0, 2]."""
    if rho.dim != sigma.dim:
        raise DimensionMismatch(f"{rho.dim} != {sigma.dim}")
    try:
        vals = np.linalg.eigvalsh(rho.matrix - sigma.matrix)
    except np.linalg.LinAlgError as exc:
        raise EigenFailure(str(exc)) from None
    return float(np.abs(vals).sum())


def hs_norm(a) -> float:
    """Hilbert-Schmidt (Frobenius) norm."""
    return float(np.linalg.norm(np.asarray(a)))


def energy_stats(H: Hamiltonian, rho: DensityMatrix) -> tuple[float, float]:
    """Mean energy and energy uncertainty of rho (H diagonal by convention)."""
    if rho.dim != H.dim:
        raise DimensionMismatch(f"state dim {rho.dim} != spectrum length {H.dim}")
    p = rho.populations
    mean = float(H.energies @ p)
    # centered form: immune to the catastrophic cancellation of E^2@p - mean^2
    var = float((H.energies - mean) ** 2 @ p)
    return mean, float(np.sqrt(max(0.0, var)))


def fvg_check(
    rho: DensityMatrix, sigma: DensityMatrix, slack: float = 1e-9
) -> tuple[bool, bool]:
    """Fuchs-van de Graaf: 1 - F <= T/2 <= sqrt(1 - F^2), trace norm T."""
    f = fidelity(rho, sigma)
    half_t = trace_distance_norm(rho, sigma) / 2.0
    lower_ok = 1.0 - f <= half_t + slack
    upper_ok = half_t <= np.sqrt(max(0.0, 1.0 - f * f)) + slack
    return lower_ok, upper_ok


def distance_sample(
    t: float,
    rho_t: DensityMatrix,
    rho0: DensityMatrix,
    torus_dist: float | None = None,
) -> DistanceSample:
    f = fidelity(rho0, rho_t)
    return DistanceSample(
        t=float(t),
        fidelity=f,
        bures=float(np.sqrt(max(0.0, 2.0 - 2.0 * f))),
        trace_dist=trace_distance_norm(rho_t, rho0),
        hs_dist=hs_norm(rho_t.matrix - rho0.matrix),
        torus_dist=torus_dist,
    )
