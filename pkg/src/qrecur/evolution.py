"""Exact unitary evolution in the energy eigenbasis.

Each coherence rotates with its Bohr frequency, so rho(t) is the
elementwise product of rho(0) with a phase table. Phases are always
computed from absolute time; grids never accumulate phase increments,
which keeps long scans drift-free.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadParameter, DimensionMismatch
from .states import DensityMatrix, Hamiltonian


@dataclass(frozen=True)
class EvolutionKernel:
    """Precomputed Bohr-frequency table omega[k, k'] = (E_k' - E_k)/hbar."""

    omega: np.ndarray = field(repr=False)
    rho0: DensityMatrix

    @property
    def dim(self) -> int:
        return self.rho0.dim

    @property
    def max_frequency(self) -> float:
        return float(np.abs(self.omega).max())


def make_kernel(H: Hamiltonian, rho0: DensityMatrix) -> EvolutionKernel:
    if rho0.dim != H.dim:
        raise DimensionMismatch(f"state dim {rho0.dim} != spectrum length {H.dim}")
    e = H.energies
    omega = (e[None, :] - e[:, None]) / H.hbar
    omega.setflags(write=False)
    return EvolutionKernel(omega, rho0)


def evolve(kernel: EvolutionKernel, t: float) -> DensityMatrix:
    """rho(t) with entries rho0[k, k'] * exp(i omega[k, k'] t)."""
    if not np.isfinite(t):
        raise BadParameter("t must be finite")
    return DensityMatrix(kernel.rho0.matrix * np.exp(1j * kernel.omega * t))


def evolve_grid(
    kernel: EvolutionKernel, t0: float, dt: float, steps: int
) -> list[DensityMatrix]:
    """Snapshots at t0 + j*dt for j = 0..steps-1."""
    if not (np.isfinite(t0) and np.isfinite(dt) and dt > 0):
        raise BadParameter("need finite t0 and dt > 0")
    if steps < 1:
        raise BadParameter("need steps >= 1")
    times = grid_times(t0, dt, steps)
    phases = np.exp(1j * kernel.omega[None, :, :] * times[:, None, None])
    return [DensityMatrix(kernel.rho0.matrix * p) for p in phases]


def grid_times(t0: float, dt: float, steps: int) -> np.ndarray:
    """Absolute sample times for a (t0, dt, steps) grid."""
    return t0 + dt * np.arange(steps, dtype=float)
