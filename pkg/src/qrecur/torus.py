"""Flat-torus geometry, sphere ball volumes, tube volumes and a discrete
recurrence oracle for volume-preserving isometries.

The phases of a state's coherences live on a product of circles whose
radii are the square roots of the populations; distances on that torus
dominate the Bures distance between the evolved state and the initial
one (Riemannian-submersion inequality), which is what makes the torus a
useful surrogate for recurrence searches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import gammaln

from .bounds import sin_power_integral
from .errors import (
    BadDomain,
    BallEmpty,
    NotIsometry,
    NotMeasurePreserving,
    ZeroPopulation,
)
from .states import DensityMatrix, Hamiltonian

METRIC_TOL = 1e-12


@dataclass(frozen=True)
class FlatTorus:
    """Product of circles with the given radii; flat product metric."""

    radii: np.ndarray

    def __post_init__(self):
        r = np.asarray(self.radii, dtype=float)
        if r.ndim != 1 or r.size < 1 or not np.all(r > 0):
            raise BadDomain("radii must be a non-empty vector of positive reals")
        object.__setattr__(self, "radii", r)
        r.setflags(write=False)

    @property
    def dim(self) -> int:
        return self.radii.size


def torus_from_state(rho0: DensityMatrix, reduce_support: bool = False) -> FlatTorus:
    """Torus with radii sqrt(p_k) from the populations of rho0."""
    p = rho0.populations
    if np.any(p <= 1e-14):
        if not reduce_support:
            raise ZeroPopulation(
                f"populations below tolerance at indices {np.flatnonzero(p <= 1e-14).tolist()}"
            )
        p = p[p > 1e-14]
    return FlatTorus(np.sqrt(p))


def wrap_angles(theta) -> np.ndarray:
    """Reduce angles to (-pi, pi]."""
    theta = np.asarray(theta, dtype=float)
    w = np.mod(theta + np.pi, 2.0 * np.pi) - np.pi
    return np.where(w == -np.pi, np.pi, w)


def torus_distance(torus: FlatTorus, theta) -> float:
    """Geodesic distance from the origin: sqrt(sum r_j^2 * wrap(theta_j)^2)."""
    theta = np.asarray(theta, dtype=float)
    if theta.shape[-1] != torus.dim:
        raise BadDomain(f"expected {torus.dim} angles, got {theta.shape}")
    w = wrap_angles(theta)
    return float(np.sqrt((torus.radii**2 * w**2).sum()))


def torus_distance_series(torus: FlatTorus, thetas: np.ndarray) -> np.ndarray:
    """Vectorized torus_distance over rows of a (samples, n) angle array."""
    w = wrap_angles(thetas)
    return np.sqrt((torus.radii[None, :] ** 2 * w**2).sum(axis=1))


def torus_phase_at(H: Hamiltonian, lam: float, t) -> np.ndarray:
    """Phase angles -(E_k - lam) * t / hbar, wrapped to (-pi, pi].

    Accepts a scalar t (returns shape (n,)) or an array of times
    (returns shape (len(t), n)).
    """
    t = np.asarray(t, dtype=float)
    raw = -np.multiply.outer(t, (H.energies - lam) / H.hbar)
    return wrap_angles(raw)


def injectivity_radius(torus: FlatTorus) -> float:
    return math.pi * float(torus.radii.min())


def torus_volume(torus: FlatTorus) -> float:
    """(2 pi)^n times the product of the radii, via log space."""
    n = torus.dim
    log_v = n * math.log(2.0 * math.pi) + float(np.log(torus.radii).sum())
    try:
        return math.exp(log_v)
    except OverflowError:
        return math.inf


def sphere_ball_volume(n: int, r: float) -> float:
    """Volume of the geodesic ball of radius r in the unit n-sphere."""
    if n < 1:
        raise BadDomain("need n >= 1")
    if not (0.0 <= r <= math.pi + 1e-15):
        raise BadDomain(f"r = {r} outside [0, pi]")
    prefactor = math.exp(
        math.log(2.0) + n / 2.0 * math.log(math.pi) - float(gammaln(n / 2.0))
    )
    return prefactor * sin_power_integral(n - 1, min(r, math.pi))


def tube_volume(n: int, theta: float, length: float) -> float:
    """Flat-space volume of the theta-neighborhood of a curve of the given
    length in dimension n.

    Validity (no self-intersections) requires theta below half the ambient
    injectivity radius; that check belongs to the caller.
    """
    if n < 2:
        raise BadDomain("need n >= 2")
    if not (theta > 0 and length > 0):
        raise BadDomain("need positive theta and length")
    log_v = (
        math.log(2.0)
        + (n - 1) / 2.0 * math.log(math.pi)
        - math.log(n - 1)
        - float(gammaln((n - 1) / 2.0))
        + (n - 1) * math.log(theta)
        + math.log(length)
    )
    try:
        return math.exp(log_v)
    except OverflowError:
        return math.inf


@dataclass(frozen=True)
class FiniteMetricSpace:
    """Finitely many points with an explicit metric and positive weights."""

    points: tuple
    dist: np.ndarray = field(repr=False)
    measure: np.ndarray = field(repr=False)

    def __post_init__(self):
        d = np.asarray(self.dist, dtype=float)
        mu = np.asarray(self.measure, dtype=float)
        m = len(self.points)
        if d.shape != (m, m):
            raise BadDomain(f"distance matrix shape {d.shape} != ({m}, {m})")
        if mu.shape != (m,) or not np.all(mu > 0):
            raise BadDomain("measure must be m positive weights")
        if np.abs(d - d.T).max() > METRIC_TOL:
            raise BadDomain("distance matrix is not symmetric")
        if np.abs(np.diag(d)).max() > METRIC_TOL:
            raise BadDomain("distance matrix has nonzero diagonal")
        if np.any(d < -METRIC_TOL):
            raise BadDomain("negative distances")
        # triangle inequality: d[i, j] <= d[i, k] + d[k, j] for all k
        via = (d[:, :, None] + d[None, :, :]).min(axis=1)
        if np.any(d > via + METRIC_TOL):
            raise BadDomain("triangle inequality violated")
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "measure", mu)
        d.setflags(write=False)
        mu.setflags(write=False)

    @property
    def size(self) -> int:
        return len(self.points)

    @property
    def total_measure(self) -> float:
        return float(self.measure.sum())

    @classmethod
    def from_dict(cls, spec: dict) -> "FiniteMetricSpace":
        return cls(
            points=tuple(spec["points"]),
            dist=np.asarray(spec["dist"], dtype=float),
            measure=np.asarray(spec["measure"], dtype=float),
        )


@dataclass(frozen=True)
class OracleResult:
    n_rec: int
    bound: float
    ok: bool


def metric_recurrence_oracle(
    space: FiniteMetricSpace, permutation, p: int, r: float
) -> OracleResult:
    """Brute-force recurrence check for a permutation isometry.

    Finds the smallest k >= 1 with dist(p, T^k(p)) <= r and compares it
    against the measure-ratio ceiling mu(M)/mu(B_{r/2}(p)), where the
    ball is OPEN (strict d < r/2) -- with discrete spaces the convention
    matters.
    """
    if not r > 0:
        raise BadDomain("need r > 0")
    perm = np.asarray(permutation, dtype=int)
    m = space.size
    if sorted(perm.tolist()) != list(range(m)):
        raise BadDomain("permutation must be a bijection on the points")
    d = space.dist
    if np.abs(d[np.ix_(perm, perm)] - d).max() > METRIC_TOL:
        raise NotIsometry("permutation does not preserve distances")
    if np.abs(space.measure[perm] - space.measure).max() > METRIC_TOL:
        raise NotMeasurePreserving("permutation does not preserve the measure")
    ball_mu = float(space.measure[d[p] < r / 2.0].sum())
    if ball_mu <= 0.0:
        raise BallEmpty(f"open ball of radius {r / 2.0} around point {p} is empty")
    bound = space.total_measure / ball_mu
    cap = math.ceil(bound)
    q = p
    for k in range(1, cap + 1):
        q = int(perm[q])
        if d[p, q] <= r:
            return OracleResult(n_rec=k, bound=bound, ok=k <= bound)
    # unreachable if the implementation is correct: the ceiling is a theorem
    return OracleResult(n_rec=cap + 1, bound=bound, ok=False)
