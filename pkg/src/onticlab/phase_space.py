"""Gaussian Wigner functions of one bosonic mode as an ontological model.

Conventions: a = (q + i p)/sqrt(2), [q, p] = i. The Gaussian state
psi(x) = (pi a)^(-1/4) exp(-(x-q0)^2/(2a) + i p0 (x-q0) + i b (x-q0)^2)
has the everywhere-positive Wigner function

    W(q, p) = (1/pi) exp(-(q-q0)^2/a - a [p - p0 - 2b(q-q0)]^2),

which is used directly as the ontic density on the (q, p) plane. Quadratic
Hamiltonians move phase points along the exact affine symplectic flow of
Hamilton's equations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.linalg import expm
from scipy.special import ndtr

from .model import OntologicalModel

J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class GaussianStateParams:
    q0: float
    p0: float
    a: float
    b: float

    def __post_init__(self):
        vals = (self.q0, self.p0, self.a, self.b)
        if not all(np.isfinite(vals)):
            raise ValueError("Gaussian parameters must be finite")
        if self.a <= 0:
            raise ValueError(f"width parameter a must be positive, got {self.a}")

    @property
    def mean(self) -> np.ndarray:
        return np.array([self.q0, self.p0])

    def covariance(self) -> np.ndarray:
        """Covariance of (q, p), obtained by inverting the quadratic form in the
        exponent of W (independent of the sampler's factorization)."""
        a, b = self.a, self.b
        # W ~ exp(-z^T K z) with K the coefficient matrix below; cov = (2K)^-1
        K = np.array([[1.0 / a + 4.0 * a * b * b, -2.0 * a * b], [-2.0 * a * b, a]])
        return np.linalg.inv(2.0 * K)

    @classmethod
    def from_moments(cls, mean, cov) -> GaussianStateParams:
        """Inverse of (mean, covariance) for a pure Gaussian (det cov = 1/4)."""
        cov = np.asarray(cov, dtype=float)
        a = 2.0 * cov[0, 0]
        b = cov[0, 1] / a
        return cls(float(mean[0]), float(mean[1]), float(a), float(b))


@dataclass(frozen=True, eq=False)
class PhasePoint:
    """A phase-space point, or a batch when ``q`` and ``p`` are arrays."""

    q: float | np.ndarray
    p: float | np.ndarray

    def __post_init__(self):
        if not (np.all(np.isfinite(self.q)) and np.all(np.isfinite(self.p))):
            raise ValueError("phase point must be finite")

    def as_array(self) -> np.ndarray:
        """Shape ``(2,)`` or ``(n, 2)``."""
        return np.stack([np.asarray(self.q, float), np.asarray(self.p, float)], axis=-1)

    @classmethod
    def from_array(cls, z) -> PhasePoint:
        z = np.asarray(z, dtype=float)
        if z.ndim == 1:
            return cls(float(z[0]), float(z[1]))
        return cls(z[:, 0], z[:, 1])


@dataclass(frozen=True, eq=False)
class QuadraticHamiltonian:
    """H(z) = 1/2 z.A.z + c.z with z = (q, p)."""

    A: np.ndarray
    c: np.ndarray = None

    def __post_init__(self):
        A = np.asarray(self.A, dtype=float)
        if A.shape != (2, 2):
            raise ValueError(f"A must be 2x2, got {A.shape}")
        if np.max(np.abs(A - A.T)) > 1e-12:
            raise ValueError("A must be symmetric")
        c = np.zeros(2) if self.c is None else np.asarray(self.c, dtype=float)
        if c.shape != (2,):
            raise ValueError("linear term c must have 2 components")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)

    @classmethod
    def harmonic(cls, omega: float = 1.0) -> QuadraticHamiltonian:
        return cls(omega * np.eye(2))

    @classmethod
    def free_particle(cls, mass: float = 1.0) -> QuadraticHamiltonian:
        return cls(np.diag([0.0, 1.0 / mass]))

    def __call__(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=float)
        return 0.5 * np.einsum("...i,ij,...j->...", z, self.A, z) + z @ self.c


@dataclass(frozen=True, eq=False)
class AffineSymplecticMap:
    """z -> M z + d."""

    M: np.ndarray
    d: np.ndarray

    def __call__(self, z) -> np.ndarray:
        return np.asarray(z, dtype=float) @ self.M.T + self.d

    def then(self, other: AffineSymplecticMap) -> AffineSymplecticMap:
        """Apply ``self`` first, then ``other``."""
        return AffineSymplecticMap(other.M @ self.M, other.M @ self.d + other.d)

    @classmethod
    def identity(cls) -> AffineSymplecticMap:
        return cls(np.eye(2), np.zeros(2))


def flow_map(H: QuadraticHamiltonian, t: float) -> AffineSymplecticMap:
    """Exact time-t flow of dz/dt = J (A z + c).

    The affine system is embedded as a 3x3 linear one and exponentiated.
    """
    gen = np.zeros((3, 3))
    gen[:2, :2] = J @ H.A
    gen[:2, 2] = J @ H.c
    E = expm(gen * t)
    return AffineSymplecticMap(E[:2, :2], E[:2, 2])


def wigner_density(pt: PhasePoint, g: GaussianStateParams) -> float | np.ndarray:
    dq = np.asarray(pt.q, float) - g.q0
    dp = np.asarray(pt.p, float) - g.p0 - 2.0 * g.b * dq
    out = np.exp(-dq**2 / g.a - g.a * dp**2) / np.pi
    return float(out) if out.ndim == 0 else out


def sample(g: GaussianStateParams, rng: np.random.Generator, size: int | None = None) -> PhasePoint:
    """q ~ N(q0, a/2); p | q ~ N(p0 + 2b(q - q0), 1/(2a))."""
    xi1 = rng.standard_normal(size)
    xi2 = rng.standard_normal(size)
    q = g.q0 + np.sqrt(g.a / 2.0) * xi1
    p = g.p0 + 2.0 * g.b * (q - g.q0) + xi2 / np.sqrt(2.0 * g.a)
    return PhasePoint(q, p)


def evolve(pt: PhasePoint, H: QuadraticHamiltonian | AffineSymplecticMap, t: float | None = None) -> PhasePoint:
    """Move phase points along the flow of ``H`` for time ``t`` (or apply a
    precomputed map when ``H`` is already an :class:`AffineSymplecticMap`)."""
    F = H if isinstance(H, AffineSymplecticMap) else flow_map(H, t)
    return PhasePoint.from_array(F(pt.as_array()))


def evolve_params(g: GaussianStateParams, F: AffineSymplecticMap) -> GaussianStateParams:
    """Push a Gaussian Wigner function forward through an affine symplectic map."""
    return GaussianStateParams.from_moments(F(g.mean), F.M @ g.covariance() @ F.M.T)


def quadrature(pt: PhasePoint, theta: float) -> float | np.ndarray:
    out = np.cos(theta) * np.asarray(pt.q, float) + np.sin(theta) * np.asarray(pt.p, float)
    return float(out) if np.ndim(out) == 0 else out


def marginal_q_density(x, g: GaussianStateParams) -> float | np.ndarray:
    """|psi(x)|^2, the position marginal of W."""
    if g.a <= 0:
        raise ValueError("a must be positive")
    x = np.asarray(x, float)
    out = np.exp(-(x - g.q0) ** 2 / g.a) / np.sqrt(np.pi * g.a)
    return float(out) if out.ndim == 0 else out


def marginal_q_numeric(x: float, g: GaussianStateParams) -> float:
    """Adaptive numerical integral of W(x, p) over p."""
    centre = g.p0 + 2.0 * g.b * (x - g.q0)
    f = lambda p: wigner_density(PhasePoint(x, p), g)
    # split at the ridge so quad sees the peak
    lo, _ = quad(f, -np.inf, centre, epsabs=1e-13, epsrel=1e-12)
    hi, _ = quad(f, centre, np.inf, epsabs=1e-13, epsrel=1e-12)
    return lo + hi


def wavefunction(x, g: GaussianStateParams) -> np.ndarray:
    x = np.asarray(x, float)
    dx = x - g.q0
    return (np.pi * g.a) ** -0.25 * np.exp(-dx**2 / (2 * g.a) + 1j * g.p0 * dx + 1j * g.b * dx**2)


def quadrature_moments(g: GaussianStateParams, theta: float) -> tuple[float, float]:
    """Mean and standard deviation of cos(theta) q + sin(theta) p."""
    e = np.array([np.cos(theta), np.sin(theta)])
    return float(e @ g.mean), float(np.sqrt(e @ g.covariance() @ e))


@dataclass(frozen=True)
class QuadratureEvent:
    """The event ``cos(theta) q + sin(theta) p <= threshold``."""

    theta: float
    threshold: float


class WignerGaussianModel(OntologicalModel):
    """Preparations are :class:`GaussianStateParams`, evolutions are
    :class:`AffineSymplecticMap` and events are :class:`QuadratureEvent`.

    Two continuous variables describe a four-parameter family of states, which
    is only possible because the states and measurements are restricted.
    """

    name = "wigner-gaussian"
    N = None
    ontic_dim = 2
    dispersion_free = True
    restricted_manifold = True

    def sample(self, prep: GaussianStateParams, n: int, rng: np.random.Generator) -> PhasePoint:
        return sample(prep, rng, size=n)

    def density_or_support(self, x: PhasePoint, prep: GaussianStateParams) -> np.ndarray:
        return np.atleast_1d(wigner_density(x, prep))

    def evolve(self, x: PhasePoint, U: AffineSymplecticMap) -> PhasePoint:
        return evolve(x, U)

    def transform(self, prep: GaussianStateParams, U: AffineSymplecticMap) -> GaussianStateParams:
        return evolve_params(prep, U)

    def compose(self, U2: AffineSymplecticMap, U1: AffineSymplecticMap) -> AffineSymplecticMap:
        return U1.then(U2)

    def event_probability(self, x: PhasePoint, event: QuadratureEvent, context=None) -> np.ndarray:
        return (np.atleast_1d(quadrature(x, event.theta)) <= event.threshold).astype(float)

    def exact_probability(self, prep: GaussianStateParams, event: QuadratureEvent) -> float:
        mu, sigma = quadrature_moments(prep, event.theta)
        return float(ndtr((event.threshold - mu) / sigma))

    def ontic_distance(self, x1: PhasePoint, x2: PhasePoint) -> float:
        return float(np.max(np.abs(x1.as_array() - x2.as_array())))
