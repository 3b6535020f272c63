"""Kochen-Specker ontological model of a two-level system.

The ontic state is a unit 3-vector ``v``. Two variants are provided, labelled by
the support parameter ``B``:

* ``B = 1/2`` (dispersion-free): a state with Bloch vector ``w`` prepares the
  density ``(1/pi) (v.w) theta(v.w)`` on the hemisphere around ``w`` and the
  event ``phi`` fires iff ``w(phi).v >= 0``.
* ``B = 0``: the state prepares a point mass at ``v = w`` and the event ``phi``
  fires with probability ``(1 + w(phi).v) / 2``.

Both variants evolve ``v`` by the rigid rotation that the Hamiltonian induces on
the Bloch sphere.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .hilbert import (
    DimensionError,
    QuantumState,
    UnitaryOp,
    bloch_vector,
    born_probability,
    evolve_state,
    rotation_from_unitary,
)
from .model import OntologicalModel
from .sphere import orthonormal_frame

B_DISPERSION_FREE = 0.5
B_LINEAR = 0.0
VARIANTS = (B_DISPERSION_FREE, B_LINEAR)

UNIT_TOL = 1e-12
# point-mass support test for the B = 0 variant
DELTA_TOL = 1e-10


class QuadratureError(RuntimeError):
    def __init__(self, message: str, error_estimate: float):
        super().__init__(f"{message} (error estimate {error_estimate:.3g})")
        self.error_estimate = error_estimate


def _check_variant(B: float) -> float:
    if B not in VARIANTS:
        raise ValueError(f"support parameter B must be 0 or 1/2, got {B!r}")
    return float(B)


def _qubit(psi: QuantumState) -> QuantumState:
    if psi.N != 2:
        raise DimensionError(f"qubit model needs N = 2, got N = {psi.N}")
    return psi


def as_direction(v) -> np.ndarray:
    """Validate a unit vector (or an ``(n, 3)`` batch of them)."""
    v = np.asarray(v, dtype=float)
    if v.shape[-1] != 3:
        raise ValueError(f"ontic direction must have 3 components, got shape {v.shape}")
    norms = np.linalg.norm(v, axis=-1)
    if np.any(np.abs(norms - 1.0) > UNIT_TOL):
        raise ValueError("ontic direction is not a unit vector")
    return v


@dataclass(frozen=True)
class PauliDrive:
    """Constant coefficients h of H = h_1 sigma_1 + h_2 sigma_2 + h_3 sigma_3."""

    h: tuple[float, float, float]

    def __post_init__(self):
        h = tuple(float(x) for x in self.h)
        if len(h) != 3 or not all(np.isfinite(h)):
            raise ValueError("PauliDrive needs three finite coefficients")
        object.__setattr__(self, "h", h)

    @property
    def vector(self) -> np.ndarray:
        return np.array(self.h)


def density(v, psi: QuantumState) -> np.ndarray | float:
    """Hemisphere density (1/pi) (v.w) theta(v.w) of the dispersion-free variant."""
    v = as_direction(v)
    d = v @ bloch_vector(_qubit(psi))
    out = np.where(d >= 0.0, d, 0.0) / np.pi
    return float(out) if out.ndim == 0 else out


def point_support(v, psi: QuantumState) -> np.ndarray | float:
    """Support indicator of the B = 0 point mass at the Bloch vector."""
    v = as_direction(v)
    dist = np.linalg.norm(v - bloch_vector(_qubit(psi)), axis=-1)
    out = (dist < DELTA_TOL).astype(float)
    return float(out) if out.ndim == 0 else out


def sample_from_uniforms(psi: QuantumState, u, phi) -> np.ndarray:
    """Map uniforms ``u`` in [0,1) and azimuths ``phi`` onto the hemisphere density.

    The polar angle from w has pdf sin(2 alpha) on [0, pi/2], inverted by
    cos(alpha) = sqrt(1 - u).
    """
    frame = orthonormal_frame(bloch_vector(_qubit(psi)))
    u = np.asarray(u, dtype=float)
    phi = np.asarray(phi, dtype=float)
    cos_a = np.sqrt(1.0 - u)
    sin_a = np.sqrt(u)
    local = np.stack([sin_a * np.cos(phi), sin_a * np.sin(phi), cos_a], axis=-1)
    return local @ frame


def sample(psi: QuantumState, rng: np.random.Generator, size: int | None = None) -> np.ndarray:
    """Draw directions from the hemisphere density of ``psi``.

    Returns shape ``(3,)`` when ``size`` is None, else ``(size, 3)``.
    """
    u = rng.random(size)
    phi = 2.0 * np.pi * rng.random(size)
    return sample_from_uniforms(psi, u, phi)


def rotation_matrix(h, dt: float) -> np.ndarray:
    """Exact propagator of dv/dt = 2 h x v for constant h (Rodrigues)."""
    h = np.asarray(h, dtype=float)
    norm = np.linalg.norm(h)
    if norm == 0.0 or dt == 0.0:
        return np.eye(3)
    k = h / norm
    angle = 2.0 * norm * dt
    K = np.array([[0.0, -k[2], k[1]], [k[2], 0.0, -k[0]], [-k[1], k[0], 0.0]])
    return np.eye(3) + np.sin(angle) * K + (1.0 - np.cos(angle)) * (K @ K)


def rotate(v, h, dt: float) -> np.ndarray:
    """Rotate ``v`` about h by the angle 2|h| dt.

    ``h`` may be a :class:`PauliDrive` or a plain 3-vector.
    """
    if isinstance(h, PauliDrive):
        h = h.vector
    v = as_direction(v)
    return v @ rotation_matrix(h, dt).T


def rotate_piecewise(v, segments) -> np.ndarray:
    """Apply a sequence of ``(h, dt)`` segments, each with constant drive."""
    for h, dt in segments:
        v = rotate(v, h, dt)
    return v


def measure_event(phi: QuantumState, v, B: float = B_DISPERSION_FREE) -> np.ndarray | float:
    """Probability that the event ``phi`` fires given the ontic direction ``v``.

    ``theta(0)`` is taken as 1, so directions on the boundary circle count.
    """
    B = _check_variant(B)
    d = as_direction(v) @ bloch_vector(_qubit(phi))
    if B == B_DISPERSION_FREE:
        out = (d >= 0.0).astype(float)
    else:
        out = 0.5 * (1.0 + d)
    return float(out) if np.ndim(out) == 0 else out


def _arc_fraction(mu: np.ndarray, cos_t: float, sin_t: float) -> np.ndarray:
    # fraction of the azimuth circle at height mu (about w_psi) with w_phi.v >= 0
    sin_a = np.sqrt(np.clip(1.0 - mu**2, 0.0, None))
    denom = sin_t * sin_a
    with np.errstate(divide="ignore", invalid="ignore"):
        c = -cos_t * mu / denom
    frac = np.arccos(np.clip(c, -1.0, 1.0)) / np.pi
    flat = denom < 1e-300
    return np.where(flat, (cos_t * mu >= 0.0).astype(float), frac)


def _hemisphere_born_integral(w_phi: np.ndarray, w_psi: np.ndarray, n_polar: int) -> float:
    frame = orthonormal_frame(w_psi)
    cos_t = float(np.clip(w_phi @ frame[2], -1.0, 1.0))
    sin_t = float(np.hypot(w_phi @ frame[0], w_phi @ frame[1]))
    x, wts = np.polynomial.legendre.leggauss(n_polar)
    # the azimuthal arc saturates at mu = sin_t; split there to keep the pieces smooth
    breaks = sorted({0.0, min(max(sin_t, 0.0), 1.0), 1.0})
    total = 0.0
    for lo, hi in zip(breaks[:-1], breaks[1:]):
        if hi <= lo:
            continue
        mu = 0.5 * (hi - lo) * x + 0.5 * (hi + lo)
        # density (1/pi) mu times 2 pi of azimuth
        total += 0.5 * (hi - lo) * np.sum(wts * 2.0 * mu * _arc_fraction(mu, cos_t, sin_t))
    return float(total)


def born_check_exact(phi: QuantumState, psi: QuantumState, B: float = B_DISPERSION_FREE,
                     n_polar: int = 128, tol: float = 1e-4) -> float:
    """Deterministic value of the integral of P(phi|v) rho(v|psi) over the sphere.

    For ``B = 1/2`` the integral runs over the hemisphere around w(psi):
    Gauss-Legendre in the polar coordinate with the azimuthal integral of the
    step function done in closed form. The rule is repeated with half the nodes
    and a :class:`QuadratureError` is raised if the two disagree by more than
    ``tol``. For ``B = 0`` the density is a point mass and the integral is the
    kernel evaluated at w(psi).
    """
    B = _check_variant(B)
    w_phi = bloch_vector(_qubit(phi))
    w_psi = bloch_vector(_qubit(psi))
    if B == B_LINEAR:
        return float(0.5 * (1.0 + w_phi @ w_psi))
    fine = _hemisphere_born_integral(w_phi, w_psi, n_polar)
    coarse = _hemisphere_born_integral(w_phi, w_psi, max(n_polar // 2, 2))
    if abs(fine - coarse) > tol:
        raise QuadratureError("hemisphere quadrature did not converge", abs(fine - coarse))
    return fine


class QubitModel(OntologicalModel):
    """The two-level model behind the common contract; evolutions are 2x2 unitaries."""

    N = 2
    ontic_dim = 2

    def __init__(self, B: float = B_DISPERSION_FREE):
        self.B = _check_variant(B)
        self.dispersion_free = self.B == B_DISPERSION_FREE
        self.name = "qubit-df" if self.dispersion_free else "qubit-b0"

    def sample(self, prep: QuantumState, n: int, rng: np.random.Generator) -> np.ndarray:
        if self.dispersion_free:
            return sample(prep, rng, size=n)
        return np.tile(bloch_vector(_qubit(prep)), (n, 1))

    def density_or_support(self, x, prep: QuantumState):
        if self.dispersion_free:
            return np.atleast_1d(density(x, prep))
        return np.atleast_1d(point_support(x, prep))

    def evolve(self, x, U: UnitaryOp) -> np.ndarray:
        return np.asarray(x) @ rotation_from_unitary(U).T

    def transform(self, prep: QuantumState, U: UnitaryOp) -> QuantumState:
        return evolve_state(prep, U)

    def compose(self, U2: UnitaryOp, U1: UnitaryOp) -> UnitaryOp:
        return U2 @ U1

    def event_probability(self, x, event: QuantumState, context=None) -> np.ndarray:
        return np.atleast_1d(measure_event(event, x, self.B))

    def exact_probability(self, prep: QuantumState, event: QuantumState) -> float:
        return born_probability(event, prep)
