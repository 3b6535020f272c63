"""Bell's contextual, dispersion-free model for an N-level system.

The ontic state is a pair (chi, lambda): chi is a copy of the prepared state
vector and lambda is uniform on [0, 1). Measuring an ordered orthonormal basis
returns the slot k whose cumulative weight interval (C_{k-1}, C_k] contains
lambda. Because the intervals depend on the ORDER of the basis, reordering the
same basis can change which vector fires.

The trivial reduction drops lambda and fires an event phi with probability
|<phi|chi>|^2; it is no longer dispersion-free but only needs 2N-2 real
coordinates.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .hilbert import (
    DimensionError,
    QuantumState,
    UnitaryOp,
    born_probability,
    evolve_state,
    rays_equal,
)
from .model import OntologicalModel

ORTHONORMAL_TOL = 1e-10
RAY_TOL = 1e-10
WITNESS_GRID = 1000
EMPTY_CELL = 1e-14


class ContextError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class BellOnticState:
    """``lam`` may be a scalar or an array of lambdas sharing the same chi."""

    chi: QuantumState
    lam: float | np.ndarray

    def __post_init__(self):
        if not isinstance(self.chi, QuantumState):
            object.__setattr__(self, "chi", QuantumState(self.chi))
        lam = np.asarray(self.lam, dtype=float)
        if np.any(lam < 0.0) or np.any(lam > 1.0):
            raise ValueError("lambda must lie in [0, 1]")
        object.__setattr__(self, "lam", float(lam) if lam.ndim == 0 else lam)

    @property
    def N(self) -> int:
        return self.chi.N


@dataclass(frozen=True, eq=False)
class MeasurementContext:
    """Ordered orthonormal basis; the order is part of the context."""

    basis: tuple[QuantumState, ...]

    def __post_init__(self):
        basis = tuple(b if isinstance(b, QuantumState) else QuantumState(b) for b in self.basis)
        N = basis[0].N if basis else 0
        if len(basis) != N:
            raise ContextError(f"a complete context needs {N} vectors, got {len(basis)}")
        gram = np.array([[np.vdot(a.amplitudes, b.amplitudes) for b in basis] for a in basis])
        if np.max(np.abs(gram - np.eye(N))) > ORTHONORMAL_TOL:
            raise ContextError("context vectors are not orthonormal")
        object.__setattr__(self, "basis", basis)

    @classmethod
    def computational(cls, N: int) -> MeasurementContext:
        return cls(tuple(QuantumState.basis(N, k) for k in range(N)))

    @classmethod
    def from_unitary(cls, U: UnitaryOp) -> MeasurementContext:
        """Columns of ``U`` as the ordered basis."""
        return cls(tuple(QuantumState(U.matrix[:, k]) for k in range(U.N)))

    @property
    def N(self) -> int:
        return len(self.basis)

    def matrix(self) -> np.ndarray:
        return np.stack([b.amplitudes for b in self.basis], axis=1)

    def permuted(self, order: Sequence[int]) -> MeasurementContext:
        """New context whose slot i holds the current slot ``order[i]``."""
        if sorted(order) != list(range(self.N)):
            raise ValueError(f"{order!r} is not a permutation of 0..{self.N - 1}")
        return MeasurementContext(tuple(self.basis[i] for i in order))

    def transformed(self, U: UnitaryOp) -> MeasurementContext:
        return MeasurementContext(tuple(evolve_state(b, U) for b in self.basis))


def sample(psi: QuantumState, rng: np.random.Generator, size: int | None = None) -> BellOnticState:
    """chi is psi itself; lambda is uniform on [0, 1)."""
    return BellOnticState(psi, rng.random(size))


def evolve(X: BellOnticState, U: UnitaryOp) -> BellOnticState:
    """Schroedinger evolution of chi; lambda is a constant of motion."""
    return BellOnticState(evolve_state(X.chi, U), X.lam)


def weights(chi: QuantumState, ctx: MeasurementContext) -> np.ndarray:
    """|<phi(k)|chi>|^2 for each slot of the context."""
    if chi.N != ctx.N:
        raise DimensionError(f"state has N = {chi.N}, context has N = {ctx.N}")
    return np.abs(ctx.matrix().conj().T @ chi.amplitudes) ** 2


def cumulative_weights(chi: QuantumState, ctx: MeasurementContext) -> np.ndarray:
    """(C_0, C_1, ..., C_N) with C_0 = 0."""
    return np.concatenate([[0.0], np.cumsum(weights(chi, ctx))])


def outcome_intervals(chi: QuantumState, ctx: MeasurementContext) -> list[tuple[float, float]]:
    """The lambda interval (C_{k-1}, C_k] assigned to each slot."""
    C = cumulative_weights(chi, ctx)
    return [(float(C[k]), float(C[k + 1])) for k in range(ctx.N)]


def measure(X: BellOnticState, ctx: MeasurementContext) -> int | np.ndarray:
    """1-based slot k with C_{k-1} < lambda <= C_k (vectorized over lambda)."""
    C = cumulative_weights(X.chi, ctx)
    lam = np.asarray(X.lam, dtype=float)
    if np.any(lam > C[-1] + 1e-12):
        raise RuntimeError(f"lambda beyond total weight {C[-1]!r}; context is not complete")
    # cells narrower than EMPTY_CELL are rounding debris; keep lambda (including
    # the measure-zero endpoints 0 and 1) inside the span of the real cells
    nonempty = np.flatnonzero(np.diff(C) > EMPTY_CELL)
    lo = np.nextafter(C[nonempty[0]], np.inf)
    hi = C[nonempty[-1] + 1]
    lam = np.clip(lam, lo, hi)
    k = np.searchsorted(C[1:], lam, side="left") + 1
    return int(k) if k.ndim == 0 else k


def measured_vector(X: BellOnticState, ctx: MeasurementContext) -> QuantumState:
    return ctx.basis[measure(X, ctx) - 1]


@dataclass(frozen=True)
class ContextualityWitness:
    """Same (chi, lambda), same basis vectors, different order, different vector.

    Outcomes are 0-based indices into the ORIGINAL basis so the two can be
    compared directly.
    """

    outcome_original: int
    outcome_permuted: int
    lam: float


def contextuality_witness(chi: QuantumState, ctx: MeasurementContext,
                          permutation: Sequence[int],
                          grid: int = WITNESS_GRID) -> ContextualityWitness | None:
    """Scan lambda on a midpoint grid for a value where the two orderings fire
    different basis vectors. Returns ``None`` when no such lambda exists on the
    grid."""
    permutation = list(permutation)
    other = ctx.permuted(permutation)
    lam = (np.arange(grid) + 0.5) / grid
    X = BellOnticState(chi, lam)
    orig = measure(X, ctx) - 1
    perm = np.asarray(permutation)[measure(X, other) - 1]
    hit = np.flatnonzero(orig != perm)
    if hit.size == 0:
        return None
    i = int(hit[0])
    return ContextualityWitness(int(orig[i]), int(perm[i]), float(lam[i]))


def measure_ndf(chi: QuantumState, phi: QuantumState, rng: np.random.Generator,
                size: int | None = None) -> int | np.ndarray:
    """Event indicator of the trivial model: 1 with probability |<phi|chi>|^2."""
    p = born_probability(phi, chi)
    out = (rng.random(size) < p).astype(int)
    return int(out) if np.ndim(out) == 0 else out


class BellModel(OntologicalModel):
    """Contract adapter for both Bell-type models.

    Events are either a single :class:`QuantumState` (measured as the first
    slot of a context) or, when ``context`` is given, a member of that
    context.
    """

    def __init__(self, N: int, dispersion_free: bool = True):
        if N < 2:
            raise ValueError(f"N must be >= 2, got {N}")
        self.N = N
        self.dispersion_free = dispersion_free
        self.name = "bell-df" if dispersion_free else "bell-ndf"
        # chi: 2N reals minus norm and global phase; lambda adds one more
        self.ontic_dim = 2 * N - 1 if dispersion_free else 2 * N - 2

    def sample(self, prep: QuantumState, n: int, rng: np.random.Generator) -> BellOnticState:
        if prep.N != self.N:
            raise DimensionError(f"model has N = {self.N}, state has N = {prep.N}")
        if self.dispersion_free:
            return sample(prep, rng, size=n)
        return BellOnticState(prep, np.zeros(n))

    def density_or_support(self, x: BellOnticState, prep: QuantumState) -> np.ndarray:
        inside = float(rays_equal(x.chi.amplitudes, prep.amplitudes, RAY_TOL))
        return np.full(np.size(x.lam), inside)

    def evolve(self, x: BellOnticState, U: UnitaryOp) -> BellOnticState:
        return evolve(x, U)

    def transform(self, prep: QuantumState, U: UnitaryOp) -> QuantumState:
        return evolve_state(prep, U)

    def compose(self, U2: UnitaryOp, U1: UnitaryOp) -> UnitaryOp:
        return U2 @ U1

    def event_probability(self, x: BellOnticState, event: QuantumState,
                          context: MeasurementContext | None = None) -> np.ndarray:
        lam = np.atleast_1d(np.asarray(x.lam, dtype=float))
        if not self.dispersion_free:
            return np.full(lam.size, born_probability(event, x.chi))
        if context is None:
            return (born_probability(event, x.chi) >= lam).astype(float)
        slot = _slot_of(event, context)
        fired = np.atleast_1d(measure(BellOnticState(x.chi, lam), context))
        return (fired == slot).astype(float)

    def exact_probability(self, prep: QuantumState, event: QuantumState) -> float:
        return born_probability(event, prep)

    def ontic_distance(self, x1: BellOnticState, x2: BellOnticState) -> float:
        d_chi = float(np.max(np.abs(x1.chi.amplitudes - x2.chi.amplitudes)))
        d_lam = float(np.max(np.abs(np.asarray(x1.lam) - np.asarray(x2.lam)), initial=0.0))
        return max(d_chi, d_lam)


def _slot_of(event: QuantumState, ctx: MeasurementContext) -> int:
    for k, b in enumerate(ctx.basis, start=1):
        if rays_equal(event.amplitudes, b.amplitudes, RAY_TOL):
            return k
    raise ContextError("event vector is not a member of the measurement context")
