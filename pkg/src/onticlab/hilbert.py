"""Dense complex linear algebra for small N-dimensional Hilbert spaces.

Units use hbar = 1. For N = 2 the array index order is (|-1>, |1>), so the
Bloch vector formula below reads directly off the amplitudes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

NORM_TOL = 1e-10
HERMITIAN_TOL = 1e-12
UNITARY_TOL = 1e-10

SIGMA_1 = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_2 = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_3 = np.array([[1, 0], [0, -1]], dtype=complex)
PAULI = (SIGMA_1, SIGMA_2, SIGMA_3)


class DimensionError(ValueError):
    """Raised when objects living in different Hilbert spaces are combined."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class QuantumState:
    """Normalized pure state. Construction rejects vectors whose norm is off by
    more than ``NORM_TOL`` and then renormalizes to machine precision; use
    :meth:`from_vector` to normalize arbitrary nonzero input."""

    amplitudes: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.amplitudes, dtype=complex)
        if a.ndim != 1 or a.size < 2:
            raise DimensionError(f"state needs a 1-d vector with N >= 2, got shape {a.shape}")
        norm = np.linalg.norm(a)
        if not np.isfinite(norm) or abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi| = {norm})")
        object.__setattr__(self, "amplitudes", _frozen(a / norm))

    @classmethod
    def from_vector(cls, vector) -> QuantumState:
        a = np.asarray(vector, dtype=complex)
        norm = np.linalg.norm(a)
        if norm == 0 or not np.isfinite(norm):
            raise ValueError("cannot normalize a zero or non-finite vector")
        return cls(a / norm)

    @classmethod
    def basis(cls, N: int, k: int) -> QuantumState:
        """The computational basis vector |k> (0-based index)."""
        a = np.zeros(N, dtype=complex)
        a[k] = 1.0
        return cls(a)

    @property
    def N(self) -> int:
        return self.amplitudes.size

    def __len__(self):
        return self.N

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.amplitudes, dtype=dtype)

    def __repr__(self):
        return f"QuantumState({np.array2string(self.amplitudes, precision=4)})"


@dataclass(frozen=True, eq=False)
class HermitianOp:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got shape {m.shape}")
        if np.max(np.abs(m - m.conj().T), initial=0.0) > HERMITIAN_TOL:
            raise ValueError("operator is not Hermitian")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def N(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def pauli(cls, h) -> HermitianOp:
        """H = sum_k h_k sigma_k for a real 3-vector of coefficients."""
        h = np.asarray(h, dtype=float)
        return cls(sum(hk * s for hk, s in zip(h, PAULI)))


@dataclass(frozen=True, eq=False)
class UnitaryOp:
    matrix: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise DimensionError(f"operator must be square, got shape {m.shape}")
        err = np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0])))
        if err > UNITARY_TOL:
            raise ValueError(f"operator is not unitary (max |UU^dag - I| = {err:.3g})")
        object.__setattr__(self, "matrix", _frozen(m))

    @property
    def N(self) -> int:
        return self.matrix.shape[0]

    @classmethod
    def identity(cls, N: int) -> UnitaryOp:
        return cls(np.eye(N))

    def __matmul__(self, other: UnitaryOp) -> UnitaryOp:
        """Operator product; ``U2 @ U1`` applies U1 first."""
        if not isinstance(other, UnitaryOp):
            return NotImplemented
        _check_dims(self.N, other.N)
        return UnitaryOp(self.matrix @ other.matrix)

    def dagger(self) -> UnitaryOp:
        return UnitaryOp(self.matrix.conj().T)


def _check_dims(n1: int, n2: int) -> None:
    if n1 != n2:
        raise DimensionError(f"incompatible Hilbert space dimensions {n1} and {n2}")


def inner(phi: QuantumState, psi: QuantumState) -> complex:
    """<phi|psi>, conjugate-linear in the first argument."""
    _check_dims(phi.N, psi.N)
    return complex(np.vdot(phi.amplitudes, psi.amplitudes))


def born_probability(phi: QuantumState, psi: QuantumState) -> float:
    """|<phi|psi>|^2, clipped into [0, 1] against rounding."""
    return float(min(1.0, abs(inner(phi, psi)) ** 2))


def bloch_vector(psi: QuantumState) -> np.ndarray:
    """Bloch vector (w1, w2, w3) of a qubit state with amplitudes (psi_-1, psi_1)."""
    if psi.N != 2:
        raise DimensionError(f"Bloch vector needs N = 2, got N = {psi.N}")
    m, p = psi.amplitudes
    cross = np.conj(m) * p
    w = np.array([2.0 * cross.real, 2.0 * cross.imag, abs(m) ** 2 - abs(p) ** 2])
    return w


def state_from_bloch(w) -> QuantumState:
    """Inverse of :func:`bloch_vector` up to global phase."""
    w = np.asarray(w, dtype=float)
    w = w / np.linalg.norm(w)
    theta = np.arccos(np.clip(w[2], -1.0, 1.0))
    phi = np.arctan2(w[1], w[0])
    return QuantumState(np.array([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)]))


def orthogonal_complement(psi: QuantumState) -> QuantumState:
    """A unit vector orthogonal to a qubit state: (psi_-1, psi_1) -> (-psi_1*, psi_-1*)."""
    if psi.N != 2:
        raise DimensionError("orthogonal_complement is defined for qubits only")
    m, p = psi.amplitudes
    return QuantumState(np.array([-np.conj(p), np.conj(m)]))


def unitary_from_hamiltonian(H: HermitianOp, t: float) -> UnitaryOp:
    """exp(-i H t) through the eigendecomposition of H."""
    if not np.isfinite(t):
        raise ValueError("evolution time must be finite")
    if not isinstance(H, HermitianOp):
        H = HermitianOp(H)
    evals, evecs = np.linalg.eigh(H.matrix)
    phases = np.exp(-1j * evals * t)
    return UnitaryOp((evecs * phases) @ evecs.conj().T)


def evolve_state(psi: QuantumState, U: UnitaryOp) -> QuantumState:
    _check_dims(psi.N, U.N)
    out = U.matrix @ psi.amplitudes
    # unitarity is only guaranteed to UNITARY_TOL, renormalize the drift away
    return QuantumState(out / np.linalg.norm(out))


def _as_generator(rng) -> np.random.Generator:
    if isinstance(rng, np.random.Generator):
        return rng
    return np.random.default_rng(rng)


def random_state(N: int, rng) -> QuantumState:
    """Haar-random pure state from a normalized complex Gaussian vector."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    rng = _as_generator(rng)
    z = rng.standard_normal(N) + 1j * rng.standard_normal(N)
    return QuantumState.from_vector(z)


def random_unitary(N: int, rng) -> UnitaryOp:
    """Haar-random unitary (Mezzadri): QR of a Ginibre matrix with the phases of
    R's diagonal moved into Q so the decomposition is unique."""
    if N < 2:
        raise ValueError(f"N must be >= 2, got {N}")
    rng = _as_generator(rng)
    z = (rng.standard_normal((N, N)) + 1j * rng.standard_normal((N, N))) / np.sqrt(2.0)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    q = q * (d / np.abs(d))
    return UnitaryOp(q)


def rotation_from_unitary(U: UnitaryOp) -> np.ndarray:
    """SO(3) matrix R with bloch_vector(U psi) = R @ bloch_vector(psi).

    R_ij = (1/2) Tr(sigma_i U sigma_j U^dagger).
    """
    if U.N != 2:
        raise DimensionError("rotation_from_unitary needs a 2x2 unitary")
    u = U.matrix
    ud = u.conj().T
    R = np.empty((3, 3))
    for i, si in enumerate(PAULI):
        for j, sj in enumerate(PAULI):
            R[i, j] = 0.5 * np.trace(si @ u @ sj @ ud).real
    return R


def rays_equal(a, b, tol: float = 1e-10) -> bool:
    """True when two normalized vectors differ only by a global phase."""
    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        return False
    return 1.0 - abs(np.vdot(a, b)) < tol
