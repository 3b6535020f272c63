import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, strategies as st

from onticlab.hilbert import (
    SIGMA_1,
    SIGMA_3,
    DimensionError,
    HermitianOp,
    QuantumState,
    UnitaryOp,
    bloch_vector,
    born_probability,
    evolve_state,
    inner,
    orthogonal_complement,
    random_state,
    random_unitary,
    rotation_from_unitary,
    state_from_bloch,
    unitary_from_hamiltonian,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)
dims = st.integers(min_value=2, max_value=6)
S = 1 / np.sqrt(2)


def test_inner_examples():
    e0, e1 = QuantumState.basis(2, 0), QuantumState.basis(2, 1)
    plus = QuantumState([S, S])
    assert inner(e0, e0) == 1
    assert inner(e0, e1) == 0
    assert inner(plus, e0) == pytest.approx(S)


def test_inner_dimension_mismatch():
    with pytest.raises(DimensionError):
        inner(QuantumState.basis(2, 0), QuantumState.basis(3, 0))


def test_born_probability_examples():
    e0, e1 = QuantumState.basis(2, 0), QuantumState.basis(2, 1)
    assert born_probability(e0, e0) == 1
    assert born_probability(e1, e0) == 0
    assert born_probability(QuantumState([S, S]), e0) == pytest.approx(0.5)


@pytest.mark.parametrize(
    "amps, expected",
    [([1, 0], [0, 0, 1]), ([0, 1], [0, 0, -1]), ([S, S], [1, 0, 0])],
)
def test_bloch_vector_examples(amps, expected):
    np.testing.assert_allclose(bloch_vector(QuantumState(amps)), expected, atol=1e-15)


def test_bloch_vector_needs_qubit():
    with pytest.raises(DimensionError):
        bloch_vector(QuantumState.basis(3, 0))


def test_state_validation():
    with pytest.raises(ValueError):
        QuantumState([1, 1])
    with pytest.raises(DimensionError):
        QuantumState([1.0])
    with pytest.raises(ValueError):
        HermitianOp([[0, 1], [0, 0]])
    with pytest.raises(ValueError):
        UnitaryOp([[1, 1], [0, 1]])


def _pauli_exp(sigma, t):
    # sigma^2 = 1 gives exp(-i sigma t) = cos t - i sin t sigma
    return np.cos(t) * np.eye(2) - 1j * np.sin(t) * sigma


def test_unitary_from_hamiltonian_examples():
    np.testing.assert_allclose(unitary_from_hamiltonian(HermitianOp(np.zeros((2, 2))), 5.0).matrix, np.eye(2))
    U = unitary_from_hamiltonian(HermitianOp(SIGMA_3), np.pi).matrix
    np.testing.assert_allclose(U, _pauli_exp(SIGMA_3, np.pi), atol=1e-14)
    np.testing.assert_allclose(U, -np.eye(2), atol=1e-14)
    U = unitary_from_hamiltonian(HermitianOp(SIGMA_1), np.pi / 2).matrix
    np.testing.assert_allclose(U, -1j * SIGMA_1, atol=1e-14)


@given(seeds, dims, st.floats(-10, 10))
def test_unitary_from_hamiltonian_matches_pade(seed, N, t):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(N, N)) + 1j * rng.normal(size=(N, N))
    H = HermitianOp((M + M.conj().T) / 2)
    U = unitary_from_hamiltonian(H, t).matrix
    np.testing.assert_allclose(U, scipy.linalg.expm(-1j * t * H.matrix), atol=1e-9)


def test_evolve_state_examples():
    psi = random_state(3, 1)
    np.testing.assert_allclose(evolve_state(psi, UnitaryOp.identity(3)).amplitudes, psi.amplitudes)
    flipped = evolve_state(QuantumState.basis(2, 0), UnitaryOp(SIGMA_1))
    np.testing.assert_allclose(flipped.amplitudes, [0, 1])


def test_evolve_state_z_rotation_bloch():
    # exp(-i sigma_3 pi/4) turns the Bloch vector by +pi/2 about z
    U = unitary_from_hamiltonian(HermitianOp(SIGMA_3), np.pi / 4)
    w = bloch_vector(evolve_state(QuantumState([S, S]), U))
    np.testing.assert_allclose(w, [0, 1, 0], atol=1e-14)


def test_evolve_state_dimension_mismatch():
    with pytest.raises(DimensionError):
        evolve_state(QuantumState.basis(2, 0), UnitaryOp.identity(3))


def test_random_state_deterministic_and_normalized():
    a, b = random_state(2, 11), random_state(2, 11)
    np.testing.assert_array_equal(a.amplitudes, b.amplitudes)
    assert abs(np.linalg.norm(random_state(4, 3).amplitudes) - 1) < 1e-12
    with pytest.raises(ValueError):
        random_state(1, 0)


def test_random_state_haar_mean_bloch(rng):
    ws = np.array([bloch_vector(random_state(2, rng)) for _ in range(100_000)])
    assert np.linalg.norm(ws.mean(axis=0)) < 0.02


def test_random_unitary_deterministic_and_unitary():
    U1, U2 = random_unitary(3, 5), random_unitary(3, 5)
    np.testing.assert_array_equal(U1.matrix, U2.matrix)
    assert np.max(np.abs(U1.matrix @ U1.matrix.conj().T - np.eye(3))) < 1e-10
    with pytest.raises(ValueError):
        random_unitary(1, 0)


def test_random_unitary_first_moment(rng):
    vals = [abs(random_unitary(2, rng).matrix[0, 0]) ** 2 for _ in range(10_000)]
    assert abs(np.mean(vals) - 0.5) < 0.02


@given(seeds, dims)
def test_evolution_preserves_norm(seed, N):
    rng = np.random.default_rng(seed)
    out = evolve_state(random_state(N, rng), random_unitary(N, rng))
    assert abs(np.linalg.norm(out.amplitudes) - 1) < 1e-10


@given(seeds, st.floats(-np.pi, np.pi))
def test_bloch_vector_phase_invariant(seed, theta):
    psi = random_state(2, seed)
    rotated = QuantumState(np.exp(1j * theta) * psi.amplitudes)
    np.testing.assert_allclose(bloch_vector(rotated), bloch_vector(psi), atol=1e-12)


@given(seeds)
def test_orthogonal_states_are_antipodal(seed):
    psi = random_state(2, seed)
    perp = orthogonal_complement(psi)
    assert abs(inner(psi, perp)) < 1e-14
    assert bloch_vector(psi) @ bloch_vector(perp) == pytest.approx(-1, abs=1e-10)


@given(seeds, st.floats(-5, 5), st.floats(-5, 5))
def test_hamiltonian_group_property(seed, t1, t2):
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    H = HermitianOp((M + M.conj().T) / 2)
    prod = unitary_from_hamiltonian(H, t1) @ unitary_from_hamiltonian(H, t2)
    np.testing.assert_allclose(prod.matrix, unitary_from_hamiltonian(H, t1 + t2).matrix, atol=1e-9)


@given(seeds)
def test_rotation_from_unitary_is_so3_and_matches_bloch(seed):
    rng = np.random.default_rng(seed)
    U = random_unitary(2, rng)
    R = rotation_from_unitary(U)
    np.testing.assert_allclose(R @ R.T, np.eye(3), atol=1e-12)
    assert np.linalg.det(R) == pytest.approx(1.0, abs=1e-12)
    psi = random_state(2, rng)
    np.testing.assert_allclose(bloch_vector(evolve_state(psi, U)), R @ bloch_vector(psi), atol=1e-12)


@given(seeds)
def test_state_from_bloch_roundtrip(seed):
    psi = random_state(2, seed)
    back = state_from_bloch(bloch_vector(psi))
    assert born_probability(back, psi) == pytest.approx(1.0, abs=1e-12)
