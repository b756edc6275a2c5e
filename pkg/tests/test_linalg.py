import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from softqc.errors import ValidationError
from softqc.linalg import (
    PLUS,
    X,
    Z,
    basis_state,
    bell_state,
    check_density_matrix,
    diagonal_qubit,
    eig_hermitian,
    maximally_mixed,
    partial_trace,
    random_density_matrix,
    tensor,
    trace_distance,
    von_neumann_entropy,
)


def test_tensor_identity():
    np.testing.assert_array_equal(tensor(np.eye(2), np.eye(2)), np.eye(4))


def test_tensor_basis_ordering():
    # qubit 0 is the most significant factor: |0>|1> -> index 1
    np.testing.assert_array_equal(tensor(basis_state("0"), basis_state("1")), np.diag([0, 1, 0, 0]))


def test_tensor_pauli_pair():
    expected = np.zeros((4, 4))
    expected[0, 2] = 1
    expected[1, 3] = -1
    expected[2, 0] = 1
    expected[3, 1] = -1
    np.testing.assert_array_equal(tensor(X, Z), expected)


def test_partial_trace_product(rng):
    a = random_density_matrix(rng, 1)
    b = random_density_matrix(rng, 2)
    np.testing.assert_allclose(partial_trace(tensor(a, b), [1, 2]), a, atol=1e-12)
    np.testing.assert_allclose(partial_trace(tensor(a, b), [0]), b, atol=1e-12)


def test_partial_trace_bell_marginal():
    np.testing.assert_allclose(partial_trace(bell_state(), [1]), np.eye(2) / 2, atol=1e-15)


def test_partial_trace_middle_qubit_matches_index_sum(rng):
    rho = random_density_matrix(rng, 3)
    t = rho.reshape(2, 2, 2, 2, 2, 2)
    expected = sum(t[:, k, :, :, k, :] for k in range(2)).reshape(4, 4)
    np.testing.assert_allclose(partial_trace(rho, [1]), expected, atol=1e-14)


def test_partial_trace_two_neuron_state():
    # 0.3|0><0| x |+><+|  +  0.7|1><1| x AD(0.5)(|+><+|), reduced on qubit 1
    s = np.sqrt(0.5) / 2
    damped = np.array([[0.75, s], [s, 0.25]])
    joint = 0.3 * tensor(basis_state("0"), PLUS) + 0.7 * tensor(basis_state("1"), damped)
    expected = 0.3 * PLUS + 0.7 * damped
    np.testing.assert_allclose(partial_trace(joint, [0]), expected, atol=1e-12)


@pytest.mark.parametrize("traced", [[], [0, 1], [2], [-1]])
def test_partial_trace_rejects_bad_index_sets(traced):
    with pytest.raises(ValueError):
        partial_trace(bell_state(), traced)


def test_eig_hermitian_simple_cases():
    w, _ = eig_hermitian(Z)
    np.testing.assert_allclose(w, [-1, 1])
    w, _ = eig_hermitian(np.eye(2) / 2)
    np.testing.assert_allclose(w, [0.5, 0.5])


def test_eig_hermitian_against_quadratic_formula():
    m = 0.3 * basis_state("0") + 0.7 * PLUS
    tr = np.trace(m).real
    det = np.linalg.det(m).real
    disc = np.sqrt(tr**2 - 4 * det)
    w, v = eig_hermitian(m)
    np.testing.assert_allclose(w, [(tr - disc) / 2, (tr + disc) / 2], atol=1e-14)
    assert np.max(np.abs(m - v @ np.diag(w) @ v.conj().T)) <= 1e-9


def test_eig_hermitian_rejects_non_hermitian():
    with pytest.raises(ValueError):
        eig_hermitian(np.array([[0, 1], [0, 0]]))


def test_entropy_values():
    assert von_neumann_entropy(basis_state("0")) == 0.0
    assert von_neumann_entropy(np.eye(2) / 2) == pytest.approx(1.0, abs=1e-12)
    expected = -(0.25 * np.log2(0.25) + 0.75 * np.log2(0.75))
    assert von_neumann_entropy(diagonal_qubit(0.25)) == pytest.approx(expected, abs=1e-12)
    assert expected == pytest.approx(0.811278, abs=1e-6)


def test_trace_distance_values():
    rho = PLUS
    assert trace_distance(rho, rho) == pytest.approx(0.0, abs=1e-15)
    assert trace_distance(basis_state("0"), basis_state("1")) == pytest.approx(1.0)
    assert trace_distance(basis_state("0"), np.eye(2) / 2) == pytest.approx(0.5)
    with pytest.raises(ValueError):
        trace_distance(np.eye(2) / 2, np.eye(4) / 4)


def test_check_density_matrix_rejects():
    check_density_matrix(maximally_mixed(2))
    with pytest.raises(ValidationError):
        check_density_matrix(np.diag([1.2, -0.2]))
    with pytest.raises(ValidationError):
        check_density_matrix(np.diag([0.5, 0.6]))
    with pytest.raises(ValidationError):
        check_density_matrix(np.array([[0.5, 0.1], [0.0, 0.5]]))
    with pytest.raises(ValidationError):
        check_density_matrix(np.eye(3) / 3)


seeds = st.integers(0, 2**32 - 1)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, n=st.integers(2, 4))
def test_partial_trace_preserves_trace_and_psd(seed, n):
    rng = np.random.default_rng(seed)
    rho = random_density_matrix(rng, n)
    k = int(rng.integers(1, n))
    traced = rng.choice(n, size=k, replace=False)
    red = partial_trace(rho, traced)
    assert abs(np.trace(red) - 1) <= 1e-12
    assert np.max(np.abs(red - red.conj().T)) <= 1e-12
    assert np.linalg.eigvalsh(red)[0] >= -1e-9


@settings(max_examples=60, deadline=None)
@given(seed=seeds, na=st.integers(1, 2), nb=st.integers(1, 2))
def test_tensor_partial_trace_round_trip_and_entropy_additivity(seed, na, nb):
    rng = np.random.default_rng(seed)
    a = random_density_matrix(rng, na)
    b = random_density_matrix(rng, nb)
    ab = tensor(a, b)
    np.testing.assert_allclose(partial_trace(ab, range(na, na + nb)), a, atol=1e-12)
    assert von_neumann_entropy(ab) == pytest.approx(von_neumann_entropy(a) + von_neumann_entropy(b), abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(seed=seeds, n=st.integers(1, 3))
def test_trace_distance_metric_properties(seed, n):
    rng = np.random.default_rng(seed)
    a, b, c = (random_density_matrix(rng, n) for _ in range(3))
    assert trace_distance(a, b) == pytest.approx(trace_distance(b, a), abs=1e-10)
    assert trace_distance(a, c) <= trace_distance(a, b) + trace_distance(b, c) + 1e-10
    assert 0 <= trace_distance(a, b) <= 1 + 1e-12


@settings(max_examples=60, deadline=None)
@given(seed=seeds, n=st.integers(1, 4))
def test_eigenvalues_of_states_sum_to_one(seed, n):
    rho = random_density_matrix(np.random.default_rng(seed), n)
    w, _ = eig_hermitian(rho)
    assert abs(w.sum() - 1) <= 1e-10
    assert np.all(np.diff(w) >= 0)
