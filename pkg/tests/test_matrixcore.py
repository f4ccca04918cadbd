import numpy as np
import numpy.testing as npt
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from isoflow import (
    DimensionMismatchError,
    SingularMatrixError,
    as_square_matrix,
    cayley,
    commutator,
    conjugate_transpose,
    frobenius_inner,
    in_quadratic_algebra,
    spectrum_key,
)

unit_entries = st.floats(-1.0, 1.0, allow_nan=False, allow_infinity=False)


def unit_matrix(n):
    return arrays(dtype=float, shape=(n, n), elements=unit_entries)


# ---------------------------------------------------------------------------
# construction


def test_as_square_matrix_validation():
    with pytest.raises(DimensionMismatchError):
        as_square_matrix(np.zeros((2, 3)))
    with pytest.raises(DimensionMismatchError):
        as_square_matrix(np.zeros((3, 3)), dim=2)
    with pytest.raises(ValueError):
        as_square_matrix([[np.nan, 0.0], [0.0, 1.0]])
    with pytest.raises(ValueError):
        as_square_matrix([[np.inf + 0j, 0.0], [0.0, 1.0]])
    a = as_square_matrix([[1, 2], [3, 4]])
    assert a.dtype.kind == "f"


# ---------------------------------------------------------------------------
# commutator


def test_commutator_self_is_zero(rng):
    a = rng.normal(size=(4, 4))
    npt.assert_array_equal(commutator(a, a), np.zeros((4, 4)))


def test_commutator_hand_case():
    a = np.array([[0.0, 1.0], [0.0, 0.0]])
    b = np.array([[0.0, 0.0], [1.0, 0.0]])
    npt.assert_allclose(commutator(a, b), np.array([[1.0, 0.0], [0.0, -1.0]]), atol=0)


def test_commutator_matches_triple_loop_oracle(rng):
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    b = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    expected = np.zeros((5, 5), dtype=complex)
    for i in range(5):
        for j in range(5):
            for k in range(5):
                expected[i, j] += a[i, k] * b[k, j] - b[i, k] * a[k, j]
    npt.assert_allclose(commutator(a, b), expected, atol=1e-13)


def test_commutator_dimension_mismatch():
    with pytest.raises(DimensionMismatchError):
        commutator(np.eye(2), np.eye(3))


@given(a=unit_matrix(4), b=unit_matrix(4))
def test_commutator_antisymmetry(a, b):
    npt.assert_allclose(commutator(a, b), -commutator(b, a), atol=1e-14)


@given(a=unit_matrix(3), b=unit_matrix(3), c=unit_matrix(3), lam=st.floats(-2, 2))
def test_commutator_bilinearity(a, b, c, lam):
    npt.assert_allclose(
        commutator(a + lam * b, c),
        commutator(a, c) + lam * commutator(b, c),
        atol=1e-12,
    )


def test_jacobi_identity(rng):
    for _ in range(10):
        a, b, c = (rng.uniform(-1, 1, size=(6, 6)) for _ in range(3))
        total = (
            commutator(a, commutator(b, c))
            + commutator(b, commutator(c, a))
            + commutator(c, commutator(a, b))
        )
        assert np.max(np.abs(total)) <= 1e-12


# ---------------------------------------------------------------------------
# conjugate transpose / frobenius


def test_conjugate_transpose_cases(rng):
    npt.assert_array_equal(conjugate_transpose(np.eye(3)), np.eye(3))
    a = np.array([[0.0, 1j], [1j, 0.0]])
    npt.assert_array_equal(conjugate_transpose(a), np.array([[0.0, -1j], [-1j, 0.0]]))
    b = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    npt.assert_array_equal(conjugate_transpose(conjugate_transpose(b)), b)


def test_frobenius_inner_identity_and_positivity(rng):
    assert frobenius_inner(np.eye(5), np.eye(5)) == pytest.approx(5.0)
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    val = frobenius_inner(a, a)
    assert val.imag == pytest.approx(0.0, abs=1e-12)
    assert val.real >= 0


def test_frobenius_inner_matches_entrywise_sum(rng):
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    b = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
    expected = sum(np.conj(a[i, j]) * b[i, j] for i in range(3) for j in range(3))
    assert frobenius_inner(a, b) == pytest.approx(expected, abs=1e-13)
    with pytest.raises(DimensionMismatchError):
        frobenius_inner(np.eye(2), np.eye(3))


# ---------------------------------------------------------------------------
# cayley


def test_cayley_zero_is_identity():
    npt.assert_allclose(cayley(np.zeros((4, 4))), np.eye(4), atol=0)


def test_cayley_skew_hermitian_gives_unitary(rng):
    a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
    a = a - conjugate_transpose(a)
    q = cayley(a)
    npt.assert_allclose(conjugate_transpose(q) @ q, np.eye(5), atol=1e-12)


def test_cayley_quadratic_algebra_to_group(rng):
    # sp(2, R): W^T J + J W = 0 maps to Q^T J Q = J under the transform
    j = np.array([[0.0, -1.0], [1.0, 0.0]])
    w = rng.normal(size=(2, 2))
    w = w - 0.5 * np.trace(w) * np.eye(2)  # sl(2) == sp(2) here
    assert in_quadratic_algebra(w, j, 1e-12)
    q = cayley(w)
    npt.assert_allclose(conjugate_transpose(q) @ j @ q, j, atol=1e-12)


def test_cayley_inverse_pair(rng):
    a = 0.5 * rng.normal(size=(4, 4))
    npt.assert_allclose(cayley(a) @ cayley(-a), np.eye(4), atol=1e-12)


def test_cayley_singular_raises_with_cond():
    a = np.diag([-1.0, 0.0, 2.0])
    with pytest.raises(SingularMatrixError):
        cayley(a)


# ---------------------------------------------------------------------------
# spectrum key


def test_spectrum_key_diagonal_sorted():
    npt.assert_allclose(spectrum_key(np.diag([3.0, 1.0, 2.0])), [1.0, 2.0, 3.0], atol=1e-14)


def test_spectrum_key_rotation_matrix():
    key = spectrum_key(np.array([[0.0, -1.0], [1.0, 0.0]]))
    npt.assert_allclose(key, [-1j, 1j], atol=1e-14)


def test_spectrum_key_similarity_invariant(rng):
    a = rng.normal(size=(6, 6))
    g = np.eye(6) + 0.2 * rng.normal(size=(6, 6))  # well conditioned
    sim = g @ a @ np.linalg.inv(g)
    npt.assert_allclose(spectrum_key(sim), spectrum_key(a), atol=1e-9)


def test_spectrum_key_deterministic(rng):
    a = rng.normal(size=(5, 5))
    k1, k2 = spectrum_key(a), spectrum_key(a.copy())
    npt.assert_array_equal(k1, k2)


def test_spectrum_key_skew_is_exactly_imaginary(rng):
    a = rng.normal(size=(8, 8))
    a = a - a.T
    key = spectrum_key(a)
    npt.assert_array_equal(key.real, np.zeros(8))
    # sorted by (re, im) reduces to sorted imaginary parts
    assert np.all(np.diff(key.imag) >= 0)


# ---------------------------------------------------------------------------
# quadratic algebra membership


def test_in_quadratic_algebra_cases(rng):
    skew = rng.normal(size=(4, 4))
    skew = skew - skew.T
    assert in_quadratic_algebra(skew, np.eye(4), 1e-12)
    w = np.array([[1.0, 0.0], [0.0, -1.0]])
    j = np.array([[0.0, -1.0], [1.0, 0.0]])
    assert in_quadratic_algebra(w, j, 1e-12)
    assert not in_quadratic_algebra(np.eye(2), np.eye(2), 1e-12)
    with pytest.raises(ValueError):
        in_quadratic_algebra(w, j, 0.0)
