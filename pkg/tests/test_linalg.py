import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from strategies import complex_matrices
from qcequiv.errors import DimensionMismatch, SingularDecomposition
from qcequiv.linalg import (
    DELTA,
    as_square,
    commutator,
    decomplexify,
    decomplexify_vector,
    delta_blocks,
    delta_conjugate,
    eigendecompose,
    eigenvalues,
    fix_phase,
    match_multisets,
    recomplexify_vector,
)


def test_scalar_block():
    assert np.array_equal(decomplexify([[2 + 3j]]), [[2, -3], [3, 2]])


def test_identity_maps_to_identity():
    assert np.array_equal(decomplexify(np.eye(3)), np.eye(6))


def test_vector_interleaving():
    assert np.array_equal(decomplexify_vector([1 + 2j, 3 - 4j]), [1, 2, 3, -4])


@given(st.sampled_from([1, 2, 3]).flatmap(lambda n: st.tuples(complex_matrices(n), complex_matrices(n))))
def test_homomorphism(pair):
    M, N = pair
    assert np.allclose(decomplexify(M + N), decomplexify(M) + decomplexify(N), atol=1e-12, rtol=0)
    assert np.allclose(decomplexify(M @ N), decomplexify(M) @ decomplexify(N), atol=1e-11, rtol=0)
    assert np.allclose(decomplexify(commutator(M, N)),
                       commutator(decomplexify(M), decomplexify(N)), atol=1e-10, rtol=0)


@given(complex_matrices(2), st.tuples(st.floats(-5, 5), st.floats(-5, 5)))
def test_matrix_vector_compatible(M, z):
    v = np.array([complex(*z), complex(z[1], -z[0])])
    assert np.allclose(decomplexify(M) @ decomplexify_vector(v), decomplexify_vector(M @ v), atol=1e-12)
    assert np.allclose(recomplexify_vector(decomplexify_vector(v)), v)


@given(st.floats(-100, 100), st.floats(-100, 100))
def test_delta_diagonalizes_blocks(a, b):
    assert delta_conjugate(complex(a, b)) < 1e-12 * max(1.0, abs(complex(a, b)))


def test_delta_is_unitary():
    assert np.allclose(DELTA.conj().T @ DELTA, np.eye(2))
    B = delta_blocks(3)
    assert np.allclose(B.conj().T @ B, np.eye(6))


@given(complex_matrices(2))
def test_spectrum_doubles(K):
    mu = eigenvalues(K)
    # near-defective inputs only resolve eigenvalues to sqrt(machine eps)
    assume(abs(mu[0] - mu[1]) > 1e-3 * max(1.0, np.linalg.norm(K)))
    nu = np.linalg.eigvals(decomplexify(K))
    assert match_multisets(nu, np.concatenate([mu, mu.conj()])) <= 1e-9 * max(1.0, np.abs(mu).max())


@settings(max_examples=200)
@given(st.sampled_from([2, 3, 4]).flatmap(complex_matrices))
def test_eigendecompose_residual(M):
    try:
        dec = eigendecompose(M)
    except SingularDecomposition:
        return
    # eigenvectors of nearly defective matrices are ill-determined
    assume(not dec.degenerate)
    assert dec.residual(M) <= 1e-9 * max(1.0, np.linalg.norm(M))
    assert np.allclose(np.linalg.norm(dec.eigenvectors, axis=0), 1.0)
    re = dec.eigenvalues.real
    assert np.all(np.diff(re) <= 1e-9 * max(1.0, np.linalg.norm(M)))


def test_closed_form_scalar_matrix():
    dec = eigendecompose(3 * np.eye(2))
    assert np.allclose(dec.eigenvalues, [3, 3])
    assert dec.degenerate
    assert np.allclose(dec.eigenvectors, np.eye(2))


def test_closed_form_cancellation():
    # eigenvalues 1e8 and 1e-8: the small root must not be lost
    M = np.array([[1e8, 1.0], [0.0, 1e-8]])
    vals = eigendecompose(M).eigenvalues
    assert abs(vals[1] - 1e-8) < 1e-20


def test_defective_matrix_raises():
    with pytest.raises(SingularDecomposition):
        eigendecompose([[1.0, 1.0], [0.0, 1.0]])


def test_phase_convention():
    v = fix_phase(np.array([1j, 1.0]) / np.sqrt(2))
    assert v[0].imag == 0 and v[0].real > 0


def test_shape_errors():
    with pytest.raises(DimensionMismatch):
        as_square(np.zeros((2, 3)))
    with pytest.raises(DimensionMismatch):
        match_multisets([1, 2], [1])


def test_multiset_order_free():
    assert match_multisets([1, 2j, -3], [-3, 1, 2j]) == 0.0
