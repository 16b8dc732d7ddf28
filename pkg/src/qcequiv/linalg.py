"""Decomplexification maps and small dense eigenproblems.

Matrices are plain numpy arrays. Complex ``n x n`` matrices map to real
``2n x 2n`` matrices by replacing every entry ``a + ib`` with the block
``[[a, -b], [b, a]]``; vectors are flattened as ``(Re z1, Im z1, ...)``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, SingularDecomposition

TAU_EQ = 1e-10
TAU_EIG = 1e-9
TAU_DEG = 1e-8
KAPPA_MAX = 1e10

#: Unitary change of basis taking ``nu(z)`` to ``diag(z, conj(z))``.
DELTA = np.array([[1j, 1.0], [1.0, 1j]]) / np.sqrt(2.0)


def as_square(M, dtype=complex):
    M = np.array(M, dtype=dtype)
    if M.ndim == 0:
        M = M.reshape(1, 1)
    if M.ndim != 2 or M.shape[0] != M.shape[1] or M.shape[0] < 1:
        raise DimensionMismatch(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix has non-finite entries")
    return M


def decomplexify(M):
    """Real ``2n x 2n`` image of a complex ``n x n`` matrix."""
    M = as_square(M)
    n = M.shape[0]
    out = np.empty((2 * n, 2 * n))
    out[0::2, 0::2] = M.real
    out[0::2, 1::2] = -M.imag
    out[1::2, 0::2] = M.imag
    out[1::2, 1::2] = M.real
    return out


def decomplexify_vector(z):
    z = np.asarray(z, dtype=complex).ravel()
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def recomplexify_vector(x):
    """Inverse of :func:`decomplexify_vector` (also works row-wise on 2-D input)."""
    x = np.asarray(x, dtype=float)
    return x[..., 0::2] + 1j * x[..., 1::2]


def commutator(M, N):
    return M @ N - N @ M


def is_hermitian(M, tol=TAU_EQ):
    M = np.asarray(M)
    scale = max(1.0, np.linalg.norm(M))
    return np.linalg.norm(M - M.conj().T) <= tol * scale


def delta_blocks(n):
    """``diag(DELTA, ..., DELTA)`` with ``n`` blocks."""
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    for j in range(n):
        out[2 * j:2 * j + 2, 2 * j:2 * j + 2] = DELTA
    return out


def delta_conjugate(z):
    """Residual of ``diag(z, z*) = DELTA^-1 nu(z) DELTA``; zero up to rounding."""
    lhs = np.diag([z, np.conj(z)])
    rhs = DELTA.conj().T @ decomplexify([[z]]) @ DELTA
    return float(np.linalg.norm(lhs - rhs))


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    degenerate: bool

    def __iter__(self):
        return iter((self.eigenvalues, self.eigenvectors))

    def residual(self, M):
        """Largest ``||M u - lambda u||`` over the eigenpairs."""
        M = np.asarray(M)
        r = M @ self.eigenvectors - self.eigenvectors * self.eigenvalues
        return float(np.max(np.linalg.norm(r, axis=0)))


def fix_phase(v, tol=1e-12):
    """Rotate ``v`` so that its first non-negligible component is real positive."""
    v = np.asarray(v, dtype=complex)
    mags = np.abs(v)
    k = int(np.argmax(mags > tol * mags.max()))
    return v * (np.conj(v[k]) / mags[k])


def _eig2(M):
    a, b = M[0]
    c, d = M[1]
    mean = 0.5 * (a + d)
    disc = np.sqrt((0.5 * (a - d)) ** 2 + b * c)
    big = mean + disc if abs(mean + disc) >= abs(mean - disc) else mean - disc
    det = a * d - b * c
    small = det / big if big != 0 else 0.0
    vals = np.array([big, small], dtype=complex)

    vecs = np.zeros((2, 2), dtype=complex)
    scale = max(abs(a), abs(b), abs(c), abs(d), 1e-300)
    for j, lam in enumerate(vals):
        v1 = np.array([b, lam - a])
        v2 = np.array([lam - d, c])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        if np.linalg.norm(v) <= 1e-14 * scale:
            # M is a multiple of the identity
            v = np.eye(2, dtype=complex)[j]
        vecs[:, j] = v
    return vals, vecs


def _sort_order(vals, scale):
    q = max(scale, 1e-300) * 1e-12
    re = np.round(vals.real / q)
    im = np.round(vals.imag / q)
    return np.lexsort((-im, -re))


def eigenvalues(M):
    """Eigenvalues only, in the same order as :func:`eigendecompose`."""
    M = as_square(M)
    n = M.shape[0]
    if n == 1:
        vals = M[0].copy()
    elif n == 2:
        vals = _eig2(M)[0]
    else:
        vals = np.linalg.eigvals(M)
    return vals[_sort_order(vals, np.linalg.norm(M))]


def eigendecompose(M):
    """Eigenvalues sorted by (Re, Im) descending with unit, phase-fixed eigenvectors.

    2x2 problems use the closed-form quadratic; larger ones go through LAPACK.
    Raises SingularDecomposition when the eigenvector matrix is numerically
    singular (defective input).
    """
    M = as_square(M)
    n = M.shape[0]
    if n == 1:
        vals, vecs = M[0].copy(), np.ones((1, 1), dtype=complex)
    elif n == 2:
        vals, vecs = _eig2(M)
    else:
        vals, vecs = np.linalg.eig(M)
    norm = np.linalg.norm(M)
    order = _sort_order(vals, norm)
    vals, vecs = vals[order], vecs[:, order]
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    vecs = np.column_stack([fix_phase(vecs[:, j]) for j in range(n)])

    if np.linalg.cond(vecs) > KAPPA_MAX:
        raise SingularDecomposition("eigenvector matrix is singular; matrix is not diagonalizable")
    if n > 1:
        gaps = np.abs(vals[:, None] - vals[None, :]) + np.diag(np.full(n, np.inf))
        degenerate = bool(gaps.min() <= TAU_DEG * norm)
    else:
        degenerate = False
    return EigenDecomposition(vals, vecs, degenerate)


def match_multisets(a, b):
    """Largest distance after optimally pairing two equal-length lists of complex numbers."""
    from scipy.optimize import linear_sum_assignment

    a = np.asarray(a, dtype=complex)
    b = np.asarray(b, dtype=complex)
    if a.shape != b.shape:
        raise DimensionMismatch("multisets differ in size")
    cost = np.abs(a[:, None] - b[None, :])
    rows, cols = linear_sum_assignment(cost)
    return float(cost[rows, cols].max())
