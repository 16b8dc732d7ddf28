"""Second-order classical systems, characteristic polynomials and the similarity map.

A classical system ``q'' + A q' + B q = 0`` is carried as its first-order
companion ``[[0, 1], [-B, -A]]``. Two systems are equivalent when the companion
is similar to the decomplexified generator ``nu(K)`` of ``psi' = K psi``.
"""
from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import polynomial as P

from .errors import (
    DimensionMismatch,
    PolynomialMismatch,
    RealEigenvalue,
    SingularDecomposition,
    SingularLeadingCoefficient,
)
from .linalg import KAPPA_MAX, TAU_DEG, as_square, decomplexify, eigendecompose

TAU_POLY = 1e-8
TAU_RESIDUAL = 1e-9

# Laplace expansion is exact but factorial in size; beyond this use eigenvalues.
_MAX_LAPLACE = 6


@dataclass(frozen=True)
class ClassicalSystem:
    A: np.ndarray
    B: np.ndarray
    companion: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        A = as_square(self.A, float)
        B = as_square(self.B, float)
        if A.shape != B.shape:
            raise DimensionMismatch(f"A is {A.shape} but B is {B.shape}")
        m = A.shape[0]
        C = np.zeros((2 * m, 2 * m))
        C[:m, m:] = np.eye(m)
        C[m:, :m] = -B
        C[m:, m:] = -A
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        object.__setattr__(self, "companion", C)

    @property
    def m(self):
        return self.A.shape[0]

    def is_diagonal(self):
        off = ~np.eye(self.m, dtype=bool)
        return not (np.any(self.A[off]) or np.any(self.B[off]))

    def underdamped(self):
        """``4 B_j > A_j**2`` for every mode; only meaningful for diagonal A, B."""
        a, b = np.diag(self.A), np.diag(self.B)
        return bool(np.all(4 * b > a * a))


def companion(A, B):
    return ClassicalSystem(A, B)


def reduce_second_order(A2, A1, A0):
    """Reduce ``A2 q'' + A1 q' + A0 q = 0`` to ``q'' + A q' + B q = 0``.

    Both lower coefficients are divided by ``A2`` so that the reduced system
    has the same solutions as the original.
    """
    A2 = as_square(A2, float)
    A1 = as_square(A1, float)
    A0 = as_square(A0, float)
    if not (A2.shape == A1.shape == A0.shape):
        raise DimensionMismatch("coefficient matrices differ in size")
    if np.linalg.cond(A2) > KAPPA_MAX:
        raise SingularLeadingCoefficient("leading coefficient A2 is singular")
    return ClassicalSystem(np.linalg.solve(A2, A1), np.linalg.solve(A2, A0))


def _poly_det(entries):
    """Determinant of a matrix of polynomials (ascending coefficient arrays)."""
    m = len(entries)
    if m == 1:
        return np.asarray(entries[0][0])
    total = np.zeros(1, dtype=np.result_type(*[e for row in entries for e in row]))
    for j in range(m):
        minor = [row[:j] + row[j + 1:] for row in entries[1:]]
        term = P.polymul(entries[0][j], _poly_det(minor))
        total = P.polyadd(total, term) if j % 2 == 0 else P.polysub(total, term)
    return total


def _descending(coeffs, degree):
    out = np.zeros(degree + 1, dtype=np.asarray(coeffs).dtype)
    c = np.asarray(coeffs)[: degree + 1]
    out[: c.size] = c
    return out[::-1]


def char_poly(M):
    """Coefficients of ``det(z I - M)``, highest power first."""
    M = as_square(M, np.asarray(M).dtype if np.iscomplexobj(M) else float)
    n = M.shape[0]
    if n > _MAX_LAPLACE:
        return np.poly(M)
    entries = [[np.array([-M[i, j], float(i == j)]) for j in range(n)] for i in range(n)]
    return _descending(_poly_det(entries), n)


def char_poly_classical(sys):
    """Coefficients of ``det(z^2 + A z + B)``, highest power first (degree 2m)."""
    m = sys.m
    if m > _MAX_LAPLACE:
        return np.real_if_close(np.poly(sys.companion)).real
    entries = [[np.array([sys.B[i, j], sys.A[i, j], float(i == j)]) for j in range(m)]
               for i in range(m)]
    return _descending(_poly_det(entries), 2 * m)


def char_poly_decomplexified(K):
    """Real coefficients of ``p_K(z) * conj(p_K)(z)``, the polynomial of ``nu(K)``."""
    K = as_square(K)
    pk = char_poly(K)
    prod = np.polymul(pk, np.conj(pk))
    if np.max(np.abs(prod.imag)) > 1e-12 * max(1.0, np.max(np.abs(prod))):
        raise AssertionError("conjugate product is not real")
    return prod.real


def poly_mismatch(p, q):
    p, q = np.asarray(p), np.asarray(q)
    if p.shape != q.shape:
        return np.inf
    return float(np.max(np.abs(p - q)) / max(1.0, np.max(np.abs(q))))


def identify_eigen_coefficients(lam, tol=TAU_DEG):
    """Damping and stiffness ``(-2 Re lam, |lam|^2)`` of the mode carrying ``lam``."""
    lam = complex(lam)
    if abs(lam.imag) <= tol * max(abs(lam), 1e-300):
        raise RealEigenvalue(f"eigenvalue {lam} is real; no oscillatory mode")
    return -2.0 * lam.real, abs(lam) ** 2


@dataclass(frozen=True)
class EquivalenceMap:
    """``C = S nu(K) S^-1`` with ``det S = 1``.

    ``S_real`` is the real map with ``|det| = 1`` and ``S = phase * S_real``.
    The sign of ``det`` is the same for every real similarity between the two
    matrices; when it is negative (always the case for two coupled modes in
    ``(q, q')`` ordering) unit determinant needs the complex scalar ``phase``.
    States are mapped with ``S_real``.

    ``P`` brings the classical matrix to real Jordan form and ``Q`` holds the
    quantum eigenvectors; ``eigenvalues`` is the ordering shared by both.
    """

    S: np.ndarray
    S_real: np.ndarray
    phase: complex
    P: np.ndarray
    Q: np.ndarray
    eigenvalues: np.ndarray
    residual: float

    @property
    def orientation(self):
        """Sign of the determinant of every real similarity."""
        return 1 if self.phase == 1 else -1

    def to_classical(self, upsilon):
        return self.S_real @ np.asarray(upsilon)

    def to_quantum(self, X):
        return np.linalg.solve(self.S_real, np.asarray(X))


def _target_matrix(sys):
    if isinstance(sys, ClassicalSystem):
        return sys.companion, char_poly_classical(sys)
    C = as_square(sys, float)
    return C, char_poly(C)


def build_similarity(K, sys):
    """Construct ``S = P nu(Q)^-1`` mapping ``psi' = K psi`` onto ``sys``.

    ``sys`` is a :class:`ClassicalSystem` or any real ``2n x 2n`` matrix.
    """
    K = as_square(K)
    n = K.shape[0]
    C, p_cl = _target_matrix(sys)
    if C.shape[0] != 2 * n:
        raise DimensionMismatch(f"classical matrix is {C.shape}, quantum system has {n} states")

    p_q = char_poly_decomplexified(K)
    mismatch = poly_mismatch(p_cl, p_q)
    if mismatch > TAU_POLY:
        raise PolynomialMismatch(f"characteristic polynomials differ (relative {mismatch:.3e})")

    quantum = eigendecompose(K)
    lam = quantum.eigenvalues
    scale = max(np.abs(lam).max(), 1e-300)
    if np.any(np.abs(lam.imag) <= TAU_DEG * scale):
        raise SingularDecomposition("K has a real eigenvalue; nu(K) is degenerate")
    doubled = np.concatenate([lam, lam.conj()])
    gaps = np.abs(doubled[:, None] - doubled[None, :]) + np.diag(np.full(2 * n, np.inf))
    if gaps.min() <= TAU_DEG * scale:
        raise SingularDecomposition("nu(K) has a repeated eigenvalue")

    classical = eigendecompose(C)
    picked = [int(np.argmin(np.abs(classical.eigenvalues - l))) for l in lam]
    if len(set(picked)) != n:
        raise SingularDecomposition("could not pair classical and quantum eigenvalues")

    Pm = np.empty((2 * n, 2 * n))
    for j, k in enumerate(picked):
        w = classical.eigenvectors[:, k]
        Pm[:, 2 * j] = w.real
        Pm[:, 2 * j + 1] = -w.imag
    if np.linalg.cond(Pm) > KAPPA_MAX:
        raise SingularDecomposition("classical real Jordan basis is singular")

    S_real = Pm @ np.linalg.inv(decomplexify(quantum.eigenvectors))
    det = np.linalg.det(S_real)
    S_real = S_real / abs(det) ** (1.0 / (2 * n))
    phase = 1.0 + 0j if det > 0 else np.exp(1j * np.pi / (2 * n))
    S = phase * S_real if det < 0 else S_real

    nuK = decomplexify(K)
    residual = np.linalg.norm(C - S @ nuK @ np.linalg.inv(S)) / np.linalg.norm(C)
    return EquivalenceMap(S, S_real, phase, Pm, quantum.eigenvectors, lam, float(residual))


def system_from_eigenvalues(lams):
    """Diagonal classical system whose modes carry the given complex eigenvalues."""
    coeffs = [identify_eigen_coefficients(l) for l in lams]
    A = np.diag([c[0] for c in coeffs])
    B = np.diag([c[1] for c in coeffs])
    return ClassicalSystem(A, B)
