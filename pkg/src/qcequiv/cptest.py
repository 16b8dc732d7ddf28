"""Classical CP test: overlap of the two decaying eigenvectors of a companion matrix.

All dot products are Hermitian (conjugate-linear in the first argument).
"""
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSpectrum, RealSpectrum
from .linalg import TAU_DEG, as_square, decomplexify, delta_blocks, eigendecompose, fix_phase

#: Verdict threshold on |xi|.
XI_VIOLATION = 1e-8


def hdot(u, v):
    return complex(np.vdot(u, v))


@dataclass(frozen=True)
class ClassicalEigenbasis:
    """Third-quadrant eigenpairs of a real ``4 x 4`` companion matrix.

    ``lambda1`` is the less damped mode (the one matched to K-long).
    """

    w1: np.ndarray
    w2: np.ndarray
    lambda1: complex
    lambda2: complex
    xi: float

    @property
    def W(self):
        """Ordered basis ``(w1, w1*, w2, w2*)``."""
        return np.column_stack([self.w1, self.w1.conj(), self.w2, self.w2.conj()])


def classical_eigenbasis(Chat):
    Chat = as_square(Chat, float)
    if Chat.shape != (4, 4):
        raise ValueError("expected a 4x4 companion matrix")
    dec = eigendecompose(Chat)
    lam, vecs = dec.eigenvalues, dec.eigenvectors
    scale = np.abs(lam).max()
    if np.any(np.abs(lam.imag) <= TAU_DEG * scale):
        raise RealSpectrum("companion matrix has a real eigenvalue")
    lower = np.flatnonzero(lam.imag < 0)
    if lower.size != 2:
        raise RealSpectrum("eigenvalues do not form two conjugate pairs")
    if abs(lam[lower[0]] - lam[lower[1]]) <= TAU_DEG * scale:
        raise DegenerateSpectrum("the two modes share an eigenvalue")
    # less damped first
    lower = sorted(lower, key=lambda k: (-lam[k].real, -lam[k].imag))
    w1, w2 = (fix_phase(vecs[:, k]) for k in lower)
    return ClassicalEigenbasis(w1, w2, complex(lam[lower[0]]), complex(lam[lower[1]]),
                               abs(hdot(w1, w2)))


def compact_eigenvector(lam, Bj, rho, sign=1):
    """Closed-form eigenvector of a commuting two-mode system with mode shapes
    ``(rho, 1)`` (in phase) and ``(-rho, 1)`` (anti-phase).

    ``sign`` is +1 for the in-phase mode and -1 for the anti-phase mode. The
    vector is ``(s rho a*, a*, s rho, 1) / N`` with ``a = lam / Bj``. It is an
    eigenvector because ``a* = 1/lam`` when ``|lam|^2 = Bj``, which holds for
    every underdamped mode of a commuting pair.
    """
    a = lam / Bj
    v = np.array([sign * rho * np.conj(a), np.conj(a), sign * rho, 1.0], dtype=complex)
    return fix_phase(v / compact_norm(Bj, rho))


def compact_norm(Bj, rho):
    """Normalizer ``sqrt((rho^2 + 1)(1 + 1/Bj))``; exact when ``|lam|^2 = Bj``."""
    return np.sqrt((rho * rho + 1.0) * (1.0 + 1.0 / Bj))


def compact_xi(lam1, lam2, B1, B2, rho):
    """``|(1 - rho^2)(1 + lam1 conj(lam2)/(B1 B2))| / (N1 N2)``."""
    n1, n2 = compact_norm(B1, rho), compact_norm(B2, rho)
    return abs((1 - rho * rho) * (1 + lam1 * np.conj(lam2) / (B1 * B2))) / (n1 * n2)


def quantum_basis(Q):
    """``U = nu(Q) blockdiag(DELTA)``: columns ``(u1, u1*, u2, u2*)`` (conjugates up to a
    unit phase) with ``u1.u2 = q1.q2``."""
    Q = as_square(Q)
    return decomplexify(Q) @ delta_blocks(Q.shape[0])


def gramian_check(S, U, W=None):
    """``| |w1.w2| - |u1.u2| |`` for the pair of normalized columns 0 and 2.

    ``S`` is a similarity matrix (or anything exposing ``.S``). Without ``W`` the
    classical columns are ``S U`` renormalized.
    """
    S = getattr(S, "S", S)
    U = np.asarray(U, dtype=complex)
    if W is None:
        W = np.asarray(S) @ U
    W = np.asarray(W, dtype=complex)
    u1, u2 = U[:, 0] / np.linalg.norm(U[:, 0]), U[:, 2] / np.linalg.norm(U[:, 2])
    w1, w2 = W[:, 0] / np.linalg.norm(W[:, 0]), W[:, 2] / np.linalg.norm(W[:, 2])
    return abs(abs(hdot(w1, w2)) - abs(hdot(u1, u2)))


def _first_order_correction(C, G1, lam, w):
    """Solve ``(lam - C) w~ = (G1 - lam1) w`` with ``w.w~ = 0`` by least squares."""
    n = C.shape[0]
    left = np.linalg.eig(C.T)
    # left eigenvector for lam gives the first-order eigenvalue shift
    k = int(np.argmin(np.abs(left[0] - lam)))
    y = left[1][:, k]
    lam1 = (y @ G1 @ w) / (y @ w)
    M = np.vstack([lam * np.eye(n) - C, w.conj()[None, :]])
    rhs = np.concatenate([(G1 - lam1 * np.eye(n)) @ w, [0.0]])
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    return sol


def perturbative_xi(sys, model, g):
    """First-order and exact ``|xi|`` after adding a gyrator of conductance ``g``.

    ``model`` supplies the unit-gyrator generator through ``model.gyrator_unit``
    (the companion perturbation per unit conductance). Returns
    ``(xi_first_order, xi_exact)``.
    """
    C = np.asarray(getattr(sys, "companion", sys), dtype=float)
    if g == 0:
        return 0.0, 0.0
    G1 = model.gyrator_unit
    base = classical_eigenbasis(C)
    corr = [_first_order_correction(C, G1, lam, w)
            for lam, w in ((base.lambda1, base.w1), (base.lambda2, base.w2))]
    first = abs(hdot(base.w1, base.w2)
                + g * (hdot(corr[0], base.w2) + hdot(base.w1, corr[1])))
    exact = classical_eigenbasis(C + g * G1).xi
    return float(first), float(exact)


def cp_verdict(xi, threshold=XI_VIOLATION):
    return "CP violated" if abs(xi) > threshold else "CP conserved"
