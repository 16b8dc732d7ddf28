"""Two-state effective Hamiltonian of neutral kaons.

Natural units (hbar = 1). ``H = M - i Gamma`` with Hermitian ``M`` and
``Gamma``; eigenvalues ``mu = m - i gamma``. The evolution generator used by the
rest of the package is ``K = -i H``.
"""
import cmath
from dataclasses import dataclass

import numpy as np

from .errors import CPTViolation, ZeroOffDiagonal
from .linalg import TAU_EQ, as_square, fix_phase

#: Exact first-order ratio between ``(H12 - H21)/sqrt(H12 H21)`` and epsilon.
EPSILON_APPROX_FACTOR = 0.25

_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


@dataclass(frozen=True)
class KaonParameters:
    mu_S: complex
    mu_L: complex
    epsilon: complex = 0.0

    def __post_init__(self):
        for name in ("mu_S", "mu_L", "epsilon"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if not (self.m_S > 0 and self.m_L > 0):
            raise ValueError("masses must be positive")
        if not self.gamma_L > 0:
            raise ValueError("widths must be positive")
        if self.gamma_S < self.gamma_L:
            raise ValueError("K-short must not decay slower than K-long")
        if not abs(self.epsilon) < 1:
            raise ValueError("|epsilon| must be below 1")

    @classmethod
    def from_masses(cls, m_S, m_L, gamma_S, gamma_L, epsilon=0.0):
        return cls(m_S - 1j * gamma_S, m_L - 1j * gamma_L, epsilon)

    @property
    def m_S(self):
        return self.mu_S.real

    @property
    def m_L(self):
        return self.mu_L.real

    @property
    def gamma_S(self):
        return -self.mu_S.imag

    @property
    def gamma_L(self):
        return -self.mu_L.imag

    @property
    def delta_m(self):
        return self.m_S - self.m_L

    @property
    def delta_gamma(self):
        return self.gamma_S - self.gamma_L

    @property
    def alpha(self):
        """Complex angle with ``exp(i alpha) = (1 - eps)/(1 + eps)``."""
        return -1j * cmath.log((1 - self.epsilon) / (1 + self.epsilon))

    def degenerate(self, tol=TAU_EQ):
        return abs(self.mu_S - self.mu_L) <= tol * max(abs(self.mu_S), abs(self.mu_L))


@dataclass(frozen=True)
class EffectiveHamiltonian:
    H: np.ndarray

    def __post_init__(self):
        H = as_square(self.H)
        if H.shape != (2, 2):
            raise ValueError("kaon Hamiltonian is 2x2")
        object.__setattr__(self, "H", H)

    @property
    def M(self):
        return 0.5 * (self.H + self.H.conj().T)

    @property
    def Gamma(self):
        return 0.5j * (self.H - self.H.conj().T)

    @property
    def K(self):
        return -1j * self.H

    @property
    def dissipative(self):
        """Whether ``Gamma`` is positive semidefinite (no state gains norm).

        Large ``|epsilon|`` with a long-lived K-long can break this; the
        Hamiltonian is still built so that callers can inspect it.
        """
        eig = np.linalg.eigvalsh(self.Gamma)
        return bool(eig.min() >= -TAU_EQ * max(1.0, np.abs(eig).max()))

    @property
    def cpt_invariant(self):
        h = self.H
        return abs(h[0, 0] - h[1, 1]) <= TAU_EQ * max(1.0, np.abs(h).max())

    @property
    def t_invariant(self):
        h = self.H
        return abs(h[0, 1] - h[1, 0]) <= TAU_EQ * max(1.0, np.abs(h).max())


def hamiltonian_from_params(p):
    """``H`` with eigenvalues ``mu_S, mu_L`` and eigenvectors the columns of Q(eps)."""
    mean = 0.5 * (p.mu_S + p.mu_L)
    half = 0.5 * (p.mu_S - p.mu_L)
    r = (1 + p.epsilon) / (1 - p.epsilon)  # exp(-i alpha)
    return EffectiveHamiltonian(np.array([[mean, half * r], [half / r, mean]]))


def _checked_offdiagonal(H):
    if not H.cpt_invariant:
        raise CPTViolation("H11 != H22; epsilon is defined only under CPT")
    h12, h21 = H.H[0, 1], H.H[1, 0]
    if h12 == 0 or h21 == 0:
        raise ZeroOffDiagonal("epsilon needs non-zero off-diagonal elements")
    return h12, h21


def epsilon_from_hamiltonian(H):
    """Exact epsilon, principal square-root branch (cut on the negative real axis)."""
    h12, h21 = _checked_offdiagonal(H)
    a, b = cmath.sqrt(h12), cmath.sqrt(h21)
    return (a - b) / (a + b)


def epsilon_approx(H, calibrated=False):
    """``(H12 - H21)/sqrt(H12 H21)``.

    The root is taken as ``sqrt(H12) sqrt(H21)``, the branch used by
    :func:`epsilon_from_hamiltonian`; the principal root of the product would
    flip sign whenever ``Re(mu_S - mu_L) < 0``. To first order the quotient is
    four times the exact epsilon; ``calibrated=True`` applies
    :data:`EPSILON_APPROX_FACTOR`.
    """
    h12, h21 = _checked_offdiagonal(H)
    value = (h12 - h21) / (cmath.sqrt(h12) * cmath.sqrt(h21))
    return value * EPSILON_APPROX_FACTOR if calibrated else value


def mixing_matrix(epsilon):
    """Columns are the normalized K-short and K-long states."""
    e = complex(epsilon)
    return np.array([[1 + e, 1 + e], [1 - e, -(1 - e)]]) / np.sqrt(2 * (1 + abs(e) ** 2))


def cp_scalar(epsilon):
    """Hermitian product of the two columns of Q(eps): ``2 Re eps / (1 + |eps|^2)``."""
    Q = mixing_matrix(epsilon)
    # columns share the first entry and have opposite second entries
    return complex(abs(Q[0, 0]) ** 2 - abs(Q[1, 0]) ** 2)


def cp_test_quantum(epsilon):
    return abs(cp_scalar(epsilon))


def epsilon_from_xi(xi, phase=np.pi / 4):
    """Invert ``|xi| = 2 |eps| cos(phase) / (1 + |eps|^2)`` for ``|eps| < 1``."""
    c = np.cos(phase)
    xi = abs(xi)
    if xi == 0:
        return 0j
    if c <= 0 or xi > c:
        raise ValueError("no epsilon with this phase reproduces xi")
    r = xi / (c + np.sqrt(c * c - xi * xi))
    return r * cmath.exp(1j * phase)


def eigenstates(H):
    """``(mu_S, mu_L, Q)`` read back from a CPT-invariant Hamiltonian.

    The K-short root is the one with the larger width.
    """
    h = H.H
    mean = 0.5 * (h[0, 0] + h[1, 1])
    root = cmath.sqrt(h[0, 1] * h[1, 0])
    mu1, mu2 = mean + root, mean - root
    if (-mu1.imag) < (-mu2.imag):
        mu1, mu2 = mu2, mu1
    Q = np.empty((2, 2), dtype=complex)
    for j, mu in enumerate((mu1, mu2)):
        v = np.array([h[0, 1], mu - h[0, 0]])
        Q[:, j] = fix_phase(v / np.linalg.norm(v))
    return mu1, mu2, Q


def split_cp_parts(H):
    """``H = H0 + H1 + O(eps^2)`` with symmetric ``H0`` and antisymmetric ``H1``."""
    h12, h21 = _checked_offdiagonal(H)
    h = H.H
    half = cmath.sqrt(h12 * h21)
    if abs(half - h12) > abs(half + h12):
        half = -half
    eps = epsilon_from_hamiltonian(H)
    H0 = np.array([[h[0, 0], half], [half, h[1, 1]]])
    H1 = 2 * eps * half * _J
    return H0, H1
