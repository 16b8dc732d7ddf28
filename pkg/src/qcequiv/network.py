"""Two coupled LC tanks with a G-L interaction and a gyrator.

Node voltages ``v`` obey ``v'' + alpha v' + (Omega^2 + beta) v = 0`` where
``alpha = D (G + G_gyr)``, ``beta = D L^-1`` and ``D = diag(1/C1, 1/C2)``.
The interaction is a Pi network: ``Ga, La`` to ground at node 1, ``Gb, Lb``
at node 2 and ``Gc, Lc`` between them. An open branch has ``L = inf``.
"""
import configparser
import io
import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import brentq

from .cptest import classical_eigenbasis
from .equivalence import ClassicalSystem
from .errors import (
    ConstraintViolation,
    EpsilonPhaseResidual,
    InfeasibleSpectrum,
    OverdampedMode,
    RealSpectrum,
)
from .kaon import KaonParameters, cp_test_quantum, epsilon_from_xi
from .linalg import TAU_EQ

#: Phase of epsilon assumed when only |epsilon| can be set (|Re eps| = |Im eps|).
PHASE_CONVENTION = math.pi / 4

_FIELDS = ("c1", "c2", "l1", "l2", "ga", "gb", "gc", "la", "lb", "lc", "g")
_J = np.array([[0.0, 1.0], [-1.0, 0.0]])


def _inv(x):
    return 0.0 if math.isinf(x) else 1.0 / x


def _close(a, b, tol=TAU_EQ):
    if math.isinf(a) or math.isinf(b):
        return a == b
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


@dataclass(frozen=True)
class CircuitParameters:
    c1: float
    c2: float
    l1: float
    l2: float
    ga: float = 0.0
    gb: float = 0.0
    gc: float = 0.0
    la: float = math.inf
    lb: float = math.inf
    lc: float = math.inf
    g: float = 0.0
    #: True for the dual (Z-type, R-C interaction) reading of the same numbers.
    dual: bool = field(default=False, compare=True)

    def __post_init__(self):
        for name in _FIELDS:
            value = float(getattr(self, name))
            if math.isnan(value) or value < 0:
                raise ConstraintViolation(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, value)
        for name in ("c1", "c2", "l1", "l2"):
            value = getattr(self, name)
            if not (0 < value < math.inf):
                raise ConstraintViolation(f"{name} must be positive and finite")
        for name in ("la", "lb", "lc"):
            if getattr(self, name) == 0:
                raise ConstraintViolation(f"{name} must be positive (use inf for open)")
        for name in ("ga", "gb", "gc", "g"):
            if math.isinf(getattr(self, name)):
                raise ConstraintViolation(f"{name} must be finite")

    @property
    def omega_tanks(self):
        return np.array([1 / math.sqrt(self.c1 * self.l1), 1 / math.sqrt(self.c2 * self.l2)])

    @property
    def rho(self):
        """Mode-shape ratio ``sqrt(C2/C1)``."""
        return math.sqrt(self.c2 / self.c1)

    def is_cpt(self):
        return _close(self.c1 * self.l1, self.c2 * self.l2)

    def is_symmetric(self):
        return (_close(self.c1, self.c2) and _close(self.l1, self.l2)
                and _close(self.ga, self.gb) and _close(self.la, self.lb))

    def is_dualizable(self):
        return self.is_symmetric() and _close(self.c1, self.l1) and _close(self.c2, self.l2)

    def with_g(self, g):
        return replace(self, g=g)

    def to_text(self):
        cp = configparser.ConfigParser()
        cp["circuit"] = {name: repr(getattr(self, name)) for name in _FIELDS}
        buf = io.StringIO()
        cp.write(buf)
        return buf.getvalue()

    @classmethod
    def from_mapping(cls, section):
        keys = {k.lower() for k in section}
        missing = [k for k in _FIELDS if k not in keys]
        extra = sorted(keys - set(_FIELDS))
        if missing or extra:
            raise ConstraintViolation(f"circuit fields missing {missing} / unknown {extra}")
        try:
            values = {k: float(section[k]) for k in _FIELDS}
        except ValueError as exc:
            raise ConstraintViolation(f"bad circuit value: {exc}") from None
        return cls(**values)

    @classmethod
    def from_text(cls, text):
        cp = configparser.ConfigParser()
        try:
            cp.read_string(text)
        except configparser.Error as exc:
            raise ConstraintViolation(f"unreadable circuit file: {exc}") from None
        if not cp.has_section("circuit"):
            raise ConstraintViolation("circuit file needs a [circuit] section")
        return cls.from_mapping(cp["circuit"])


@dataclass(frozen=True)
class AdmittanceModel:
    """Coefficient matrices of the node equations.

    ``omega2`` holds the squared tank frequencies ``1/(L_j C_j)``.
    """

    alpha: np.ndarray
    beta: np.ndarray
    alpha_g: np.ndarray
    omega2: np.ndarray
    D: np.ndarray

    @property
    def omega_o(self):
        if not _close(self.omega2[0], self.omega2[1]):
            raise ConstraintViolation("tanks are not tuned to a common frequency")
        return math.sqrt(self.omega2[0])

    @property
    def gyrator_unit(self):
        """Companion perturbation per unit gyrator conductance."""
        out = np.zeros((4, 4))
        out[2:, 2:] = -self.D @ _J
        return out


def admittance_model(c, require_cpt=False, require_symmetric=False):
    if require_cpt and not c.is_cpt():
        raise ConstraintViolation("C1 L1 != C2 L2")
    if require_symmetric and not c.is_symmetric():
        raise ConstraintViolation("circuit is not in symmetric mode")
    # the dual reads the tank inductances as capacitances
    caps = (c.l1, c.l2) if c.dual else (c.c1, c.c2)
    D = np.diag([1 / caps[0], 1 / caps[1]])
    G = np.array([[c.ga + c.gc, -c.gc], [-c.gc, c.gb + c.gc]])
    ia, ib, ic = _inv(c.la), _inv(c.lb), _inv(c.lc)
    Linv = np.array([[ia + ic, -ic], [-ic, ib + ic]])
    return AdmittanceModel(
        alpha=D @ G,
        beta=D @ Linv,
        alpha_g=c.g * D @ _J,
        omega2=1 / np.array([c.c1 * c.l1, c.c2 * c.l2]),
        D=D,
    )


def classical_system(model):
    return ClassicalSystem(model.alpha, np.diag(model.omega2) + model.beta)


def gyrator_matrix(model):
    out = np.zeros((4, 4))
    out[2:, 2:] = -model.alpha_g
    return out


def add_gyrator(sys, model):
    return sys.companion + gyrator_matrix(model)


def nonreciprocal_system(c):
    """Companion matrix of the full circuit, gyrator included."""
    model = admittance_model(c)
    return add_gyrator(classical_system(model), model)


def interaction_admittance(c, s):
    """``Y(s)`` of the interaction two-port (Pi network plus gyrator)."""
    s = complex(s)
    ya = c.ga + _inv(c.la) / s
    yb = c.gb + _inv(c.lb) / s
    yc = c.gc + _inv(c.lc) / s
    return np.array([[ya + yc, -yc + c.g], [-yc - c.g, yb + yc]])


def port_matrix(c, s):
    """Total nodal admittance: tanks plus interaction."""
    s = complex(s)
    tanks = np.diag([s * c.c1 + 1 / (s * c.l1), s * c.c2 + 1 / (s * c.l2)])
    return tanks + interaction_admittance(c, s)


def impedance_matrix(c, s):
    return np.linalg.inv(port_matrix(c, s))


def is_reciprocal(c, samples=(1j, 0.5 + 2j, 3.0 - 1j), tol=TAU_EQ):
    for s in samples:
        y = interaction_admittance(c, s)
        if abs(y[0, 1] - y[1, 0]) > tol * max(1.0, np.abs(y).max()):
            return False
    return True


def epsilon_circuit(c, omega_o=None):
    """``(y21 - y12)/sqrt(y12 y21)`` of the interaction at ``s = -i omega_o``."""
    if c.g == 0:
        return 0j
    w = admittance_model(c).omega_o if omega_o is None else omega_o
    y = interaction_admittance(c, -1j * w)
    return complex((y[1, 0] - y[0, 1]) / np.sqrt(y[0, 1] * y[1, 0]))


def epsilon_circuit_first_order(c, omega_o=None):
    """``-2 g / (Gc + i/(omega_o Lc))``."""
    if c.g == 0:
        return 0j
    w = admittance_model(c).omega_o if omega_o is None else omega_o
    return complex(-2 * c.g / (c.gc + 1j * _inv(c.lc) / w))


# --- synthesis -----------------------------------------------------------


def _target_quartic(p):
    """``(z^2 + 2 gS z + |muS|^2)(z^2 + 2 gL z + |muL|^2)``, highest power first."""
    s = [1.0, 2 * p.gamma_S, abs(p.mu_S) ** 2]
    l_ = [1.0, 2 * p.gamma_L, abs(p.mu_L) ** 2]
    return np.polymul(s, l_)


def _mode_coefficients(p, h):
    """Damping/stiffness ``(a_L, b_L, a_S, b_S)`` of a reciprocal symmetric core
    whose companion, after adding ``h J`` to its damping, has the kaon spectrum.

    The gyrator adds exactly ``h^2 z^2`` to the characteristic polynomial of a
    symmetric circuit, so the core must carry ``target - h^2 z^2``.
    """
    if h == 0:
        return 2 * p.gamma_L, abs(p.mu_L) ** 2, 2 * p.gamma_S, abs(p.mu_S) ** 2
    quartic = _target_quartic(p)
    quartic[2] -= h * h
    roots = np.roots(quartic)
    upper = roots[roots.imag > 0]
    if upper.size != 2 or np.any(np.abs(roots.imag) <= 1e-12 * np.abs(roots).max()):
        raise InfeasibleSpectrum("gyrator too strong: core would need a real mode")
    pairs = sorted(((-2 * r.real, abs(r) ** 2) for r in upper), key=lambda ab: ab[0])
    (aL, bL), (aS, bS) = pairs
    return aL, bL, aS, bS


def _core_circuit(p, omega_o, C, h):
    aL, bL, aS, bS = _mode_coefficients(p, h)
    inv_tau_c = 0.5 * (aS - aL)
    omega_c2 = 0.5 * (bS - bL)
    omega_a2 = bL - omega_o * omega_o
    scale = max(1.0, bS)
    if inv_tau_c < -TAU_EQ * max(1.0, aS) or omega_c2 < -TAU_EQ * scale:
        raise InfeasibleSpectrum("K-short must have the larger width and larger |mu|")
    if omega_a2 < -TAU_EQ * scale:
        raise InfeasibleSpectrum(f"omega_o = {omega_o} exceeds the K-long stiffness")
    inv_tau_c, omega_c2, omega_a2 = max(inv_tau_c, 0.0), max(omega_c2, 0.0), max(omega_a2, 0.0)
    la = math.inf if omega_a2 == 0 else 1 / (C * omega_a2)
    lc = math.inf if omega_c2 == 0 else 1 / (C * omega_c2)
    l0 = 1 / (C * omega_o * omega_o)
    return CircuitParameters(
        c1=C, c2=C, l1=l0, l2=l0,
        ga=C * aL, gb=C * aL, gc=C * inv_tau_c,
        la=la, lb=la, lc=lc, g=C * h,
    )


def _circuit_xi(p, omega_o, C, g):
    return classical_eigenbasis(nonreciprocal_system(_core_circuit(p, omega_o, C, g / C))).xi


def _solve_gyrator(p, omega_o, C, target):
    """Smallest ``g`` whose compensated circuit has classical ``|xi| = target``."""
    f = lambda g: _circuit_xi(p, omega_o, C, g) - target
    # initial guess from the slope at small g
    probe = 1e-6 * C * max(p.gamma_S, 1e-300)
    slope = _circuit_xi(p, omega_o, C, probe) / probe
    if slope <= 0:
        raise InfeasibleSpectrum("gyrator does not split the modes of this circuit")
    lo, hi = 0.0, 1.5 * target / slope
    for _ in range(60):
        try:
            if f(hi) > 0:
                break
        except (InfeasibleSpectrum, RealSpectrum):
            hi = 0.5 * (lo + hi)
            continue
        lo, hi = hi, 2 * hi
    else:
        raise InfeasibleSpectrum("no gyrator conductance reaches the requested |xi|")
    return brentq(f, lo, hi, xtol=1e-16 * max(hi, 1e-300), rtol=4 * np.finfo(float).eps,
                  maxiter=200)


def synthesize_from_kaon(p, omega_o=1.0, C=1.0, phase=PHASE_CONVENTION):
    """Symmetric circuit whose companion matrix is similar to ``nu(-i H)``.

    Damping and stiffness of the two modes reproduce ``-i mu_S`` and ``-i mu_L``
    exactly. The gyrator conductance is the one real knob left; it is chosen so
    that the classical ``|xi|`` equals the quantum ``|S.L|`` of an epsilon with
    modulus ``|p.epsilon|`` and the conventional ``phase``.
    """
    if not (omega_o > 0 and C > 0):
        raise ConstraintViolation("gauge parameters omega_o and C must be positive")
    eps = p.epsilon
    # |xi| sees the phase only through |cos(arg eps)|
    if eps != 0 and abs(abs(math.cos(np.angle(eps))) - abs(math.cos(phase))) > 1e-9:
        warnings.warn(
            f"epsilon phase {np.angle(eps):.6g} differs from the attainable {phase:.6g}; "
            "only |epsilon| is matched",
            EpsilonPhaseResidual,
            stacklevel=2,
        )
    circuit = _core_circuit(p, omega_o, C, 0.0)
    if eps == 0:
        return circuit
    if p.degenerate():
        raise InfeasibleSpectrum("degenerate spectrum cannot carry CP violation")
    target = cp_test_quantum(abs(eps) * np.exp(1j * phase))
    g = _solve_gyrator(p, omega_o, C, target)
    return _core_circuit(p, omega_o, C, g / C)


def _third_quadrant_pair(Chat):
    lam = np.linalg.eigvals(Chat)
    scale = np.abs(lam).max()
    if np.any(np.abs(lam.imag) <= 1e-12 * scale):
        raise OverdampedMode("circuit has an overdamped mode (real eigenvalue)")
    lower = lam[lam.imag < 0]
    return sorted(lower, key=lambda z: -z.real)  # less damped first


def modal_coefficients(c):
    """Damping and stiffness of the in-phase and anti-phase modes of a symmetric circuit."""
    m = admittance_model(c)
    B = np.diag(m.omega2) + m.beta
    out = []
    for v in (np.array([1.0, 1.0]), np.array([1.0, -1.0])):
        out.append((v @ m.alpha @ v / 2, v @ B @ v / 2))
    return out


def analyze_network(c, phase=PHASE_CONVENTION):
    """Kaon parameters carried by a circuit, plus diagnostic residuals.

    Masses and widths come from the exact eigenvalues ``-gamma - i m`` of the
    full companion matrix; ``|epsilon|`` from the classical ``|xi|`` read with
    the conventional phase. Without a gyrator epsilon is exactly zero.
    """
    model = admittance_model(c)
    Chat = add_gyrator(classical_system(model), model)
    lamL, lamS = _third_quadrant_pair(Chat)
    if c.is_symmetric():
        modes = modal_coefficients(c)
    else:
        modes = [(model.alpha[j, j], model.omega2[j] + model.beta[j, j]) for j in range(2)]
    for a, b in modes:
        if 4 * b <= a * a:
            raise OverdampedMode("4 B_j <= A_j^2 for a circuit mode")
    first = sorted((complex(-a / 2, -math.sqrt(b)) for a, b in modes), key=lambda z: -z.real)
    residual = max(abs(f - e) / abs(e) for f, e in zip(first, (lamL, lamS)))

    xi = classical_eigenbasis(Chat).xi
    try:
        # a reciprocal interaction has epsilon = 0 identically
        eps = 0j if c.g == 0 else epsilon_from_xi(xi, phase)
    except ValueError:
        raise InfeasibleSpectrum(f"|xi| = {xi} is beyond any |epsilon| < 1") from None
    try:
        w = model.omega_o
        eps_c, eps_1 = epsilon_circuit(c, w), epsilon_circuit_first_order(c, w)
    except ConstraintViolation:
        eps_c = eps_1 = complex("nan")
    params = KaonParameters(1j * lamS, 1j * lamL, eps)
    residuals = {
        "first_order_residual": float(residual),
        "lambda_L": complex(lamL),
        "lambda_S": complex(lamS),
        "xi": float(xi),
        "epsilon_circuit": eps_c,
        "epsilon_first_order": eps_1,
    }
    return params, residuals


def synthesis_residuals(p, c, phase=PHASE_CONVENTION):
    """How well a circuit reproduces ``p``: spectrum error, |xi| error, epsilon phase gap."""
    lamL, lamS = _third_quadrant_pair(nonreciprocal_system(c))
    spec = max(abs(1j * lamS - p.mu_S) / abs(p.mu_S), abs(1j * lamL - p.mu_L) / abs(p.mu_L))
    xi = classical_eigenbasis(nonreciprocal_system(c)).xi
    target = cp_test_quantum(abs(p.epsilon) * np.exp(1j * phase))
    phase_gap = 0.0 if p.epsilon == 0 else abs(abs(math.cos(np.angle(p.epsilon))) - abs(math.cos(phase)))
    return {
        "spectrum": float(spec),
        "xi": float(abs(xi - target)),
        "xi_quantum": float(cp_test_quantum(p.epsilon)),
        "epsilon_phase": phase_gap,
        "omega_c_tau_c": coupling_product(c),
    }


def coupling_product(c):
    """``omega_c tau_c = sqrt(1/(C Lc)) * C/Gc`` (``inf`` when ``Gc = 0``)."""
    if c.gc == 0:
        return math.inf
    return math.sqrt(_inv(c.lc) / c.c1) * c.c1 / c.gc


def dualize(c):
    """Dual network: tank C and L swap roles; interaction and gyrator keep their values."""
    if not c.is_dualizable():
        raise ConstraintViolation("duality needs symmetric mode with C_j = L_j")
    return replace(c, c1=c.l1, c2=c.l2, l1=c.c1, l2=c.c2, dual=not c.dual)


def kaon_with_coupling_constraint(gamma_S, gamma_L, m_L, epsilon=0.0, omega_o=1.0, C=1.0,
                                  phase=PHASE_CONVENTION):
    """Kaon parameters with ``m_S`` chosen so the synthesized circuit has ``omega_c tau_c = sqrt 2``."""

    def build(m_S):
        return KaonParameters.from_masses(m_S, m_L, gamma_S, gamma_L, epsilon)

    closed = m_L ** 2 + gamma_L ** 2 - gamma_S ** 2 + 4 * (gamma_S - gamma_L) ** 2
    if closed <= 0:
        raise InfeasibleSpectrum("no positive K-short mass meets the coupling constraint")
    m0 = math.sqrt(closed)
    if epsilon == 0:
        return build(m0)

    def f(m_S):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EpsilonPhaseResidual)
            c = synthesize_from_kaon(build(m_S), omega_o, C, phase)
        return coupling_product(c) - math.sqrt(2)

    span = 1e-3 * m0
    for _ in range(20):
        lo, hi = max(m0 - span, 1e-12), m0 + span
        try:
            if f(lo) * f(hi) < 0:
                break
        except InfeasibleSpectrum:
            pass
        span *= 2
    else:
        raise InfeasibleSpectrum("could not bracket the coupling constraint")
    return build(brentq(f, lo, hi, xtol=1e-15 * m0, rtol=4 * np.finfo(float).eps))

