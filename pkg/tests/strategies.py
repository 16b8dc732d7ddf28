"""Hypothesis strategies shared by the test modules."""
import math

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from qcequiv.kaon import KaonParameters
from qcequiv.network import CircuitParameters

EPS_PHASE = math.pi / 4

# entries near underflow trip LAPACK itself; flush them to zero
finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False).map(
    lambda x: 0.0 if abs(x) < 1e-8 else x)


def complex_matrices(n):
    return st.tuples(arrays(np.float64, (n, n), elements=finite),
                     arrays(np.float64, (n, n), elements=finite)).map(lambda ri: ri[0] + 1j * ri[1])


@st.composite
def symmetric_circuits(draw, g=None, dualizable=False, lossy=False):
    """Random symmetric-mode circuits with underdamped modes."""
    C = draw(st.floats(0.5, 2.0))
    L = C if dualizable else draw(st.floats(0.2, 2.0))
    omega2 = 1.0 / (L * C)
    ga = draw(st.floats(0.01 if lossy else 0.0, 0.3)) * C * math.sqrt(omega2)
    gc = draw(st.floats(0.01, 0.3)) * C * math.sqrt(omega2)
    la = 1.0 / (C * omega2 * draw(st.floats(0.05, 2.0)))
    lc = 1.0 / (C * omega2 * draw(st.floats(0.05, 2.0)))
    gyr = draw(st.floats(0.0, 0.2)) * C * math.sqrt(omega2) if g is None else g
    return CircuitParameters(C, C, L, L, ga, ga, gc, la, la, lc, gyr)


@st.composite
def feasible_kaons(draw, max_eps=1e-2):
    """Kaon parameters whose synthesized circuit exists with omega_o = 0.8 m_L."""
    gamma_L = draw(st.floats(0.01, 0.5))
    gamma_S = gamma_L * draw(st.floats(1.5, 50.0))
    m_L = max(1.0, 3 * gamma_S) * draw(st.floats(1.0, 3.0))
    # K-short stiffness above K-long's
    stiff = m_L ** 2 + gamma_L ** 2 + draw(st.floats(0.1, 3.0)) * gamma_S ** 2
    m_S = math.sqrt(stiff - gamma_S ** 2)
    mod = draw(st.floats(1e-4, max_eps))
    return KaonParameters.from_masses(m_S, m_L, gamma_S, gamma_L, mod * np.exp(1j * EPS_PHASE))
