"""Fixed-step RK4 integration of linear systems and the commuting-diagram check."""
import csv
import io
from dataclasses import dataclass

import numpy as np

from .errors import StepTooLarge
from .linalg import as_square, decomplexify_vector, eigendecompose

#: Largest admissible ``dt * ||M||_2``.
STABILITY_MARGIN = 0.5


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray  # one row per time step
    kind: str  # "classical" or "quantum"

    @property
    def dt(self):
        return float(self.times[1] - self.times[0]) if self.times.size > 1 else 0.0

    def decomplexified(self):
        if self.kind != "quantum":
            return self
        real = np.empty((self.states.shape[0], 2 * self.states.shape[1]))
        real[:, 0::2] = self.states.real
        real[:, 1::2] = self.states.imag
        return Trajectory(self.times, real, "classical")

    def column_names(self):
        n = self.states.shape[1]
        if self.kind == "quantum":
            return [f"{part}_psi{j + 1}" for j in range(n) for part in ("re", "im")]
        return [f"x{j + 1}" for j in range(n)]

    def to_csv(self):
        """Delimited text, header row then ``t, components...`` per step."""
        rows = self.decomplexified().states
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t"] + self.column_names())
        for t, row in zip(self.times, rows):
            w.writerow([repr(float(t))] + [repr(float(x)) for x in row])
        return buf.getvalue()


def _check_step(M, dt, steps):
    if not dt > 0 or int(steps) != steps or steps < 0:
        raise StepTooLarge("dt must be positive and steps a non-negative integer")
    if dt * np.linalg.norm(M, 2) >= STABILITY_MARGIN:
        raise StepTooLarge(f"dt * ||M|| = {dt * np.linalg.norm(M, 2):.3g} >= {STABILITY_MARGIN}")


def _rk4(M, x0, dt, steps):
    # for a linear system the four stages collapse into one propagator
    I = np.eye(M.shape[0], dtype=M.dtype)
    h = dt * M
    h2 = h @ h
    prop = I + h + h2 / 2 + h2 @ h / 6 + h2 @ h2 / 24
    out = np.empty((steps + 1, x0.size), dtype=np.result_type(M, x0))
    out[0] = x0
    for k in range(steps):
        out[k + 1] = prop @ out[k]
    return out


def integrate_linear(M, x0, dt, steps):
    M = as_square(M, float)
    x0 = np.asarray(x0, dtype=float).ravel()
    if x0.size != M.shape[0]:
        raise ValueError("initial state has the wrong length")
    _check_step(M, dt, steps)
    return Trajectory(dt * np.arange(steps + 1), _rk4(M, x0, dt, steps), "classical")


def integrate_quantum(K, psi0, dt, steps):
    """Integrate ``psi' = K psi`` in complex arithmetic."""
    K = as_square(K)
    psi0 = np.asarray(psi0, dtype=complex).ravel()
    if psi0.size != K.shape[0]:
        raise ValueError("initial state has the wrong length")
    _check_step(K, dt, steps)
    return Trajectory(dt * np.arange(steps + 1), _rk4(K, psi0, dt, steps), "quantum")


def exact_solution(M, x0, times):
    """``exp(t M) x0`` through the eigendecomposition (diagonalizable ``M``)."""
    M = np.asarray(M)
    dec = eigendecompose(M)
    coeff = np.linalg.solve(dec.eigenvectors, np.asarray(x0, dtype=complex))
    t = np.asarray(times)[:, None]
    states = (np.exp(t * dec.eigenvalues[None, :]) * coeff[None, :]) @ dec.eigenvectors.T
    return states if np.iscomplexobj(M) else states.real


def verify_diagram(K, sys, S, psi0, dt, steps):
    """Max over t of ``||X(t) - S D(psi(t))|| / max ||X||`` with ``X(0) = S D(psi0)``.

    ``sys`` is a ClassicalSystem or a real matrix; ``S`` an EquivalenceMap
    (its real representative is used) or a real matrix.
    """
    C = np.asarray(getattr(sys, "companion", sys), dtype=float)
    Sr = np.asarray(getattr(S, "S_real", S), dtype=float)
    quantum = integrate_quantum(K, psi0, dt, steps).decomplexified().states
    X = integrate_linear(C, Sr @ decomplexify_vector(psi0), dt, steps).states
    mapped = quantum @ Sr.T
    scale = np.max(np.linalg.norm(X, axis=1))
    return float(np.max(np.linalg.norm(X - mapped, axis=1)) / scale)

