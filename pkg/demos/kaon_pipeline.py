"""Walk a kaon-scale parameter set through the whole pipeline.

Run with ``python3 demos/kaon_pipeline.py``.
"""
import numpy as np

from qcequiv.cptest import classical_eigenbasis, gramian_check, quantum_basis
from qcequiv.equivalence import build_similarity
from qcequiv.kaon import cp_test_quantum, hamiltonian_from_params
from qcequiv.network import (
    analyze_network,
    coupling_product,
    kaon_with_coupling_constraint,
    nonreciprocal_system,
    synthesize_from_kaon,
)
from qcequiv.sim import verify_diagram

OMEGA_O = 4.0

# K-short lives 500 times shorter than K-long; |epsilon| = 1e-3
p = kaon_with_coupling_constraint(1.0, 0.002, 5.0, 1e-3 * np.exp(1j * np.pi / 4), omega_o=OMEGA_O)
print(f"kaon:    m_S={p.m_S:.6f} m_L={p.m_L:.6f} gamma_S={p.gamma_S} gamma_L={p.gamma_L}")
print(f"         epsilon={p.epsilon:.3e}  quantum |S.L|={cp_test_quantum(p.epsilon):.6e}")

c = synthesize_from_kaon(p, omega_o=OMEGA_O)
print(f"circuit: Ga={c.ga:.6g} Gc={c.gc:.6g} La={c.la:.6g} Lc={c.lc:.6g} g={c.g:.6g}")
print(f"         omega_c tau_c = {coupling_product(c):.12f}")

back, res = analyze_network(c)
print(f"analyze: |epsilon|={abs(back.epsilon):.6e}  circuit formula={res['epsilon_circuit']:.3e}")

K = hamiltonian_from_params(p).K
Chat = nonreciprocal_system(c)
cert = build_similarity(K, Chat)
basis = classical_eigenbasis(Chat)
print(f"cptest:  |w1.w2|={basis.xi:.6e}  gramian gap="
      f"{gramian_check(cert, quantum_basis(cert.Q), basis.W):.1e}")
print(f"         det S={complex(np.linalg.det(cert.S)):.12f}  residual={cert.residual:.1e}")

dt = 1e-3 / p.gamma_S
dev = verify_diagram(K, Chat, cert, [1, 0], dt, int(round(5 / p.gamma_S / dt)))
print(f"verify:  max relative deviation over five K-short lifetimes {dev:.1e}")
