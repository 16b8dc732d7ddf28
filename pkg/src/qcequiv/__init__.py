"""Classical circuit analogues of two-state quantum systems with CP violation.

Modules:

``linalg``       decomplexification and small eigenproblems
``equivalence``  companion matrices, characteristic polynomials, similarity maps
``kaon``         effective Hamiltonian of the neutral kaon system
``network``      coupled LC tanks with a gyrator: synthesis and analysis
``cptest``       classical and quantum CP test scalars
``sim``          RK4 trajectories and the commuting-diagram check
``cli``          command-line front end
"""
from .equivalence import ClassicalSystem, EquivalenceMap, build_similarity
from .errors import EpsilonPhaseResidual, QCEquivError
from .kaon import KaonParameters, hamiltonian_from_params, mixing_matrix
from .network import CircuitParameters, analyze_network, dualize, synthesize_from_kaon

__all__ = [
    "ClassicalSystem",
    "EquivalenceMap",
    "build_similarity",
    "EpsilonPhaseResidual",
    "QCEquivError",
    "KaonParameters",
    "hamiltonian_from_params",
    "mixing_matrix",
    "CircuitParameters",
    "analyze_network",
    "dualize",
    "synthesize_from_kaon",
]
