"""Numerical verification of the operator extension of strong subadditivity.

Modules:
    tensor_core   partial trace, embedding, support-restricted log, hermitization
    states        seeded test states, projectors, Weyl basis, state files
    modular       modular Hamiltonians, the SSA operator T_C, twirl, proof-step checks, witness
    perspective   multiplication superoperators, perspectives, quasi-entropy, joint convexity
    cli           verification campaigns (python -m operator_ssa)
"""

from .config import ToleranceConfig
from .errors import OperatorSSAError
from .modular import (
    conditional_mutual_information,
    convexity_chain_check,
    modular_hamiltonian,
    proof_step_check,
    restricted_trace_witness,
    ssa_operator,
    twirl_A,
)
from .perspective import (
    joint_convexity_trial,
    left_superop,
    perspective_general,
    perspective_xlogx,
    quasi_entropy,
    right_superop,
    superop_log,
)
from .states import StateSpec, generate, random_projector, read_state, weyl_basis, write_state
from .tensor_core import DensityMatrix, DimList, HermitianOperator, embed, hermitize, partial_trace, support_log

__version__ = "1.0.0"
