"""Unitary coupled-cluster doubles with perturbative singles corrections.

Desk-scale electronic-structure engine: FCIDUMP ingestion, spin-orbital
Hamiltonians, exact determinant-sector simulation of UCC ansaetze, VQE
minimization, MBPT singles corrections, and MP2/CCD/CCSD/FCI references.
"""

from .fcidump import SpatialIntegrals, parse_fcidump, write_fcidump, freeze_core
from .hamiltonian import (SpinOrbitalHamiltonian, Denominators,
                          to_spin_orbital, denominators, mp2)
from .sector import (DeterminantSector, SectorOperator, enumerate_sector,
                     excitation_matrix, hamiltonian_matrix, apply_exponential)
from .ansatz import (Amplitudes, GeneratorSet, build_generators,
                     prepare_state, params_to_t2)
from .vqe import VqeConfig, VqeResult, energy, minimize
from .singles import (SinglesCorrection, corrections, t1_second_order,
                      t1_third_order, oracle_singles_projection)
from .cc import CcConfig, CcResult, ccd_solve, ccsd_solve
from .fci import FciResult, fci_ground_state

__all__ = [
    "SpatialIntegrals", "parse_fcidump", "write_fcidump", "freeze_core",
    "SpinOrbitalHamiltonian", "Denominators", "to_spin_orbital",
    "denominators", "mp2",
    "DeterminantSector", "SectorOperator", "enumerate_sector",
    "excitation_matrix", "hamiltonian_matrix", "apply_exponential",
    "Amplitudes", "GeneratorSet", "build_generators", "prepare_state",
    "params_to_t2",
    "VqeConfig", "VqeResult", "energy", "minimize",
    "SinglesCorrection", "corrections", "t1_second_order", "t1_third_order",
    "oracle_singles_projection",
    "CcConfig", "CcResult", "ccd_solve", "ccsd_solve",
    "FciResult", "fci_ground_state",
]

__version__ = "0.1.0"
