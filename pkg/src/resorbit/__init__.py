"""Periodic-orbit families near a 1:-1 resonant equilibrium with involutory symmetry.

The package computes reduced bifurcation equations for a Hamiltonian system
whose linearization carries a double pair of imaginary eigenvalues with
opposite energy signature, solves them completely as polynomial systems,
classifies and counts the resulting families of periodic orbits for three
symmetry classes (a reversing symplectic swap, an equivariant anti-symplectic
conjugate swap, and their product), certifies non-degeneracy, and verifies
predicted families by direct integration and shooting.
"""

__version__ = "0.1.0"

from resorbit.ae_analysis import AECoefficients, AEReport, BlowupSolution, solve_blowup
from resorbit.combined_analysis import CombinedReport, analyze_combined, torus_fixsets
from resorbit.invariants import ComplexPair, InvariantPoint, SymmetryKind, to_invariants
from resorbit.normalform import (
    HamiltonianSpec,
    ReducedHamiltonian,
    realize_ae,
    realize_combined,
    realize_sr,
    reduce_hamiltonian,
    reduced_from_coefficients,
)
from resorbit.orbitverify import OrbitResult, shoot_R_symmetric, shoot_generic, vector_field
from resorbit.polyalg import MultiPoly, PolySystem, RootRecord, SolveOptions, solve_all_roots
from resorbit.sr_analysis import Geometry, SRReport, analyze_sr

__all__ = [
    "AECoefficients",
    "AEReport",
    "BlowupSolution",
    "CombinedReport",
    "ComplexPair",
    "Geometry",
    "HamiltonianSpec",
    "InvariantPoint",
    "MultiPoly",
    "OrbitResult",
    "PolySystem",
    "ReducedHamiltonian",
    "RootRecord",
    "SRReport",
    "SolveOptions",
    "SymmetryKind",
    "analyze_combined",
    "analyze_sr",
    "realize_ae",
    "realize_combined",
    "realize_sr",
    "reduce_hamiltonian",
    "reduced_from_coefficients",
    "shoot_R_symmetric",
    "shoot_generic",
    "solve_all_roots",
    "solve_blowup",
    "to_invariants",
    "torus_fixsets",
    "vector_field",
    "__version__",
]
