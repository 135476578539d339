"""Border-rank tensor networks: degenerations of plaquette states, interpolation and boundary-MPS contraction."""

from .boundary import (ContractionReport, PepsNetwork, boundary_contract, contract_kagome, contract_square,
                       dense_contract, kagome_peps, square_peps)
from .conversions import (DegenerationCertificate, LocalMapFamily, ScaledFamily, analyze_degeneration,
                          apply_restriction, compose_with_restriction, lift_to_lattice)
from .cost import cost_exact_rvb, cost_kagome, cost_square
from .interpolation import (ExpectationTask, InterpolationPlan, expectation_complex, expectation_real,
                            make_plan, reconstruct_state)
from .structures import EntanglementStructure, Hypergraph, PlaquetteSpec, kagome_structure, make_plaquette
from .tensor import DenseTensor, Leg, MatrixPoly, PolyTensor, contract, svd_truncate

__version__ = "0.1.0"

__all__ = [
    "ContractionReport", "PepsNetwork", "boundary_contract", "contract_kagome", "contract_square",
    "dense_contract", "kagome_peps", "square_peps", "DegenerationCertificate", "LocalMapFamily",
    "ScaledFamily", "analyze_degeneration", "apply_restriction", "compose_with_restriction",
    "lift_to_lattice", "cost_exact_rvb", "cost_kagome", "cost_square", "ExpectationTask",
    "InterpolationPlan", "expectation_complex", "expectation_real", "make_plan", "reconstruct_state",
    "EntanglementStructure", "Hypergraph", "PlaquetteSpec", "kagome_structure", "make_plaquette",
    "DenseTensor", "Leg", "MatrixPoly", "PolyTensor", "contract", "svd_truncate",
]
