"""Decompose sparse multigraphs into k+1 pseudoforests with one small-component part."""

from .graph import Multigraph, OrientedState, red_components, validate
from .density import DensityWitness, threshold, mad_exact, mad_bruteforce, check_mad_at_most
from .orient import OrientationResult, hakimi_orient, colour, saturate
from .results import Params, Decomposition, DensityCertificate
from .decomposer import decompose
from .verify import verify_decomposition, verify_certificate, is_pseudoforest

__all__ = [
    "Multigraph",
    "OrientedState",
    "red_components",
    "validate",
    "DensityWitness",
    "threshold",
    "mad_exact",
    "mad_bruteforce",
    "check_mad_at_most",
    "OrientationResult",
    "hakimi_orient",
    "colour",
    "saturate",
    "Params",
    "Decomposition",
    "DensityCertificate",
    "decompose",
    "verify_decomposition",
    "verify_certificate",
    "is_pseudoforest",
]
