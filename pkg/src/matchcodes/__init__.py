"""Matching codes on trivalent lattices: builders, verifiers and protocol runners."""

from .pauli import PauliOperator
from .lattice import (
    Lattice,
    Matching,
    honeycomb_torus,
    label_matching,
    modified_honeycomb_torus,
    planar_wen,
    tricolored_honeycomb_torus,
    wen_matching,
)
from .code import MatchingCode, build, verify_relations
from .tableau import StabilizerState

__version__ = "0.1.0"

__all__ = [
    "PauliOperator",
    "Lattice",
    "Matching",
    "MatchingCode",
    "StabilizerState",
    "build",
    "verify_relations",
    "honeycomb_torus",
    "modified_honeycomb_torus",
    "tricolored_honeycomb_torus",
    "planar_wen",
    "label_matching",
    "wen_matching",
]
