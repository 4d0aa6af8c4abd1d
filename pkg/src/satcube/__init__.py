"""Discrete hypercube geometry of random strict 3-SAT."""

__version__ = "0.1.0"

from .errors import (
    CapacityExceeded,
    CapExceeded,
    DimacsParseError,
    DuplicateVariable,
    EmptySolutionSpace,
    InvalidN,
    InvalidTriple,
)
from .formula import Clause, Formula, GenConfig, Literal, clause_universe_size, make_clause, random_formula
from .hypercube import SolutionSet, enumerate_solutions, full_space
from .solver import SolverConfig, solve, verify_model
from .topology import clusters, freeze_report, globally_frozen, replay_topology

__all__ = [
    "CapExceeded", "CapacityExceeded", "Clause", "DimacsParseError", "DuplicateVariable",
    "EmptySolutionSpace", "Formula", "GenConfig", "InvalidN", "InvalidTriple", "Literal",
    "SolutionSet", "SolverConfig", "clause_universe_size", "clusters", "enumerate_solutions",
    "freeze_report", "full_space", "globally_frozen", "make_clause", "random_formula",
    "replay_topology", "solve", "verify_model",
]
