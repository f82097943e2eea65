"""Finite-field clause-polynomial k-SAT decision procedure with a brute-force oracle."""

from .engine import (Decision, Mode, PrimePolicy, SolverConfig, Verdict, ZeroStrategy, decide,
                     extract_certificate)
from .field import GF, FieldElement, Prime, next_prime
from .formula import Clause, Formula, Literal, parse_dimacs, random_ksat, serialize_dimacs

__version__ = "0.1.0"

__all__ = [
    "Clause", "Decision", "FieldElement", "Formula", "GF", "Literal", "Mode", "Prime",
    "PrimePolicy", "SolverConfig", "Verdict", "ZeroStrategy", "decide", "extract_certificate",
    "next_prime", "parse_dimacs", "random_ksat", "serialize_dimacs",
]
