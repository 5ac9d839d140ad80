"""Exact-arithmetic verification and search for left-invariant para-Kahler
structures on finite-dimensional nilpotent Lie algebras."""

from .scalars import (
    EMPTY_FACTS,
    NonzeroFacts,
    Polynomial,
    Rational,
    Scalar,
    Variable,
    as_perfect_square,
    as_scalar,
)
from .exprparse import ParseContext, parse_polynomial, parse_scalar, print_scalar

__all__ = [
    "EMPTY_FACTS",
    "NonzeroFacts",
    "ParseContext",
    "Polynomial",
    "Rational",
    "Scalar",
    "Variable",
    "as_perfect_square",
    "as_scalar",
    "parse_polynomial",
    "parse_scalar",
    "print_scalar",
]
