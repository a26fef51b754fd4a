"""Alternating oriented monoids of partial permutations.

Enumeration, membership, Green's structure, congruence lattices and
generating sets for AOP_n and AOR_n, with the ambient monoids as context.
"""
from .classify import MonoidKind, member_fast, member_oracle
from .engine import MonoidSet, cardinality_formula, closure, enumerate_kind
from .pperm import PartialPerm, format_literal, parse_literal

__all__ = [
    "MonoidKind",
    "MonoidSet",
    "PartialPerm",
    "cardinality_formula",
    "closure",
    "enumerate_kind",
    "format_literal",
    "member_fast",
    "member_oracle",
    "parse_literal",
]
__version__ = "0.1.0"
