"""Ordered fragments of first-order logic through relation-algebra terms."""
__version__ = "0.1.0"

from .terms import Term, Vocabulary, arity, desugar, operators_used
from .syntax import parse_term, print_term

__all__ = ["Term", "Vocabulary", "arity", "desugar", "operators_used", "parse_term", "print_term"]
