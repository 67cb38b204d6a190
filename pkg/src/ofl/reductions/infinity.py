"""Infinity axioms: satisfiable terms without finite models.

Symbols: Z/1 (a start point outside the range of S), S/2 (an injective
successor), F/3 (F(b, a, c) for every successor b of a and every c ≠ a, used
to force injectivity).
"""
from __future__ import annotations

import numpy as np

from ..semantics import Structure
from ..terms import All, Cap, Cup, Eq, Ex, Neg, OneDimCap, Rel, Swap, Term, Vocabulary, big

INFINITY_VOCAB = Vocabulary({"Z": 1, "S": 2, "F": 3})
C_FREE_VOCAB = Vocabulary({"Z": 1, "Z'": 2, "S": 2, "F": 3})

Z, S, F, Zp = Rel("Z", 1), Rel("S", 2), Rel("F", 3), Rel("Z'", 2)
_G = Eq(Cup(F, Neg(F)))  # true exactly on triples whose last two entries are equal


def _shared() -> list[tuple[str, Term]]:
    return [
        ("start", Ex(Z)),
        # S(a, b) and S(a', b) force a = a' via F
        ("injective", All(All(Cup(Neg(Swap(S)), All(Swap(Cup(_G, F))))))),
        ("f-guard", All(All(Cup(Neg(Ex(F)), Neg(Swap(S)))))),
    ]


def infinity_conjuncts() -> list[tuple[str, Term]]:
    start, inj, guard = _shared()
    return [start, ("successor", All(Ex(OneDimCap(S, Neg(Z))))), inj, guard]


def infinity_axiom() -> Term:
    return big(Cap, [t for _, t in infinity_conjuncts()], None)


def infinity_conjuncts_c_free() -> list[tuple[str, Term]]:
    """C(S,¬Z) is replaced by a fresh Z′ with ∀∃(S ∩ Z′) whose targets avoid Z."""
    start, inj, guard = _shared()
    return [start,
            ("successor", All(Ex(Cap(S, Zp)))),
            ("z'-disjoint", All(Cup(Neg(Ex(Swap(Zp))), Neg(Z)))),
            inj, guard]


def infinity_axiom_c_free() -> Term:
    return big(Cap, [t for _, t in infinity_conjuncts_c_free()], None)


def infinity_axiom_c_free_literal() -> Term:
    """The variant with the literal ∀∃(S ∩ ¬Z′) ∩ ∀(¬∃sZ′ ∪ Z); it has a one-element model."""
    start, inj, guard = _shared()
    return big(Cap, [start[1], All(Ex(Cap(S, Neg(Zp)))), All(Cup(Neg(Ex(Swap(Zp))), Z)), inj[1], guard[1]], None)


def infinity_prefix_structure(n: int = 5) -> Structure:
    """0 → 1 → … → n-1 with Z = {0}: every conjunct holds except successor at n-1."""
    s = np.zeros((n, n), bool)
    for i in range(n - 1):
        s[i, i + 1] = True
    z = np.zeros(n, bool)
    z[0] = True
    f = np.zeros((n,) * 3, bool)
    for i in range(n - 1):
        for b in range(n):
            if b != i:
                f[i + 1, b, i] = True
    return Structure(n, {"Z": z, "S": s, "F": f})
