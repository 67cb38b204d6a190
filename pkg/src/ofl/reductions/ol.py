"""Ordered-logic sentences: membership check and translation to GRA(¬,∩,∃).

Membership follows the inductive levels OL^k: an atom R(v1..vl) lives in
every OL^k with k >= l, boolean combinations of members of lower levels live
in all higher levels, and a quantifier over v_{k+1} turns a member of
OL^{k+1} into a member of OL^k only.  ∨, →, ∀ are read as their usual
abbreviations.

Translation has to avoid ∩ between terms of different arities, which would
collapse to the empty 0-ary relation.  Subformulas that do not mention the
quantified variable are pulled out of the quantifier first (by splitting on
their truth value when they are not simply conjuncts).
"""
from __future__ import annotations

from typing import NamedTuple

from ..fo import And, Atom, Equal, Exists, Forall, Formula, Not, Or, Truth, parse_fo
from ..terms import BOT, TOP, All, Cap, Cup, Ex, Neg, Rel, Term, TermError, big, desugar


class OLError(TermError):
    pass


class Levels(NamedTuple):
    """The set of k with φ ∈ OL^k: ``{lo}`` when exact, else ``{k >= lo}``."""
    lo: int
    exact: bool

    def __contains__(self, k):
        return k == self.lo if self.exact else k >= self.lo


def ol_levels(f: Formula) -> Levels:
    if isinstance(f, Atom):
        want = tuple(range(1, len(f.vars) + 1))
        if not f.vars:
            raise OLError(f"0-ary atom {f} is not allowed")
        if tuple(f.vars) != want:
            raise OLError(f"atom {f} must use exactly the variable prefix "
                          f"({', '.join(f'v{i}' for i in want)}) (uniformity)")
        return Levels(len(f.vars), False)
    if isinstance(f, Not):
        return Levels(ol_levels(f.body).lo, False)
    if isinstance(f, (And, Or)):
        return Levels(max(ol_levels(p).lo for p in f.parts), False)
    if isinstance(f, (Exists, Forall)):
        lv = ol_levels(f.body)
        if f.var not in lv:
            free = sorted(f.body.free_vars())
            raise OLError(f"quantified variable v{f.var} is not the highest-index variable of "
                          f"its scope in {f} (free: {', '.join(f'v{i}' for i in free) or 'none'})")
        return Levels(f.var - 1, True)
    if isinstance(f, Equal):
        raise OLError(f"equality {f} is not part of ordered logic")
    if isinstance(f, Truth):
        raise OLError("truth constants are not part of ordered logic")
    raise OLError(f"unknown formula node {f!r}")


def check_ol(f: Formula) -> None:
    """Raise :class:`OLError` naming the failing clause unless ``f`` is an OL sentence."""
    lv = ol_levels(f)
    if 0 not in lv:
        raise OLError(f"not a sentence: free variables {sorted(f.free_vars())}")


def is_ol(f: Formula) -> bool:
    try:
        check_ol(f)
        return True
    except OLError:
        return False


# -- translation --------------------------------------------------------------

def _arity(f: Formula) -> int:
    return max(f.free_vars(), default=0)


def _blocks(f: Formula) -> list:
    if isinstance(f, Not):
        return _blocks(f.body)
    if isinstance(f, (And, Or)):
        out = []
        for p in f.parts:
            out += [b for b in _blocks(p) if b not in out]
        return out
    return [f]


def _fold(f: Formula) -> Formula:
    if isinstance(f, Not):
        b = _fold(f.body)
        if isinstance(b, Truth):
            return Truth(not b.value)
        return Not(b)
    if isinstance(f, (And, Or)):
        unit = isinstance(f, And)
        parts = []
        for p in map(_fold, f.parts):
            if isinstance(p, Truth):
                if p.value != unit:
                    return Truth(not unit)
                continue
            parts.append(p)
        if not parts:
            return Truth(unit)
        return parts[0] if len(parts) == 1 else type(f)(tuple(parts))
    return f


def _subst(f: Formula, block: Formula, value: bool) -> Formula:
    if f == block:
        return Truth(value)
    if isinstance(f, Not):
        return Not(_subst(f.body, block, value))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_subst(p, block, value) for p in f.parts))
    return f


def _quantify(exists: bool, j: int, body: Formula) -> Formula:
    """Q v_j body with every boolean block of the result's scope of arity exactly j."""
    Q = Exists if exists else Forall
    body = _fold(body)
    if isinstance(body, Truth) or _arity(body) < j:
        return body  # v_j does not occur; domains are nonempty
    lower = [b for b in _blocks(body) if _arity(b) < j]
    if not lower:
        return Q(j, body)
    split, keep = (And, Or) if exists else (Or, And)
    if isinstance(body, split):
        out = [p for p in body.parts if _arity(p) < j]
        rest = [p for p in body.parts if _arity(p) >= j]
        if out:
            inner = _quantify(exists, j, rest[0] if len(rest) == 1 else split(tuple(rest)))
            return _fold(split(tuple(out) + (inner,)))
    L = lower[0]
    yes = _quantify(exists, j, _subst(body, L, True))
    no = _quantify(exists, j, _subst(body, L, False))
    if exists:
        return _fold(Or((And((L, yes)), And((Not(L), no)))))
    return _fold(And((Or((Not(L), yes)), Or((L, no)))))


def _clean(f: Formula) -> Formula:
    if isinstance(f, Not):
        return Not(_clean(f.body))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_clean(p) for p in f.parts))
    if isinstance(f, (Exists, Forall)):
        return _quantify(isinstance(f, Exists), f.var, _clean(f.body))
    return f


def _to_term(f: Formula) -> Term:
    if isinstance(f, Atom):
        return Rel(f.name, len(f.vars))
    if isinstance(f, Truth):
        return TOP if f.value else BOT
    if isinstance(f, Not):
        return Neg(_to_term(f.body))
    if isinstance(f, And):
        return big(Cap, [_to_term(p) for p in f.parts], TOP)
    if isinstance(f, Or):
        return big(Cup, [_to_term(p) for p in f.parts], BOT)
    if isinstance(f, Exists):
        return Ex(_to_term(f.body))
    if isinstance(f, Forall):
        return All(_to_term(f.body))
    raise OLError(f"cannot translate {f!r}")


def ol_to_term(sentence: Formula | str, sugar: bool = False) -> Term:
    """Equivalent 0-ary term of GRA(¬,∩,∃) for an OL sentence (desugared unless ``sugar``)."""
    if isinstance(sentence, str):
        sentence = parse_fo(sentence)
    check_ol(sentence)
    t = _to_term(_fold(_clean(sentence)))
    return t if sugar else desugar(t)
