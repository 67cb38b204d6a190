"""First-order formulas over the variables v1, v2, ... and a direct evaluator.

The evaluator is a plain Tarskian recursion and shares no code with the
array evaluator in :mod:`ofl.semantics`, so it serves as an oracle for it.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass

from .terms import Term, TermError


class Formula:
    __slots__ = ()

    def free_vars(self) -> frozenset:
        raise NotImplementedError

    @property
    def closed(self) -> bool:
        return not self.free_vars()

    def __str__(self):
        return format_fo(self)


@dataclass(frozen=True)
class Truth(Formula):
    value: bool

    def free_vars(self):
        return frozenset()


@dataclass(frozen=True)
class Atom(Formula):
    name: str
    vars: tuple

    def free_vars(self):
        return frozenset(self.vars)


@dataclass(frozen=True)
class Equal(Formula):
    left: int
    right: int

    def free_vars(self):
        return frozenset((self.left, self.right))


@dataclass(frozen=True)
class Not(Formula):
    body: Formula

    def free_vars(self):
        return self.body.free_vars()


@dataclass(frozen=True)
class And(Formula):
    parts: tuple

    def free_vars(self):
        return frozenset().union(*(p.free_vars() for p in self.parts))


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple

    def free_vars(self):
        return frozenset().union(*(p.free_vars() for p in self.parts))


@dataclass(frozen=True)
class Exists(Formula):
    var: int
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - {self.var}


@dataclass(frozen=True)
class Forall(Formula):
    var: int
    body: Formula

    def free_vars(self):
        return self.body.free_vars() - {self.var}


TRUE = Truth(True)
FALSE = Truth(False)


def conj(*parts) -> Formula:
    return parts[0] if len(parts) == 1 else And(tuple(parts))


def disj(*parts) -> Formula:
    return parts[0] if len(parts) == 1 else Or(tuple(parts))


def implies(a: Formula, b: Formula) -> Formula:
    return Or((Not(a), b))


def format_fo(f: Formula) -> str:
    if isinstance(f, Truth):
        return "true" if f.value else "false"
    if isinstance(f, Atom):
        return f"{f.name}({', '.join(f'v{i}' for i in f.vars)})"
    if isinstance(f, Equal):
        return f"v{f.left} = v{f.right}"
    if isinstance(f, Not):
        return f"¬{_fo_operand(f.body)}"
    if isinstance(f, And):
        return " ∧ ".join(_fo_operand(p) for p in f.parts)
    if isinstance(f, Or):
        return " ∨ ".join(_fo_operand(p) for p in f.parts)
    q = "∃" if isinstance(f, Exists) else "∀"
    return f"{q}v{f.var} {_fo_operand(f.body)}"


def _fo_operand(f):
    s = format_fo(f)
    return f"({s})" if isinstance(f, (And, Or, Equal)) else s


# -- evaluation -------------------------------------------------------------

def eval_fo(formula: Formula, structure, assignment) -> bool:
    """Truth of ``formula`` in ``structure`` under ``assignment`` (var index -> element)."""
    env = dict(assignment)
    missing = formula.free_vars() - env.keys()
    if missing:
        raise TermError(f"unbound free variable(s): {', '.join(f'v{i}' for i in sorted(missing))}")
    return _holds(formula, structure, env)


def _holds(f, A, env) -> bool:
    if isinstance(f, Atom):
        rel = A.relations.get(f.name)
        if rel is None:
            return False
        return bool(rel[tuple(env[v] for v in f.vars)])
    if isinstance(f, Equal):
        return env[f.left] == env[f.right]
    if isinstance(f, Not):
        return not _holds(f.body, A, env)
    if isinstance(f, And):
        return all(_holds(p, A, env) for p in f.parts)
    if isinstance(f, Or):
        return any(_holds(p, A, env) for p in f.parts)
    if isinstance(f, Truth):
        return f.value
    want = isinstance(f, Exists)
    saved = env.get(f.var)
    try:
        for a in range(A.n):
            env[f.var] = a
            if _holds(f.body, A, env) == want:
                return want
        return not want
    finally:
        if saved is None:
            env.pop(f.var, None)
        else:
            env[f.var] = saved


def fo_relation(formula: Formula, structure, k: int) -> set:
    """All k-tuples satisfying a formula with free variables among v1..vk."""
    return {t for t in itertools.product(range(structure.n), repeat=k)
            if eval_fo(formula, structure, {i + 1: a for i, a in enumerate(t)})}


# -- terms to formulas ------------------------------------------------------

def term_to_fo(term: Term) -> Formula:
    """Formula with free variables among v1..vk defining ``term`` (k its arity)."""
    counter = itertools.count(term.arity + 1)
    return _tr(term, tuple(range(1, term.arity + 1)), counter)


def _tr(t: Term, xs: tuple, fresh) -> Formula:
    op = t.op
    if op == "rel":
        return Atom(t.name, xs)
    if op == "top":
        return TRUE
    if op == "bot":
        return FALSE
    if len(t.args) == 1:
        c = t.args[0]
        k = c.arity
        if op == "not":
            return Not(_tr(c, xs, fresh))
        if op in ("ex", "all"):
            if k == 0:
                return _tr(c, xs, fresh)
            v = next(fresh)
            body = _tr(c, xs + (v,), fresh)
            return Exists(v, body) if op == "ex" else Forall(v, body)
        if op in ("ex1", "all1", "ex0", "all0"):
            keep = 1 if op in ("ex1", "all1") else 0
            if k < 2 * keep or k == 0:
                return _tr(c, xs, fresh)
            vs = tuple(next(fresh) for _ in range(k - keep))
            f = _tr(c, xs[:keep] + vs, fresh)
            Q = Exists if op.startswith("ex") else Forall
            for v in reversed(vs):
                f = Q(v, f)
            return f
        if op == "E":
            if k < 2:
                return _tr(c, xs, fresh)
            return And((_tr(c, xs, fresh), Equal(xs[-2], xs[-1])))
        if op == "I":
            return _tr(c, xs if k <= 1 else xs + (xs[-1],), fresh)
        if op == "s":
            return _tr(c, xs if k < 2 else xs[:-2] + (xs[-1], xs[-2]), fresh)
        if op == "p":
            return _tr(c, xs if k < 2 else (xs[-1],) + xs[:-1], fresh)
        raise TermError(f"unknown operator {op!r}")
    a, b = t.args
    ka, kb = a.arity, b.arity
    if op in ("cap", "cup"):
        if ka != kb:
            return FALSE if op == "cap" else TRUE
        parts = (_tr(a, xs, fresh), _tr(b, xs, fresh))
        return And(parts) if op == "cap" else Or(parts)
    if op in ("dotcap", "dotcup"):
        m = len(xs)
        parts = (_tr(a, xs[m - ka:], fresh), _tr(b, xs[m - kb:], fresh))
        return And(parts) if op == "dotcap" else Or(parts)
    if op == "C":
        if t.arity == 0:
            return FALSE
        last = xs[-1:]
        fa = _tr(a, last if ka == 1 and kb != 1 else xs, fresh)
        fb = _tr(b, last if kb == 1 and ka != 1 else xs, fresh)
        return And((fa, fb))
    raise TermError(f"unknown operator {op!r}")


# -- text syntax ------------------------------------------------------------

_SUBSCRIPTS = str.maketrans("₀₁₂₃₄₅₆₇₈₉", "0123456789")
_FO_TOKEN = re.compile(r"\s*(<->|↔|->|→|[()=,~¬&∧|∨∃∀]|v[0-9]+|[A-Za-z_][A-Za-z0-9_']*)")
_WORDS = {"not": "¬", "and": "∧", "or": "∨", "exists": "∃", "forall": "∀",
          "~": "¬", "&": "∧", "|": "∨", "->": "→", "<->": "↔"}


class FOSyntaxError(ValueError):
    pass


def parse_fo(text: str) -> Formula:
    """Parse formulas such as ``forall v1 (P(v1) -> exists v2 R(v1, v2))``.

    Quantifiers bind to the next operand, so a quantified conjunction needs
    parentheses.  ``→`` and ``↔`` associate to the right and bind weakest.
    """
    src = text.translate(_SUBSCRIPTS)
    toks, pos = [], 0
    while pos < len(src):
        m = _FO_TOKEN.match(src, pos)
        if not m:
            if src[pos:].strip() == "":
                break
            raise FOSyntaxError(f"unexpected character {src[pos]!r} at {pos}")
        tok = m.group(1)
        toks.append(_WORDS.get(tok, tok))
        pos = m.end()
    toks.append("<end>")
    i = 0

    def peek():
        return toks[i]

    def take(want=None):
        nonlocal i
        tok = toks[i]
        if want is not None and tok != want:
            raise FOSyntaxError(f"expected {want!r}, got {tok!r}")
        i += 1
        return tok

    def var(tok):
        m = re.fullmatch(r"v(\d+)", tok)
        if not m or int(m.group(1)) < 1:
            raise FOSyntaxError(f"expected a variable v1, v2, ..., got {tok!r}")
        return int(m.group(1))

    def formula():
        left = disjunction()
        if peek() == "→":
            take()
            return implies(left, formula())
        if peek() == "↔":
            take()
            right = formula()
            return And((implies(left, right), implies(right, left)))
        return left

    def disjunction():
        parts = [conjunction()]
        while peek() == "∨":
            take()
            parts.append(conjunction())
        return disj(*parts)

    def conjunction():
        parts = [unary()]
        while peek() == "∧":
            take()
            parts.append(unary())
        return conj(*parts)

    def unary():
        tok = take()
        if tok == "¬":
            return Not(unary())
        if tok in ("∃", "∀"):
            v = var(take())
            body = unary()
            return Exists(v, body) if tok == "∃" else Forall(v, body)
        if tok == "(":
            f = formula()
            take(")")
            return f
        if tok in ("true", "false"):
            return Truth(tok == "true")
        if tok == "<end>":
            raise FOSyntaxError("unexpected end of formula")
        if re.fullmatch(r"v\d+", tok) and peek() == "=":
            take()
            return Equal(var(tok), var(take()))
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_']*", tok):
            raise FOSyntaxError(f"unexpected {tok!r}")
        take("(")
        args = []
        if peek() != ")":
            args.append(var(take()))
            while peek() == ",":
                take()
                args.append(var(take()))
        take(")")
        return Atom(tok, tuple(args))

    f = formula()
    if peek() != "<end>":
        raise FOSyntaxError(f"trailing input at {peek()!r}")
    return f
