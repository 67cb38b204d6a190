"""Terms of the general relational algebra and their static properties.

A term is an immutable tree of :class:`Term` nodes.  Relation symbols carry
their arity, so the output arity of every node is known at construction time
and never depends on a structure.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Mapping

UNARY_OPS = ("not", "ex", "ex1", "ex0", "E", "I", "s", "p", "all", "all1", "all0")
BINARY_OPS = ("cap", "dotcap", "C", "cup", "dotcup")
LEAF_OPS = ("bot", "top", "rel")
SUGAR_OPS = ("cup", "dotcup", "all", "all1", "all0")
CORE_OPS = frozenset(("not", "cap", "dotcap", "ex", "ex1", "ex0", "E", "I", "s", "p", "C"))
QUANTIFIERS = frozenset(("ex", "ex1", "ex0", "all", "all1", "all0"))

SYMBOL = {
    "not": "¬", "cap": "∩", "dotcap": "⋅∩", "ex": "∃", "ex1": "∃₁", "ex0": "∃₀",
    "E": "E", "I": "I", "s": "s", "p": "p", "C": "C",
}
# display order used when printing operator sets
OP_ORDER = ("p", "s", "E", "I", "not", "C", "cap", "dotcap", "ex", "ex1", "ex0")

KEYWORDS = frozenset(
    ("not", "cap", "cup", "dotcap", "dotcup", "ex", "all", "ex1", "ex0", "all1",
     "all0", "E", "I", "s", "p", "C", "top", "bot")
)
_NAME_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class TermError(ValueError):
    pass


def _unary_arity(op: str, k: int) -> int:
    if op in ("not", "E", "s", "p"):
        return k
    if op == "I":
        return k if k <= 1 else k - 1
    if op in ("ex", "all"):
        return 0 if k == 0 else k - 1
    if op in ("ex1", "all1"):
        return k if k < 2 else 1
    if op in ("ex0", "all0"):
        return 0
    raise TermError(f"unknown unary operator {op!r}")


def c_arity(k: int, l: int) -> int:
    """Output arity of the one-dimensional intersection C."""
    if k == 1 and l >= 1:
        return l
    if l == 1 and k >= 1:
        return k
    return 0


def _binary_arity(op: str, k: int, l: int) -> int:
    if op in ("cap", "cup"):
        return k if k == l else 0
    if op in ("dotcap", "dotcup"):
        return max(k, l)
    if op == "C":
        return c_arity(k, l)
    raise TermError(f"unknown binary operator {op!r}")


@dataclass(frozen=True, eq=False)
class Term:
    op: str
    args: tuple = ()
    name: str | None = None
    rel_arity: int = 0
    arity: int = field(init=False)
    _hash: int = field(init=False, repr=False)

    def __post_init__(self):
        if self.op == "rel":
            a = self.rel_arity
        elif self.op in ("bot", "top"):
            a = 0
        elif self.op in UNARY_OPS:
            a = _unary_arity(self.op, self.args[0].arity)
        elif self.op in BINARY_OPS:
            a = _binary_arity(self.op, self.args[0].arity, self.args[1].arity)
        else:
            raise TermError(f"unknown operator {self.op!r}")
        object.__setattr__(self, "arity", a)
        object.__setattr__(self, "_hash", hash((self.op, self.args, self.name, self.rel_arity)))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Term) or self._hash != other._hash:
            return False
        return (self.op, self.name, self.rel_arity, self.args) == (
            other.op, other.name, other.rel_arity, other.args)

    def __repr__(self):
        from .syntax import print_term
        return f"Term({print_term(self)!r})"

    def __str__(self):
        from .syntax import print_term
        return print_term(self)

    @property
    def child(self) -> "Term":
        return self.args[0]

    def subterms(self) -> Iterator["Term"]:
        """Pre-order walk over all nodes."""
        stack = [self]
        while stack:
            t = stack.pop()
            yield t
            stack.extend(reversed(t.args))

    def size(self) -> int:
        return sum(1 for _ in self.subterms())

    def depth(self) -> int:
        if not self.args:
            return 0
        return 1 + max(a.depth() for a in self.args)

    def symbols(self) -> dict[str, int]:
        return {t.name: t.rel_arity for t in self.subterms() if t.op == "rel"}


# -- constructors -----------------------------------------------------------

BOT = Term("bot")
TOP = Term("top")


def Rel(name: str, arity: int) -> Term:
    return Term("rel", name=name, rel_arity=arity)


def _u(op):
    def make(t: Term) -> Term:
        return Term(op, (t,))
    make.__name__ = op
    return make


def _b(op):
    def make(t: Term, u: Term) -> Term:
        return Term(op, (t, u))
    make.__name__ = op
    return make


Neg, Ex, Ex1, Ex0, Eq, Subst, Swap, Cyc = map(_u, ("not", "ex", "ex1", "ex0", "E", "I", "s", "p"))
All, All1, All0 = map(_u, ("all", "all1", "all0"))
Cap, DotCap, OneDimCap, Cup, DotCup = map(_b, ("cap", "dotcap", "C", "cup", "dotcup"))


def neg(t: Term) -> Term:
    """Negation that cancels an outer double negation."""
    return t.child if t.op == "not" else Neg(t)


def repeat(make, t: Term, n: int) -> Term:
    for _ in range(n):
        t = make(t)
    return t


def big(make, terms, empty: Term) -> Term:
    """Left-associated fold of a binary constructor; ``empty`` for no terms."""
    terms = list(terms)
    if not terms:
        return empty
    out = terms[0]
    for t in terms[1:]:
        out = make(out, t)
    return out


# -- vocabularies -----------------------------------------------------------

class Vocabulary(Mapping):
    """Relation symbol name -> arity (every arity >= 1)."""

    def __init__(self, symbols: Mapping[str, int] | None = None, **kw):
        d = dict(symbols or {})
        d.update(kw)
        for name, ar in d.items():
            if not isinstance(name, str) or not _NAME_RE.match(name) or name in KEYWORDS:
                raise TermError(f"invalid relation symbol name {name!r}")
            if not isinstance(ar, int) or ar < 1:
                raise TermError(f"symbol {name} must have positive arity, got {ar!r}")
        self._d = d

    def __getitem__(self, name):
        return self._d[name]

    def __iter__(self):
        return iter(self._d)

    def __len__(self):
        return len(self._d)

    def __repr__(self):
        return f"Vocabulary({self.text()})"

    def __eq__(self, other):
        return isinstance(other, Mapping) and dict(self._d) == dict(other)

    def __hash__(self):
        return hash(frozenset(self._d.items()))

    def rel(self, name: str) -> Term:
        if name not in self._d:
            raise TermError(f"undeclared relation symbol {name!r}")
        return Rel(name, self._d[name])

    def extend(self, more: Mapping[str, int]) -> "Vocabulary":
        d = dict(self._d)
        for k, v in more.items():
            if k in d and d[k] != v:
                raise TermError(f"symbol {k} redeclared with arity {v}")
            d[k] = v
        return Vocabulary(d)

    @property
    def max_arity(self) -> int:
        return max(self._d.values(), default=0)

    def text(self) -> str:
        return ", ".join(f"{k}/{v}" for k, v in self._d.items())


def vocabulary_of(term: Term) -> Vocabulary:
    return Vocabulary(term.symbols())


def check_vocabulary(term: Term, vocab: Mapping[str, int]) -> None:
    for name, ar in term.symbols().items():
        if name not in vocab:
            raise TermError(f"undeclared relation symbol {name!r}")
        if vocab[name] != ar:
            raise TermError(f"symbol {name} used with arity {ar}, declared {vocab[name]}")


# -- static analysis --------------------------------------------------------

def arity(term: Term) -> int:
    return term.arity


def desugar(term: Term) -> Term:
    """Expand the sugar nodes into their core definitions, literally."""
    op = term.op
    if not term.args:
        return term
    args = tuple(desugar(a) for a in term.args)
    if op == "all":
        return Neg(Ex(Neg(args[0])))
    if op == "all1":
        return Neg(Ex1(Neg(args[0])))
    if op == "all0":
        return Neg(Ex0(Neg(args[0])))
    if op == "cup":
        return Neg(Cap(Neg(args[0]), Neg(args[1])))
    if op == "dotcup":
        return Neg(DotCap(Neg(args[0]), Neg(args[1])))
    if args == term.args:
        return term
    return Term(op, args)


_SUGAR_EXPANSION = {
    "all": {"not", "ex"}, "all1": {"not", "ex1"}, "all0": {"not", "ex0"},
    "cup": {"not", "cap"}, "dotcup": {"not", "dotcap"},
}


def operators_used(term: Term) -> frozenset:
    ops = set()
    for t in term.subterms():
        if t.op in CORE_OPS:
            ops.add(t.op)
        elif t.op in _SUGAR_EXPANSION:
            ops |= _SUGAR_EXPANSION[t.op]
    return frozenset(ops)


def format_ops(ops) -> str:
    return "{" + ",".join(SYMBOL[o] for o in OP_ORDER if o in ops) + "}"


def is_quantifier_free(term: Term) -> bool:
    return not any(t.op in QUANTIFIERS for t in term.subterms())


def strip_identities(term: Term) -> Term:
    """Remove operator applications that act as the identity at their arity."""
    if not term.args:
        return term
    args = tuple(strip_identities(a) for a in term.args)
    op = term.op
    if len(args) == 1:
        k = args[0].arity
        if (op in ("E", "s", "p", "ex1", "all1") and k < 2) or (op == "I" and k <= 1) \
                or (op in ("ex", "all", "ex0", "all0") and k == 0):
            return args[0]
    if args == term.args:
        return term
    return Term(op, args)


def replace(term: Term, mapping: Mapping[Term, Term]) -> Term:
    """Substitute subterms (outermost match wins)."""
    if term in mapping:
        return mapping[term]
    if not term.args:
        return term
    args = tuple(replace(a, mapping) for a in term.args)
    return term if args == term.args else Term(term.op, args)


def rename_symbols(term: Term, ren: Mapping[str, tuple[str, int]]) -> Term:
    if term.op == "rel":
        if term.name in ren:
            n, a = ren[term.name]
            return Rel(n, a)
        return term
    if not term.args:
        return term
    return Term(term.op, tuple(rename_symbols(a, ren) for a in term.args))
