"""Normal forms and requirement extraction.

Two shapes are supported.  The ordered shape

    ⋂ ∃κ ∩ ⋂ ∀λ ∩ ⋂ ∀ⁿ(¬α ∪ ∃β) ∩ ⋂ ∀ⁿ(¬α ∪ ∀β)

and the one-dimensional shape with ∃₀/∀₀ in place of the outer
quantifiers and ∃₁/∀₁ in place of the inner ones.  Conversion replaces each
innermost quantified subterm of arity >= 1 by a fresh symbol constrained by
two definitional requirements.  The remaining sentence-level atoms are either
read off directly, guessed (one branch per truth assignment), or removed by
padding every symbol with a dummy leading coordinate.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace as dc_replace
from typing import NamedTuple

import numpy as np

from .semantics import Structure, evaluate, satisfied
from .terms import (
    BOT, TOP, All, All0, All1, Cap, Cup, Ex, Ex0, Ex1, Neg, Rel, Subst, Term,
    TermError, Vocabulary, big, c_arity, desugar, is_quantifier_free, neg,
    operators_used, repeat, replace, strip_identities, vocabulary_of,
)

ORDERED = "ordered"
ONEDIM = "one-dimensional"
ORDERED_OPS = frozenset(("I", "s", "E", "C", "not", "cap", "ex"))
ONEDIM_OPS = frozenset(("I", "s", "E", "C", "not", "cap", "dotcap", "ex1", "ex0"))


class Requirement(NamedTuple):
    n: int | None   # length of the ∀-prefix; None for the one-dimensional ∀₀
    alpha: Term
    beta: Term


@dataclass(frozen=True)
class Definition:
    name: str
    arity: int
    body: Term      # the fresh symbol is interpreted as ∃body (or ∃₁body)
    quant: str      # "ex" or "ex1"


@dataclass(frozen=True)
class NormalForm:
    kind: str
    kappas: tuple = ()
    lambdas: tuple = ()
    existentials: tuple = ()
    universals: tuple = ()
    vocab: Vocabulary = field(default_factory=Vocabulary)
    source_vocab: Vocabulary = field(default_factory=Vocabulary)
    definitions: tuple = ()
    padded: Term | None = None      # unary T⁺ when the padding variant was used
    guesses: tuple = ()             # (atom, truth value) chosen for this branch

    def to_term(self) -> Term:
        return assemble(self)

    def __str__(self):
        return str(self.to_term())

    def decode(self, model: Structure) -> Structure:
        """A structure over the source vocabulary satisfying the source term."""
        if self.padded is None:
            return Structure(model.n, {k: v for k, v in model.relations.items() if k in self.source_vocab})
        good = evaluate(self.padded, model).data
        d = int(np.argmax(good))
        if not good[d]:
            raise ValueError("structure does not satisfy the padded sentence")
        return Structure(model.n, {k: model.rel(k, ar + 1)[d] for k, ar in self.source_vocab.items()})

    def expand(self, A: Structure) -> Structure:
        """Expansion of a model of the source term by the fresh symbols."""
        if self.padded is not None:
            rels = {k: np.broadcast_to(A.rel(k, ar), (A.n,) * (ar + 1)).copy()
                    for k, ar in self.source_vocab.items()}
            for name, ar in self.vocab.items():
                if name not in rels and ar == 1 and not any(d.name == name for d in self.definitions):
                    rels[name] = np.ones(A.n, dtype=bool)
        else:
            rels = {k: A.rel(k, ar) for k, ar in self.source_vocab.items()}
        B = Structure(A.n, rels)
        for d in self.definitions:
            q = Ex(d.body) if d.quant == "ex" else Ex1(d.body)
            B.relations[d.name] = evaluate(q, B).data
        return B


def assemble(nf: NormalForm) -> Term:
    if nf.kind == ORDERED:
        parts = [Ex(k) for k in nf.kappas] + [All(l) for l in nf.lambdas]
        parts += [repeat(All, Cup(neg(r.alpha), Ex(r.beta)), r.n) for r in nf.existentials]
        parts += [repeat(All, Cup(neg(r.alpha), All(r.beta)), r.n) for r in nf.universals]
    else:
        parts = [Ex0(k) for k in nf.kappas] + [All0(l) for l in nf.lambdas]
        parts += [All0(Cup(neg(r.alpha), Ex1(r.beta))) for r in nf.existentials]
        parts += [All0(Cup(neg(r.alpha), All1(r.beta))) for r in nf.universals]
    return big(Cap, parts, TOP)


def extract_requirements(nf: NormalForm) -> tuple[list, list]:
    return list(nf.existentials), list(nf.universals)


def _conjuncts(t: Term):
    if t.op == "cap" and t.arity == 0:
        yield from _conjuncts(t.args[0])
        yield from _conjuncts(t.args[1])
    else:
        yield t


def _strip_all(t: Term, op: str):
    n = 0
    while t.op == op:
        t = t.child
        n += 1
    return n, t


def from_term(term: Term, kind: str = ORDERED, vocab=None) -> NormalForm:
    """Recognize a term built in normal-form shape (sugar nodes as produced by :func:`assemble`)."""
    ex, al, ex_in, al_in = ("ex", "all", "ex", "all") if kind == ORDERED else ("ex0", "all0", "ex1", "all1")
    kap, lam, exs, uns = [], [], [], []
    if term != TOP:
        for c in _conjuncts(term):
            if c.op == ex and c.child.arity <= 1 and is_quantifier_free(c.child):
                kap.append(c.child)
                continue
            if kind == ORDERED:
                n, body = _strip_all(c, "all")
            else:
                n, body = (1, c.child) if c.op == "all0" else (0, c)
            if n == 0:
                raise TermError(f"conjunct {c} is not in normal-form shape")
            if is_quantifier_free(body) and (kind == ORDERED and n == 1 or kind != ORDERED):
                lam.append(body)
                continue
            if body.op == "cup" and body.args[1].op in (ex_in, al_in):
                alpha = neg(body.args[0])
                beta = body.args[1].child
                n_i = n if kind == ORDERED else None
                if kind == ORDERED and alpha.arity != n:
                    raise TermError(f"prefix length {n} does not match guard arity {alpha.arity}")
                (exs if body.args[1].op == ex_in else uns).append(Requirement(n_i, alpha, beta))
                continue
            raise TermError(f"conjunct {c} is not in normal-form shape")
    vocab = Vocabulary(vocab) if vocab is not None else vocabulary_of(term)
    return NormalForm(kind, tuple(kap), tuple(lam), tuple(exs), tuple(uns), vocab, vocab)


# -- conversion -------------------------------------------------------------

def _simplify_degenerate(t: Term) -> Term:
    """Replace ∩ of unequal arities and degenerate C by ⊥ (their constant value)."""
    if not t.args:
        return t
    args = tuple(_simplify_degenerate(a) for a in t.args)
    if t.op == "cap" and args[0].arity != args[1].arity:
        return BOT
    if t.op == "C" and c_arity(args[0].arity, args[1].arity) == 0:
        return BOT
    return t if args == t.args else Term(t.op, args)


class _Fresh:
    def __init__(self, taken):
        self.taken = set(taken)
        self.i = 0

    def __call__(self, arity: int) -> Term:
        while f"_nf{self.i}" in self.taken:
            self.i += 1
        name = f"_nf{self.i}"
        self.taken.add(name)
        return Rel(name, arity)


def _abstract(t: Term, kind: str, fresh: _Fresh, defs: list, memo: dict) -> Term:
    """Bottom-up replacement of quantified subterms of positive output arity."""
    if not t.args:
        return t
    args = tuple(_abstract(a, kind, fresh, defs, memo) for a in t.args)
    t = t if args == t.args else Term(t.op, args)
    c = args[0]
    if kind == ORDERED and t.op == "ex" and c.arity >= 2:
        return _define(c, "ex", c.arity - 1, fresh, defs, memo)
    if kind == ONEDIM and t.op in ("ex1", "ex0") and c.arity >= 2:
        r = _define(c, "ex1", 1, fresh, defs, memo)
        return r if t.op == "ex1" else Ex0(r)
    return t


def _define(body, quant, arity, fresh, defs, memo):
    key = (quant, body)
    if key not in memo:
        r = fresh(arity)
        memo[key] = r
        defs.append(Definition(r.name, arity, body, quant))
    return memo[key]


def _atoms(t: Term, atom_op: str) -> list:
    """Distinct sentence-level atoms (atom_op applied to a unary term), outermost first."""
    out = []
    stack = [t]
    while stack:
        u = stack.pop()
        if u.op == atom_op and u.arity == 0 and u.child.arity == 1:
            if u not in out:
                out.append(u)
        stack.extend(reversed(u.args))
    return out


def _literal_layer(t: Term, atom_op: str):
    """Split a conjunction of ±atoms into positives and negatives, or None."""
    pos, negs = [], []
    for c in _conjuncts(t):
        sign = True
        while c.op == "not":
            c, sign = c.child, not sign
        if c.op in ("top", "bot"):
            if (c.op == "top") != sign:
                pos.append(None)   # a false conjunct
            continue
        if c.op != atom_op or c.arity != 0 or not is_quantifier_free(c.child):
            return None
        (pos if sign else negs).append(c.child)
    return pos, negs


def _requirements(defs):
    exs, uns = [], []
    for d in defs:
        r = Rel(d.name, d.arity)
        n = d.arity if d.quant == "ex" else None
        exs.append(Requirement(n, r, d.body))
        uns.append(Requirement(n, Neg(r), neg(d.body)))
    return exs, uns


def _pad(t: Term, D: Term) -> Term:
    if t.op == "rel":
        return Rel(t.name, t.rel_arity + 1)
    if t.op == "top":
        return Cup(D, Neg(D))
    if t.op == "bot":
        return Cap(D, Neg(D))
    return Term(t.op, tuple(_pad(a, D) for a in t.args))


def _kind_of(ops) -> str:
    if "p" in ops:
        raise TermError("no normal form is available for terms using p")
    if "ex" in ops and ops & {"ex1", "ex0"}:
        raise TermError("mixing ∃ with ∃₁/∃₀ is not supported")
    if ops & {"ex1", "ex0"} or ("dotcap" in ops and "ex" not in ops):
        return ONEDIM
    if "dotcap" in ops:
        raise TermError("the ordered normal form does not allow ⋅∩")
    return ORDERED


def to_normal_form(term: Term, vocab=None) -> list[NormalForm]:
    """Branches of equisatisfiable normal forms for a sentence."""
    if term.arity != 0:
        raise TermError(f"normal forms are for sentences, got arity {term.arity}")
    src = Vocabulary(vocab) if vocab is not None else vocabulary_of(term)
    ops = operators_used(term)
    kind = _kind_of(ops)
    t = _simplify_degenerate(strip_identities(desugar(term)))
    atom_op = "ex" if kind == ORDERED else "ex0"
    fresh = _Fresh(src)
    defs: list = []
    memo: dict = {}
    main = _abstract(t, kind, fresh, defs, memo)

    lay = _literal_layer(main, atom_op)
    atoms = _atoms(main, atom_op)
    for d in defs:
        atoms += [a for a in _atoms(d.body, atom_op) if a not in atoms]
    if lay is not None and not any(_atoms(d.body, atom_op) for d in defs):
        pos, negs = lay
        return [_branch(kind, pos, negs, defs, src, fresh)]
    if kind == ORDERED and "C" not in ops:
        return [_padded(t, src, _Fresh(src))]
    out = []
    for vals in itertools.product((True, False), repeat=len(atoms)):
        sub = {a: TOP if v else BOT for a, v in zip(atoms, vals)}
        if not satisfied(Structure(1), replace(main, sub)):
            continue
        pos = [replace(a.child, sub) for a, v in zip(atoms, vals) if v]
        negs = [replace(a.child, sub) for a, v in zip(atoms, vals) if not v]
        bdefs = [dc_replace(d, body=replace(d.body, sub)) for d in defs]
        nf = _branch(kind, pos, negs, bdefs, src, fresh)
        out.append(dc_replace(nf, guesses=tuple(zip(atoms, vals))))
    return out


def _branch(kind, pos, negs, defs, src, fresh) -> NormalForm:
    extra = {d.name: d.arity for d in defs}
    kappas = []
    for p in pos:
        if p is None:
            D = fresh(1)
            extra[D.name] = 1
            p = Cap(D, Neg(D))
        kappas.append(p)
    exs, uns = _requirements(defs)
    return NormalForm(kind, tuple(kappas), tuple(neg(x) for x in negs), tuple(exs), tuple(uns),
                      src.extend(extra), src, tuple(defs))


def _padded(t: Term, src: Vocabulary, fresh: _Fresh) -> NormalForm:
    D = fresh(1)
    t_plus = _pad(t, D)
    defs: list = []
    main = _abstract(Ex(t_plus), ORDERED, fresh, defs, {})
    pos, negs = _literal_layer(main, "ex")
    nf = _branch(ORDERED, pos, negs, defs, src, fresh)
    voc = Vocabulary({k: ar + 1 for k, ar in src.items()}).extend({D.name: 1})
    voc = voc.extend({d.name: d.arity for d in defs})
    return dc_replace(nf, vocab=voc, padded=t_plus)


# -- rewrites ---------------------------------------------------------------

def saturate_universals(nf: NormalForm) -> NormalForm:
    if nf.kind != ONEDIM:
        raise TermError("saturation applies to one-dimensional normal forms")
    have = {(r.alpha, r.beta) for r in nf.existentials}
    extra = tuple(Requirement(None, r.alpha, r.beta) for r in nf.universals
                  if (r.alpha, r.beta) not in have)
    return dc_replace(nf, existentials=nf.existentials + extra) if extra else nf


def witness_distinctness_rewrite(nf: NormalForm) -> NormalForm:
    """Strengthen each guard α to α ∩ ¬Iβ so witnesses differ from the last guard coordinate."""
    if nf.kind != ORDERED:
        raise TermError("the witness rewrite applies to ordered normal forms")
    exs = tuple(Requirement(r.n, Cap(r.alpha, Neg(Subst(r.beta))), r.beta) if r.beta.arity >= 2 else r
                for r in nf.existentials)
    return dc_replace(nf, existentials=exs)
