"""Random vocabularies, terms and structures for testing and fuzzing."""
from __future__ import annotations

import os

import numpy as np

from .terms import BOT, TOP, CORE_OPS, Term, Vocabulary

UNARY = ("not", "ex", "ex1", "ex0", "E", "I", "s", "p")
BINARY = ("cap", "dotcap", "C")
SUGAR_UNARY = {"all": "ex", "all1": "ex1", "all0": "ex0"}
SUGAR_BINARY = {"cup": "cap", "dotcup": "dotcap"}


def make_rng(seed=None) -> np.random.Generator:
    """Seeded generator; falls back to the OFL_SEED environment variable, then 0."""
    if seed is None:
        seed = int(os.environ.get("OFL_SEED", "0"))
    return np.random.default_rng(seed)


def random_vocab(rng, n_symbols: int = 3, max_arity: int = 3) -> Vocabulary:
    names = ["P", "Q", "R", "S", "T", "U"]
    return Vocabulary({names[i]: int(rng.integers(1, max_arity + 1)) for i in range(n_symbols)})


def random_term(rng, vocab, ops=CORE_OPS, depth: int = 4, sugar: bool = False,
                leaf_prob: float = 0.25, consts: bool = True) -> Term:
    """A random term of depth at most ``depth`` using only operators from ``ops``.

    With ``sugar`` the sugar forms of available operators may appear too.
    """
    ops = frozenset(ops)
    unary = [o for o in UNARY if o in ops]
    binary = [o for o in BINARY if o in ops]
    if sugar:
        unary += [s for s, c in SUGAR_UNARY.items() if c in ops and "not" in ops]
        binary += [s for s, c in SUGAR_BINARY.items() if c in ops and "not" in ops]
    names = sorted(vocab)

    def leaf():
        if consts and rng.random() < 0.08:
            return TOP if rng.random() < 0.5 else BOT
        return vocab.rel(names[int(rng.integers(len(names)))])

    def go(d):
        if d == 0 or (d < depth and rng.random() < leaf_prob) or not (unary or binary):
            return leaf()
        if binary and (not unary or rng.random() < 0.35):
            op = binary[int(rng.integers(len(binary)))]
            return Term(op, (go(d - 1), go(d - 1)))
        op = unary[int(rng.integers(len(unary)))]
        return Term(op, (go(d - 1),))

    return go(depth)


def random_sentence(rng, vocab, ops=CORE_OPS, depth: int = 4, tries: int = 200, **kw) -> Term:
    """Random 0-ary term (closes positive-arity draws with the cheapest available quantifier)."""
    for _ in range(tries):
        t = random_term(rng, vocab, ops, depth, **kw)
        if t.arity == 0:
            return t
        if "ex0" in ops:
            return Term("ex0", (t,))
        if "ex" in ops:
            while t.arity:
                t = Term("ex", (t,))
            return t
    raise ValueError("could not draw a sentence with the given operators")


def _options(k: int, ops, arities: set, max_ar: int):
    """(op, child arities) producing arity k without degenerate collapses."""
    out = []
    if "not" in ops:
        out.append(("not", (k,)))
    if "cap" in ops:
        out.append(("cap", (k, k)))
    if "ex" in ops and k + 1 <= max_ar:
        out.append(("ex", (k + 1,)))
    if k >= 2:
        out += [(op, (k,)) for op in ("E", "s", "p") if op in ops]
    if "I" in ops and k >= 1 and k + 1 <= max_ar:
        out.append(("I", (k + 1,)))
    if "ex1" in ops and k == 1:
        out += [("ex1", (j,)) for j in range(2, max_ar + 1)]
    if "ex0" in ops and k == 0:
        out += [("ex0", (j,)) for j in range(1, max_ar + 1)]
    if "dotcap" in ops and k >= 1:
        out += [("dotcap", (k, j)) for j in range(k + 1)] + [("dotcap", (j, k)) for j in range(k)]
    if "C" in ops and k >= 1:
        out += [("C", (1, k)), ("C", (k, 1))] if k >= 2 else [("C", (1, 1))]
    return out


def random_typed_term(rng, vocab, ops, k: int, depth: int, leaf_prob: float = 0.3) -> Term:
    """Random term of arity exactly ``k`` over ``ops``, avoiding ∩ of unequal arities."""
    ops = frozenset(ops)
    arities = set(vocab.values())
    max_ar = max(arities)
    by_ar: dict = {}
    for name, ar in vocab.items():
        by_ar.setdefault(ar, []).append(name)
    memo: dict = {}

    def feasible(k, d):
        key = (k, d)
        if key not in memo:
            memo[key] = False  # guards against cycles through equal-arity options
            ok = k == 0 or k in by_ar or (d > 0 and any(
                all(feasible(j, d - 1) for j in ch) for _, ch in _options(k, ops, arities, max_ar)))
            memo[key] = ok
        return memo[key]

    def go(k, d):
        leaves = by_ar.get(k, [])
        opts = [(op, ch) for op, ch in _options(k, ops, arities, max_ar)
                if d > 0 and all(feasible(j, d - 1) for j in ch)]
        if k == 0 and (not opts or rng.random() < 0.05):
            return TOP if rng.random() < 0.5 else BOT
        if leaves and (not opts or rng.random() < leaf_prob or d == 0):
            return vocab.rel(leaves[int(rng.integers(len(leaves)))])
        if not opts:
            raise ValueError(f"no term of arity {k} within depth")
        w = np.array([4.0 if k == 0 and op in ("ex", "ex0") else 1.0 for op, _ in opts])
        op, ch = opts[int(rng.choice(len(opts), p=w / w.sum()))]
        return Term(op, tuple(go(j, d - 1) for j in ch))

    if not feasible(k, depth):
        raise ValueError(f"no term of arity {k} within depth {depth}")
    return go(k, depth)


def random_normal_form(rng, kind: str = "ordered", max_reqs: int = 3, max_kappas: int = 2,
                       depth: int = 3) -> Term:
    """A random sentence in normal-form shape over two symbols of arities (a, a+1).

    Parts are quantifier-free terms over {E, ¬, ∩}; ``kind`` is "ordered"
    (∀ⁿ prefixes, ∃/∀ inner) or "one-dimensional" (∀₀ outer, ∃₁/∀₁ inner).
    At most ``max_reqs`` requirements are drawn in total.
    """
    from .terms import All, All0, All1, Cap, Cup, Ex, Ex0, Ex1, big, neg, repeat

    qf = frozenset(("E", "not", "cap"))
    a = 1 if kind != "ordered" else int(rng.integers(1, 3))
    vocab = Vocabulary({"P": a, "R": a + 1})
    if kind != "ordered" and rng.random() < 0.5:
        vocab = Vocabulary({"P": 1, "R": 3})

    def part(k):
        t = random_typed_term(rng, vocab, qf, k, depth)
        if k >= 2 and rng.random() < 0.6:
            # pin the last two coordinates equal or distinct, which forces larger models
            r = vocab.rel("R" if vocab["R"] == k else "P")
            pin = Term("E", (Cup(r, neg(r)),))
            t = Cap(t, pin if rng.random() < 0.25 else neg(pin))
        return t

    parts = []
    if a == 1:
        parts += [(Ex if kind == "ordered" else Ex0)(part(1)) for _ in range(int(rng.integers(0, max_kappas + 1)))]
        if rng.random() < 0.3:
            parts.append((All if kind == "ordered" else All0)(part(1)))
    def guard(k):
        # a guard that always holds makes the requirement bite on every tuple
        if rng.random() < 0.4:
            r = vocab.rel("P" if vocab["P"] == k else "R")
            return Cup(r, neg(r))
        return part(k)

    n_req = int(rng.integers(1, max_reqs + 1))
    for _ in range(n_req):
        existential = rng.random() < 0.6
        if kind == "ordered":
            alpha, beta = guard(a), part(a + 1)
            body = Cup(neg(alpha), (Ex if existential else All)(beta))
            parts.append(repeat(All, body, a))
        else:
            alpha, beta = guard(1), part(vocab["R"])
            parts.append(All0(Cup(neg(alpha), (Ex1 if existential else All1)(beta))))
    return big(Cap, parts, TOP)


def random_ol_sentence(rng, vocab=None, depth: int = 4, max_vars: int = 3):
    """A random ordered-logic sentence; atoms use variable prefixes, quantifiers bind the next variable."""
    from .fo import And, Atom, Exists, Forall, Not, Or

    vocab = vocab or Vocabulary({"P": 1, "R": 2, "S": 3})
    by_arity: dict[int, list[str]] = {}
    for name, ar in vocab.items():
        by_arity.setdefault(ar, []).append(name)

    def atom(k):
        ars = [a for a in by_arity if 1 <= a <= k]
        if not ars:
            return None
        a = ars[int(rng.integers(len(ars)))]
        names = by_arity[a]
        return Atom(names[int(rng.integers(len(names)))], tuple(range(1, a + 1)))

    def go(k, d):
        leaf = atom(k)
        can_bind = k < max_vars and any(a <= k + 1 for a in by_arity)
        if leaf is None or (d > 0 and rng.random() < 0.8):
            r = rng.random()
            if (leaf is None or r < 0.35) and can_bind:
                Q = Exists if rng.random() < 0.5 else Forall
                return Q(k + 1, go(k + 1, d - 1))
            if leaf is not None and r < 0.5:
                return Not(go(k, d - 1))
            if leaf is not None:
                op = And if rng.random() < 0.5 else Or
                return op((go(k, d - 1), go(k, d - 1)))
        return leaf if leaf is not None else Exists(k + 1, go(k + 1, 0))

    return go(0, depth)
