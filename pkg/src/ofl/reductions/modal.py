"""Modal formulas, their translations into terms, and a Kripke-model oracle.

Formulas use prefix text: ``dia``, ``box``, ``dia1``, ``dia2``, ``box1``,
``box2``, ``and``, ``or``, ``not`` and propositions such as ``p1`` or ``q``.
``box`` and ``or`` are stored as their ¬◊¬ and ¬(¬∧¬) expansions.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from ..ground import SAT, UNKNOWN, UNSAT, Grounder
from ..terms import All, Cap, Cup, Ex, Neg, Rel, Swap, Term, TermError, Vocabulary, big


class ModalSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class MProp:
    name: str


@dataclass(frozen=True)
class MNot:
    body: object


@dataclass(frozen=True)
class MAnd:
    left: object
    right: object


@dataclass(frozen=True)
class MDia:
    agent: int  # 0 for the single-agent ◊, else 1 or 2
    body: object


def MBox(agent, body):
    return MNot(MDia(agent, MNot(body)))


def MOr(a, b):
    return MNot(MAnd(MNot(a), MNot(b)))


_KEYWORDS = {"dia": 0, "dia1": 1, "dia2": 2, "box": 0, "box1": 1, "box2": 2}


def parse_modal(text: str):
    toks = [t for t in re.split(r"[\s(),]+", text) if t]
    pos = 0

    def go():
        nonlocal pos
        if pos >= len(toks):
            raise ModalSyntaxError("unexpected end of modal formula")
        tok = toks[pos]
        pos += 1
        if tok == "not":
            return MNot(go())
        if tok in ("and", "or"):
            a = go()
            b = go()
            return MAnd(a, b) if tok == "and" else MOr(a, b)
        if tok in _KEYWORDS:
            body = go()
            return MDia(_KEYWORDS[tok], body) if tok.startswith("dia") else MBox(_KEYWORDS[tok], body)
        if re.fullmatch(r"[a-z][A-Za-z0-9_]*", tok):
            return MProp(tok)
        raise ModalSyntaxError(f"unexpected token {tok!r}")

    f = go()
    if pos != len(toks):
        raise ModalSyntaxError(f"trailing input starting at {toks[pos]!r}")
    return f


def format_modal(f) -> str:
    if isinstance(f, MProp):
        return f.name
    if isinstance(f, MNot):
        return f"not {format_modal(f.body)}"
    if isinstance(f, MAnd):
        return f"and {format_modal(f.left)} {format_modal(f.right)}"
    kw = "dia" if f.agent == 0 else f"dia{f.agent}"
    return f"{kw} {format_modal(f.body)}"


def modal_depth(f) -> int:
    if isinstance(f, MProp):
        return 0
    if isinstance(f, MNot):
        return modal_depth(f.body)
    if isinstance(f, MAnd):
        return max(modal_depth(f.left), modal_depth(f.right))
    return 1 + modal_depth(f.body)


def subformulas(f) -> list:
    """Distinct subformulas in post-order (children before parents)."""
    out: list = []

    def go(g):
        if isinstance(g, MNot) or isinstance(g, MDia):
            go(g.body)
        elif isinstance(g, MAnd):
            go(g.left)
            go(g.right)
        if g not in out:
            out.append(g)

    go(f)
    return out


def propositions(f) -> list:
    return sorted({g.name for g in subformulas(f) if isinstance(g, MProp)})


def agents(f) -> set:
    return {g.agent for g in subformulas(f) if isinstance(g, MDia)}


def _prop_index(name: str) -> str:
    m = re.fullmatch(r"p(\d+)", name)
    return m.group(1) if m else name


def random_modal(rng, depth: int = 2, n_props: int = 3, size: int = 4, agent_choices=(0,)):
    """Random formula of modal depth at most ``depth`` with roughly ``size`` connectives."""
    props = [f"p{i + 1}" for i in range(n_props)]

    def go(d, s):
        if s <= 0 or rng.random() < 0.2:
            return MProp(props[int(rng.integers(n_props))])
        r = rng.random()
        if r < 0.25:
            return MNot(go(d, s - 1))
        if r < 0.55 or d == 0:
            k = int(rng.integers(0, s))
            return MAnd(go(d, k), go(d, s - 1 - k))
        a = agent_choices[int(rng.integers(len(agent_choices)))]
        body = go(d - 1, s - 1)
        return MDia(a, body) if rng.random() < 0.5 else MBox(a, body)

    return go(depth, size)


# -- serial modal logic into GRA(¬,∩,∃) ----------------------------------------------

def modal_to_term(f) -> tuple[Term, Vocabulary]:
    """∃t₁(φ) with R_i_k of arity k standing for proposition p_i at depth k."""
    if agents(f) - {0}:
        raise TermError("two-agent formula: use s52_to_term")
    d = modal_depth(f)
    vocab = Vocabulary({f"R_{_prop_index(p)}_{k}": k for p in propositions(f) for k in range(1, d + 2)})

    def t(g, k):
        if isinstance(g, MProp):
            return Rel(f"R_{_prop_index(g.name)}_{k}", k)
        if isinstance(g, MNot):
            return Neg(t(g.body, k))
        if isinstance(g, MAnd):
            return Cap(t(g.left, k), t(g.right, k))
        return Ex(t(g.body, k + 1))

    return Ex(t(f, 1)), vocab


# -- S5² into GRA(s,¬,∩,∃) --------------------------------------------------------

def s52_to_term(f) -> tuple[Term, Vocabulary]:
    """Worlds are pairs; agent 1 moves the second coordinate, agent 2 the first."""
    if 0 in agents(f):
        raise TermError("single-agent modality in an S5² formula (use dia1/dia2)")
    subs = subformulas(f)
    dias = [g for g in subs if isinstance(g, MDia)]
    name = {g: f"S_dia{g.agent}_{i}" for i, g in enumerate(dias)}
    vocab = Vocabulary({**{f"P_{_prop_index(p)}": 2 for p in propositions(f)},
                        **{n: 2 for n in name.values()}})

    def t(g):
        if isinstance(g, MProp):
            return Rel(f"P_{_prop_index(g.name)}", 2)
        if isinstance(g, MNot):
            return Neg(t(g.body))
        if isinstance(g, MAnd):
            return Cap(t(g.left), t(g.right))
        return Rel(name[g], 2)

    parts = [Ex(Ex(t(f)))]
    for g in dias:
        S, body = Rel(name[g], 2), t(g.body)
        if g.agent == 1:
            parts.append(All(Cap(Cup(Neg(Ex(S)), Ex(body)), Cup(Neg(Ex(body)), All(S)))))
    for g in dias:
        S, body = Rel(name[g], 2), t(g.body)
        if g.agent == 2:
            parts.append(All(Cap(Cup(Neg(Ex(Swap(S))), Ex(Swap(body))),
                                 Cup(Neg(Ex(Swap(body))), All(Swap(S))))))
    return big(Cap, parts, None), vocab


# -- Kripke oracle ---------------------------------------------------------------

@dataclass
class KripkeModel:
    n: int
    access: np.ndarray                      # (n, n) bool
    valuation: dict = field(default_factory=dict)  # prop -> (n,) bool
    root: int = 0

    def forces(self, f, w: int | None = None) -> bool:
        w = self.root if w is None else w
        if isinstance(f, MProp):
            return bool(self.valuation.get(f.name, np.zeros(self.n, bool))[w])
        if isinstance(f, MNot):
            return not self.forces(f.body, w)
        if isinstance(f, MAnd):
            return self.forces(f.left, w) and self.forces(f.right, w)
        return any(self.forces(f.body, v) for v in range(self.n) if self.access[w, v])

    def is_serial(self) -> bool:
        return bool(self.access.any(axis=1).all())


@dataclass
class KripkeVerdict:
    status: str
    model: KripkeModel | None = None
    note: str = ""


def complete_world_bound(f) -> int:
    """Worlds that suffice for a serial model: a tree of depth d with fan-out b."""
    b = max(1, sum(1 for g in subformulas(f) if isinstance(g, MDia)))
    return sum(b ** i for i in range(modal_depth(f) + 1))


def kripke_sat(f, max_worlds: int = 4, serial: bool = True) -> KripkeVerdict:
    """Search all Kripke models with up to ``max_worlds`` worlds for one forcing φ at world 0.

    The search is exhaustive per size (a SAT encoding of accessibility and
    valuation).  Without a model it reports UNSAT when ``max_worlds`` reaches
    :func:`complete_world_bound`, else UNKNOWN.
    """
    if agents(f) - {0}:
        raise TermError("kripke_sat handles single-agent formulas")
    props = propositions(f)
    for n in range(1, max_worlds + 1):
        g = Grounder(n)
        memo: dict = {}

        def lit(h, w):
            key = (h, w)
            if key in memo:
                return memo[key]
            if isinstance(h, MProp):
                r = g.atom(h.name, (w,))
            elif isinstance(h, MNot):
                r = g.neg(lit(h.body, w))
            elif isinstance(h, MAnd):
                r = g.conj((lit(h.left, w), lit(h.right, w)))
            else:
                r = g.disj([g.conj((g.atom("_acc", (w, v)), lit(h.body, v))) for v in range(n)])
            memo[key] = r
            return r

        for w in range(n):
            for v in range(n):
                g.atom("_acc", (w, v))
            for p in props:
                g.atom(p, (w,))
            if serial:
                g.solver.add_clause([g.atom("_acc", (w, v)) for v in range(n)])
        if g.assert_true(lit(f, 0)) and g.solver.solve():
            m = g.solver.model()
            acc = np.array([[m[g.atom("_acc", (w, v))] for v in range(n)] for w in range(n)], dtype=bool)
            val = {p: np.array([m[g.atom(p, (w,))] for w in range(n)], dtype=bool) for p in props}
            model = KripkeModel(n, acc, val)
            assert model.forces(f) and (model.is_serial() or not serial)
            return KripkeVerdict(SAT, model)
    bound = complete_world_bound(f)
    if max_worlds >= bound:
        return KripkeVerdict(UNSAT, note=f"no model up to {max_worlds} worlds (complete bound {bound})")
    return KripkeVerdict(UNKNOWN, note=f"no model up to {max_worlds} worlds")
