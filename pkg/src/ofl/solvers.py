"""Decision procedures for the two polynomial-model fragments, plus size bounds.

Both solvers work on normal forms whose guards and bodies are quantifier-free
terms over {I, E, ¬, ∩}.  The truth of such a term at a tuple depends only on
a small table of atomic facts and on whether the last two coordinates are
equal, so the nondeterministic guesses of the textbook algorithms become
finite searches over tables.  Searches are memoized and run in a fixed order:
tables in lexicographic bit order, witness elements in index order.
"""
from __future__ import annotations

import itertools
import time
from functools import lru_cache

import numpy as np

from .ground import SAT, UNKNOWN, UNSAT, SatVerdict, brute_force_sat, check_no_finite_model_upto
from .normalform import (
    ONEDIM, ORDERED, NormalForm, from_term, to_normal_form, witness_distinctness_rewrite,
)
from .semantics import Structure, satisfied
from .terms import Term, TermError, desugar, is_quantifier_free, operators_used

__all__ = [
    "SatVerdict", "SAT", "UNSAT", "UNKNOWN", "brute_force_sat", "check_no_finite_model_upto",
    "size_bound", "fragment_bound", "solve_ordered_eq", "solve_onedim_eq", "solve", "ORDERED_EQ_OPS", "ONEDIM_EQ_OPS",
]

ORDERED_EQ_OPS = frozenset(("I", "E", "not", "cap", "ex"))
ONEDIM_EQ_OPS = frozenset(("E", "not", "cap", "ex1", "ex0"))
_QF_OPS = frozenset(("I", "E", "not", "cap"))


def _bits(width: int):
    """All bit vectors of the given width, lexicographic with False first."""
    return list(itertools.product((False, True), repeat=width))


def _n_one_types(vocab, F=()) -> int:
    from .tables import canonical_atoms
    return 2 ** len(canonical_atoms(vocab, F, 1))


def size_bound(nf: NormalForm, fragment=None) -> int:
    """Domain size that suffices for a model whenever one exists (besides size 1)."""
    ops = frozenset(fragment) if fragment is not None else None
    ni, nj = len(nf.kappas), len(nf.existentials)
    poly = max(2, 2 * max(1, ni) * max(1, nj))
    if ops is None or ops <= ORDERED_EQ_OPS or ops <= ONEDIM_EQ_OPS:
        return poly
    T = _n_one_types(nf.vocab, ops & {"I", "s"})
    if ops <= {"s", "not", "C", "cap", "ex"}:
        return max(2, 3 * max(1, nj) * T)
    if ops <= {"E", "not", "C", "cap", "ex"}:
        return max(2, T + 2 * max(1, nj) * T)
    if ops <= {"s", "E", "not", "dotcap", "ex1", "ex0"}:
        m = max(nf.vocab.values(), default=1)
        w = max(1, nj) * max(1, m - 1)
        return max(2, T * (1 + w) + 3 * T * w)
    raise TermError(f"no bounded-model theorem for operators {sorted(ops)}")


# -- quantifier-free evaluation on tables -------------------------------------------

def _qf(t: Term, j: int, tab: dict, eq: bool) -> bool:
    """Truth of a quantifier-free {I,E,¬,∩} term at a tuple of length j.

    A subterm of arity m >= j sits at the tuple padded with m - j copies of its
    last element; ``tab`` maps every symbol of arity >= j to its truth there.
    ``eq`` says whether the last two coordinates of the length-j tuple agree.
    """
    op = t.op
    if op == "rel":
        return tab[t.name]
    if op == "top":
        return True
    if op == "bot":
        return False
    if op == "not":
        return not _qf(t.args[0], j, tab, eq)
    if op == "cap":
        x, y = t.args
        if x.arity != y.arity:
            return False
        return _qf(x, j, tab, eq) and _qf(y, j, tab, eq)
    if op == "cup":
        x, y = t.args
        if x.arity != y.arity:
            return True
        return _qf(x, j, tab, eq) or _qf(y, j, tab, eq)
    if op == "E":
        m = t.arity
        return _qf(t.args[0], j, tab, eq) and (m < 2 or m > j or eq)
    if op == "I":
        return _qf(t.args[0], j, tab, eq)
    raise TermError(f"operator {op!r} is not allowed in table-level terms")


class _Level:
    """Tables of one tuple length: bit vectors over a fixed list of symbols."""

    def __init__(self, names):
        self.names = tuple(names)
        self.tables = _bits(len(self.names))

    def tab(self, bits) -> dict:
        return dict(zip(self.names, bits))

    def text(self, bits) -> str:
        return "".join("1" if b else "0" for b in bits) or "-"


def _check_qf(nf: NormalForm):
    for t in nf.kappas + nf.lambdas:
        if not is_quantifier_free(t) or not operators_used(t) <= _QF_OPS:
            raise TermError(f"normal-form part {t} is outside {{I,E,¬,∩}}")
    for r in nf.existentials + nf.universals:
        for t in (r.alpha, r.beta):
            if not is_quantifier_free(t) or not operators_used(t) <= _QF_OPS:
                raise TermError(f"normal-form part {t} is outside {{I,E,¬,∩}}")
    if any(ar == 0 for ar in nf.vocab.values()):
        raise TermError("0-ary relation symbols are not supported by the table solvers")


def _as_nf(term: Term, kind: str) -> tuple[list[NormalForm], bool]:
    """Normal-form branches; a term already in normal-form shape is taken as is."""
    try:
        nf = from_term(term, kind)
        _check_qf(nf)
        if kind == ORDERED and any(r.n != r.alpha.arity for r in nf.existentials + nf.universals):
            raise TermError("prefix mismatch")
        if any(k.arity > 1 for k in nf.kappas):
            raise TermError("κ of arity above 1")
        return [nf], True
    except TermError:
        pass
    branches = to_normal_form(term)
    for b in branches:
        _check_qf(b)
    return branches, False


def _check_fragment(term: Term, allowed: frozenset, what: str):
    if term.arity != 0:
        raise TermError(f"satisfiability needs a sentence, got arity {term.arity}")
    ops = operators_used(desugar(term))
    bad = ops - allowed
    if bad:
        raise TermError(f"{what} solver needs operators within "
                        f"{{{', '.join(sorted(allowed))}}}; found {sorted(bad)}")


def _finish(term, nf, model, stats, trace, t0, note="") -> SatVerdict:
    A = nf.decode(model) if nf is not None else model
    if not satisfied(A, term):
        raise AssertionError("solver model does not satisfy the input term; this is a bug")
    stats["time"] = time.monotonic() - t0
    return SatVerdict(SAT, A, stats, trace, note)


# -- ordered fragment ---------------------------------------------------------------

class _Ordered:
    """Memoized realizability of tuple tables for an ordered normal form.

    A node is a tuple ā of length k with its F={I} table τ (truth of
    R(ā, a_k, …, a_k) for every R of arity >= k) and the flag a_{k-1} = a_k.
    Its children are āc: the child with c = a_k has a table fixed by τ, the
    others carry freely guessed tables.  Requirements with prefix length k
    constrain the children; a node is realizable iff its fixed child and some
    free table are realizable, every applicable universal body holds there,
    and every applicable existential body holds at some realizable free table.
    """

    def __init__(self, nf: NormalForm):
        self.nf = nf
        self.maxar = max(nf.vocab.values(), default=1)
        self.levels = {k: _Level(sorted(n for n, ar in nf.vocab.items() if ar >= k))
                       for k in range(1, self.maxar + 2)}
        self.ex_at = {k: [r for r in nf.existentials if r.n == k] for k in self.levels}
        self.un_at = {k: [r for r in nf.universals if r.n == k] for k in self.levels}
        self.memo: dict = {}
        self.nodes = 0

    @lru_cache(maxsize=None)
    def truth(self, t: Term, k: int, bits, eq: bool) -> bool:
        return _qf(t, k, self.levels[k].tab(bits), eq)

    def fixed_child(self, k: int, bits) -> tuple:
        lv, ch = self.levels[k], self.levels[k + 1]
        tab = lv.tab(bits)
        return tuple(tab[n] for n in ch.names)

    def applicable(self, k, bits, eq):
        exs = [r for r in self.ex_at[k] if self.truth(r.alpha, k, bits, eq)]
        uns = [r for r in self.un_at[k] if self.truth(r.alpha, k, bits, eq)]
        return exs, uns

    def child_ok(self, k, uns, cbits, ceq) -> bool:
        return all(self.truth(r.beta, k + 1, cbits, ceq) for r in uns) and self.ok(k + 1, cbits, ceq)

    def good_free(self, k, uns):
        return [c for c in self.levels[k + 1].tables if self.child_ok(k, uns, c, False)]

    def ok(self, k: int, bits, eq: bool) -> bool:
        key = (k, bits, eq)
        got = self.memo.get(key)
        if got is not None:
            return got
        self.nodes += 1
        self.memo[key] = False  # no cycles: levels strictly increase
        if k >= self.maxar:
            res = True
        else:
            exs, uns = self.applicable(k, bits, eq)
            res = self.child_ok(k, uns, self.fixed_child(k, bits), True)
            if res:
                good = self.good_free(k, uns)
                res = bool(good) and all(any(self.truth(r.beta, k + 1, c, False) for c in good)
                                         for r in exs)
        self.memo[key] = res
        return res

    def good_types(self):
        return [b for b in self.levels[1].tables
                if all(self.truth(l, 1, b, False) for l in self.nf.lambdas) and self.ok(1, b, False)]

    def build(self, N: int, types: list, trace: list) -> Structure:
        rels = {name: np.zeros((N,) * ar, dtype=bool) for name, ar in self.nf.vocab.items()}
        lv1 = self.levels[1]

        def put(tup, k, bits):
            for name, b in zip(self.levels[k].names, bits):
                if b:
                    ar = self.nf.vocab[name]
                    rels[name][tup + (tup[-1],) * (ar - k)] = True

        def grow(tup, k, bits, eq):
            if k >= self.maxar:
                return
            exs, uns = self.applicable(k, bits, eq)
            good = self.good_free(k, uns)
            default = good[0]
            others = [c for c in range(N) if c != tup[-1]]
            chosen = {}
            for i, r in enumerate(exs):
                w = next(c for c in good if self.truth(r.beta, k + 1, c, False))
                chosen[others[i]] = w
                if trace is not None:
                    trace.append(f"guess witness {_tup(tup)}->{others[i]} {self.levels[k + 1].text(w)}")
            for c in range(N):
                if c == tup[-1]:
                    cb, ceq = self.fixed_child(k, bits), True
                else:
                    cb, ceq = chosen.get(c, default), False
                    if trace is not None and c not in chosen:
                        trace.append(f"guess table {_tup(tup + (c,))} {self.levels[k + 1].text(cb)}")
                put(tup + (c,), k + 1, cb)
                grow(tup + (c,), k + 1, cb, ceq)

        for a, b in enumerate(types):
            if trace is not None:
                trace.append(f"guess type {a} {lv1.text(b)}")
            put((a,), 1, b)
            grow((a,), 1, b, False)
        return Structure(N, rels)


def _tup(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def _assign_types(good, kappas, truth, N):
    """1-types for N elements: one witness per κ first, then the first good type."""
    types = []
    for kap in kappas:
        hit = [b for b in good if truth(kap, b)]
        if not hit:
            return None
        types.append(hit[0])
    if not good:
        return None
    while len(types) < N:
        types.append(good[0])
    return types[:N] if len(types) <= N else None


def solve_ordered_eq(term: Term, trace: bool = False, max_table_bits: int = 16) -> SatVerdict:
    """Decide a sentence of GRA(I,E,¬,∩,∃); SAT verdicts carry a re-checked model."""
    _check_fragment(term, ORDERED_EQ_OPS, "ordered")
    t0 = time.monotonic()
    tr: list | None = [] if trace else None
    stats = {"solver": "ordered", "nodes": 0}
    one = brute_force_sat(term, 1)
    if one.status == SAT:
        if tr is not None:
            tr.append("guess size 1")
        stats["size"] = 1
        return _finish(term, None, one.model, stats, tr or [], t0)
    branches, given = _as_nf(term, ORDERED)
    nf = witness_distinctness_rewrite(branches[0])
    if sum(1 for ar in nf.vocab.values()) > max_table_bits:
        return SatVerdict(UNKNOWN, stats=stats, note=f"more than {max_table_bits} table bits")
    N = size_bound(nf)
    stats.update(bound=N, kappas=len(nf.kappas), existentials=len(nf.existentials),
                 universals=len(nf.universals), padded=nf.padded is not None, given_nf=given)
    S = _Ordered(nf)
    good = S.good_types()
    types = _assign_types(good, nf.kappas, lambda t, b: S.truth(t, 1, b, False), N)
    stats["nodes"] = S.nodes
    if types is None:
        stats["time"] = time.monotonic() - t0
        return SatVerdict(UNSAT, stats=stats, trace=tr or [],
                          note=f"no model of size 1 or {N}")
    model = S.build(N, types, tr)
    stats["size"] = N
    return _finish(term, nf, model, stats, tr or [], t0)


# -- one-dimensional fragment -------------------------------------------------------

class _OneDim:
    """Per-element witness search for a one-dimensional normal form.

    Every tuple of length >= 2 has a unique first element, and a body of arity
    m only sees the m-ary atoms of its tuple and whether the last two entries
    agree, so elements can be treated one at a time.  An element needs a
    table for each applicable existential, and for completion a table obeying
    all applicable universals for each equality pattern that occurs among its
    m-tuples.  For m = 2 the equal pattern is the single pair (a, a).
    """

    def __init__(self, nf: NormalForm):
        self.nf = nf
        self.unary = _Level(sorted(n for n, ar in nf.vocab.items() if ar == 1))
        self.arities = sorted({ar for ar in nf.vocab.values() if ar >= 2})
        self.levels = {m: _Level(sorted(n for n, ar in nf.vocab.items() if ar == m)) for m in self.arities}
        self.extra_univ = [l for l in nf.lambdas if l.arity >= 2]
        self.lambdas = [l for l in nf.lambdas if l.arity < 2]
        for r in nf.existentials + nf.universals:
            if r.alpha.arity > 1 or r.beta.arity < 2 or r.beta.arity not in self.levels:
                raise TermError(f"requirement {r} has an unsupported shape")

    @lru_cache(maxsize=None)
    def truth(self, t: Term, m: int, bits, eq: bool) -> bool:
        lv = self.unary if m <= 1 else self.levels[m]
        return _qf(t, m, lv.tab(bits), eq)

    def _applies(self, r, tb) -> bool:
        return self.truth(r.alpha, 1, tb, False)

    def plan(self, tb, N):
        """Tables for an element of 1-type ``tb``, or None when it cannot be completed."""
        exs = [r for r in self.nf.existentials if self._applies(r, tb)]
        uns = [r for r in self.nf.universals if self._applies(r, tb)]
        out = {}
        for m in self.arities:
            lv = self.levels[m]
            conds = [r.beta for r in uns if r.beta.arity == m] + [l for l in self.extra_univ if l.arity == m]
            good = {eq: [b for b in lv.tables if all(self.truth(c, m, b, eq) for c in conds)]
                    for eq in (True, False)}
            patterns = (True,) if N == 1 else (True, False)
            if any(not good[eq] for eq in patterns):
                return None
            need = [r for r in exs if r.beta.arity == m]
            fixed_choices = good[True] if m == 2 else [None]
            found = None
            for fixed in fixed_choices:
                wit = []
                for r in need:
                    if fixed is not None and self.truth(r.beta, m, fixed, True):
                        wit.append((True, fixed, True))
                        continue
                    pats = (False,) if m == 2 else patterns
                    hit = next(((eq, b) for eq in pats if eq in patterns
                                for b in good[eq] if self.truth(r.beta, m, b, eq)), None)
                    if hit is None:
                        break
                    wit.append((hit[0], hit[1], False))
                else:
                    found = (fixed, wit)
                    break
            if found is None:
                return None
            out[m] = (good, found[0], found[1])
        return out

    def build(self, N, types, plans, trace) -> Structure:
        rels = {name: np.zeros((N,) * ar, dtype=bool) for name, ar in self.nf.vocab.items()}
        for a, tb in enumerate(types):
            if trace is not None:
                trace.append(f"guess type {a} {self.unary.text(tb)}")
            for name, b in zip(self.unary.names, tb):
                rels[name][a] = b
            for m, (good, fixed, wit) in plans[a].items():
                lv = self.levels[m]
                tabs = {}
                if fixed is not None:
                    tabs[(a, a)] = fixed
                    if trace is not None:
                        trace.append(f"guess table {_tup((a, a))} {lv.text(fixed)}")
                others = [c for c in range(N) if c != a]
                used = {True: 0, False: 0}
                for eq, b, on_fixed in wit:
                    if on_fixed:
                        continue
                    i = used[eq]
                    used[eq] += 1
                    if eq:
                        tup = (a,) + (a,) * (m - 3) + (i, i)
                    else:
                        tup = (a,) * (m - 1) + (others[i],)
                    tabs[tup] = b
                    if trace is not None:
                        trace.append(f"guess witness {_tup(tup)} {lv.text(b)}")
                for rest in itertools.product(range(N), repeat=m - 1):
                    tup = (a,) + rest
                    b = tabs.get(tup)
                    if b is None:
                        b = good[tup[-2] == tup[-1]][0]
                    for name, v in zip(lv.names, b):
                        if v:
                            rels[name][tup] = True
        return Structure(N, rels)


def solve_onedim_eq(term: Term, trace: bool = False) -> SatVerdict:
    """Decide a sentence of GRA(E,¬,∩,∃₁,∃₀); SAT verdicts carry a re-checked model."""
    _check_fragment(term, ONEDIM_EQ_OPS, "one-dimensional")
    t0 = time.monotonic()
    tr: list | None = [] if trace else None
    stats = {"solver": "onedim", "branches": 0}
    one = brute_force_sat(term, 1)
    if one.status == SAT:
        if tr is not None:
            tr.append("guess size 1")
        stats["size"] = 1
        return _finish(term, None, one.model, stats, tr or [], t0)
    branches, given = _as_nf(term, ONEDIM)
    for bi, nf in enumerate(branches):
        stats["branches"] += 1
        if any(k.arity > 1 for k in nf.kappas):
            raise TermError("one-dimensional κ must have arity at most 1")
        S = _OneDim(nf)
        N = size_bound(nf)
        plans = {tb: S.plan(tb, N) for tb in S.unary.tables}
        good = [tb for tb in S.unary.tables if plans[tb] is not None
                and all(S.truth(l, 1, tb, False) for l in S.lambdas)]
        types = _assign_types(good, nf.kappas,
                              lambda t, b: S.truth(t, 1, b, False),
                              N)
        if types is None:
            continue
        if tr is not None and len(branches) > 1:
            tr.append(f"guess branch {bi + 1}/{len(branches)}")
        model = S.build(N, types, [plans[tb] for tb in types], tr)
        stats.update(size=N, bound=N, given_nf=given)
        return _finish(term, nf, model, stats, tr or [], t0)
    stats["time"] = time.monotonic() - t0
    return SatVerdict(UNSAT, stats=stats, trace=tr or [], note="no branch has a model")


# -- dispatch -----------------------------------------------------------------------

def pick_solver(term: Term) -> str:
    ops = operators_used(desugar(term))
    if ops <= ORDERED_EQ_OPS:
        return "ordered"
    if ops <= ONEDIM_EQ_OPS:
        return "onedim"
    return "oracle"


def fragment_bound(term: Term) -> int | None:
    """Size bound of the term's fragment over all normal-form branches, if the fragment has one."""
    ops = operators_used(desugar(term))
    try:
        return max(size_bound(nf, ops) for nf in to_normal_form(term))
    except (TermError, ValueError):
        return None


def solve(term: Term, solver: str = "auto", max_size: int = 4, timeout: float | None = None,
          trace: bool = False) -> SatVerdict:
    """Run the requested engine; ``auto`` picks a complete solver when one applies."""
    auto = solver == "auto"
    if auto:
        solver = pick_solver(term)
    if solver == "ordered":
        return solve_ordered_eq(term, trace=trace)
    if solver == "onedim":
        return solve_onedim_eq(term, trace=trace)
    if solver == "oracle":
        bound = fragment_bound(term) if auto else None
        if bound is not None:
            v = brute_force_sat(term, bound, complete_bound=bound, timeout=timeout)
        else:
            v = brute_force_sat(term, max_size, timeout=timeout)
        v.stats.update(solver="oracle", bound=bound if bound is not None else max_size)
        return v
    raise ValueError(f"unknown solver {solver!r}")
