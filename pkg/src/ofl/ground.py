"""Grounding terms over a fixed finite domain: the bounded model-finding oracle.

A sentence is unfolded over the domain {0..n-1} into a boolean circuit whose
inputs are the atomic facts R(t̄).  Gates are shared by structure and constants
are folded away; the circuit is then Tseitin-encoded for :class:`ofl.sat.Solver`.
"""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .sat import Solver
from .semantics import Structure, satisfied
from .terms import Term, TermError, c_arity, vocabulary_of

SAT, UNSAT, UNKNOWN = "SAT", "UNSAT", "UNKNOWN"


@dataclass
class SatVerdict:
    status: str
    model: Structure | None = None
    stats: dict = field(default_factory=dict)
    trace: list = field(default_factory=list)
    note: str = ""

    @property
    def sat(self) -> bool | None:
        return {SAT: True, UNSAT: False}.get(self.status)

    def __repr__(self):
        size = f", n={self.model.n}" if self.model is not None else ""
        return f"SatVerdict({self.status}{size})"


class Grounder:
    """Circuit builder for one domain size.  Literals are ints; constants are bools."""

    def __init__(self, n: int, solver: Solver | None = None):
        self.n = n
        self.solver = solver or Solver()
        self.atoms: dict = {}
        self._gates: dict = {}
        self._memo: dict = {}

    def atom(self, name: str, tup: tuple) -> int:
        key = (name, tup)
        v = self.atoms.get(key)
        if v is None:
            v = self.atoms[key] = self.solver.new_var()
        return v

    def declare(self, vocab):
        for name, ar in vocab.items():
            for tup in itertools.product(range(self.n), repeat=ar):
                self.atom(name, tup)

    def conj(self, xs):
        lits = set()
        for x in xs:
            if x is False:
                return False
            if x is True:
                continue
            if -x in lits:
                return False
            lits.add(x)
        if not lits:
            return True
        if len(lits) == 1:
            return next(iter(lits))
        key = frozenset(lits)
        g = self._gates.get(key)
        if g is None:
            g = self._gates[key] = self.solver.new_var(decision=False)
            for l in lits:
                self.solver.add_clause([-g, l])
            self.solver.add_clause([g] + [-l for l in lits])
        return g

    def disj(self, xs):
        return self.neg(self.conj(self.neg(x) for x in xs))

    @staticmethod
    def neg(x):
        return (not x) if isinstance(x, bool) else -x

    def lit(self, t: Term, tup: tuple):
        """Literal (or constant) for ``tup ∈ ⟦t⟧``."""
        key = (t, tup)
        got = self._memo.get(key)
        if got is not None:
            return got
        r = self._lit(t, tup)
        self._memo[key] = r
        return r

    def _lit(self, t: Term, a: tuple):
        op = t.op
        n = self.n
        if op == "rel":
            return self.atom(t.name, a)
        if op == "top":
            return True
        if op == "bot":
            return False
        if len(t.args) == 1:
            c = t.args[0]
            k = c.arity
            if op == "not":
                return self.neg(self.lit(c, a))
            if op in ("ex", "all"):
                if k == 0:
                    return self.lit(c, a)
                xs = (self.lit(c, a + (x,)) for x in range(n))
            elif op in ("ex1", "all1"):
                if k < 2:
                    return self.lit(c, a)
                xs = (self.lit(c, a + w) for w in itertools.product(range(n), repeat=k - 1))
            elif op in ("ex0", "all0"):
                if k == 0:
                    return self.lit(c, a)
                xs = (self.lit(c, w) for w in itertools.product(range(n), repeat=k))
            elif op == "E":
                if k < 2 or a[-2] == a[-1]:
                    return self.lit(c, a)
                return False
            elif op == "I":
                return self.lit(c, a if k <= 1 else a + (a[-1],))
            elif op == "s":
                return self.lit(c, a if k < 2 else a[:-2] + (a[-1], a[-2]))
            elif op == "p":
                return self.lit(c, a if k < 2 else (a[-1],) + a[:-1])
            else:
                raise TermError(f"unknown operator {op!r}")
            return self.disj(xs) if op.startswith("ex") else self.conj(xs)
        x, y = t.args
        kx, ky = x.arity, y.arity
        m = len(a)
        if op in ("cap", "cup"):
            if kx != ky:
                return op == "cup"
            parts = (self.lit(x, a), self.lit(y, a))
        elif op in ("dotcap", "dotcup"):
            parts = (self.lit(x, a[m - kx:]), self.lit(y, a[m - ky:]))
        elif op == "C":
            if c_arity(kx, ky) == 0:
                return False
            if kx == ky:
                parts = (self.lit(x, a), self.lit(y, a))
            elif kx == 1:
                parts = (self.lit(x, a[-1:]), self.lit(y, a))
            else:
                parts = (self.lit(x, a), self.lit(y, a[-1:]))
        else:
            raise TermError(f"unknown operator {op!r}")
        return self.conj(parts) if op in ("cap", "dotcap", "C") else self.disj(parts)

    def assert_true(self, x) -> bool:
        if x is True:
            return True
        if x is False:
            self.solver.ok = False
            return False
        return self.solver.add_clause([x])

    def decode(self, model: list[bool], vocab) -> Structure:
        rels = {name: np.zeros((self.n,) * ar, dtype=bool) for name, ar in vocab.items()}
        for (name, tup), v in self.atoms.items():
            if name in rels and model[v]:
                rels[name][tup] = True
        return Structure(self.n, rels)


def ground(term: Term, n: int, vocab=None) -> Grounder:
    if term.arity != 0:
        raise TermError(f"grounding needs a sentence, got arity {term.arity}")
    g = Grounder(n)
    g.assert_true(g.lit(term, ()))
    return g


def brute_force_sat(term: Term, max_size: int, vocab=None, *, min_size: int = 1,
                    complete_bound: int | None = None, timeout: float | None = None) -> SatVerdict:
    """Search models of size min_size..max_size by grounding and SAT solving.

    Returns UNSAT only when ``complete_bound`` is given and every size up to it
    was refuted; otherwise an exhausted search is UNKNOWN.
    """
    if term.arity != 0:
        raise TermError(f"satisfiability needs a sentence, got arity {term.arity}")
    vocab = dict(vocab) if vocab is not None else dict(vocabulary_of(term))
    t0 = time.monotonic()
    stats = {"sizes": [], "vars": 0, "conflicts": 0}
    for n in range(min_size, max_size + 1):
        left = None if timeout is None else timeout - (time.monotonic() - t0)
        if left is not None and left <= 0:
            return SatVerdict(UNKNOWN, stats=stats, note=f"timeout before size {n}")
        g = ground(term, n, vocab)
        r = g.solver.solve(timeout=left) if g.solver.ok else False
        stats["sizes"].append(n)
        stats["vars"] += g.solver.nvars
        stats["conflicts"] += g.solver.stats["conflicts"]
        if r is None:
            return SatVerdict(UNKNOWN, stats=stats, note=f"timeout at size {n}")
        if r:
            A = g.decode(g.solver.model(), vocab)
            if not satisfied(A, term):
                raise AssertionError("grounding produced a non-model; this is a bug")
            stats["time"] = time.monotonic() - t0
            return SatVerdict(SAT, A, stats)
    stats["time"] = time.monotonic() - t0
    if complete_bound is not None and max_size >= complete_bound:
        return SatVerdict(UNSAT, stats=stats, note=f"no model up to complete bound {complete_bound}")
    return SatVerdict(UNKNOWN, stats=stats, note=f"no model up to size {max_size}")


def check_no_finite_model_upto(term: Term, n: int, vocab=None, timeout: float | None = None) -> bool:
    v = brute_force_sat(term, n, vocab, timeout=timeout)
    if v.status == UNKNOWN and "timeout" in v.note:
        raise TimeoutError(v.note)
    return v.status != SAT


def count_models(term: Term, n: int, vocab=None, limit: int | None = None) -> int:
    """Number of structures of size n over ``vocab`` satisfying the sentence."""
    vocab = dict(vocab) if vocab is not None else dict(vocabulary_of(term))
    g = ground(term, n, vocab)
    g.declare(vocab)
    inputs = list(g.atoms.values())
    count = 0
    while g.solver.solve():
        count += 1
        if limit is not None and count >= limit:
            break
        m = g.solver.model()
        if not g.solver.add_clause([-v if m[v] else v for v in inputs]):
            break
    return count
