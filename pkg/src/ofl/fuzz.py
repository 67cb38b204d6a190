"""Differential fuzzing of the solvers against the grounding oracle, and operator laws.

Every instance draws from its own generator seeded with (seed, suite, index),
so any single instance can be replayed without rerunning the batch.
"""
from __future__ import annotations

import json
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .gen import random_normal_form, random_term, random_vocab
from .ground import SAT, brute_force_sat
from .normalform import ONEDIM, ORDERED, from_term
from .semantics import Structure, evaluate, random_structure
from .solvers import size_bound, solve_onedim_eq, solve_ordered_eq
from .syntax import dumps_term_file
from .terms import (
    CORE_OPS, Cap, Cyc, DotCap, Eq, Ex, Neg, OneDimCap, Subst, Swap, Term, desugar, repeat,
)

SUITES = {"ordered": (0, ORDERED, solve_ordered_eq), "onedim": (1, ONEDIM, solve_onedim_eq)}
LAWS = ("arity", "isomorphism", "ss=id", "p^k=id", "EE=E", "I=exE", "dotcap=cap", "C=cap", "desugar")


def instance_rng(seed: int, suite: int, index: int) -> np.random.Generator:
    return np.random.default_rng((seed, suite, index))


# -- laws ---------------------------------------------------------------------------

def _permuted(rel, perm) -> np.ndarray:
    if rel.ndim == 0:
        return rel
    return Structure(len(perm), {"_": rel}).permute(perm).relations["_"]


def law_violations(term: Term, A: Structure, rng) -> list[str]:
    """Names of the laws that fail for ``term`` on ``A``."""
    bad = []
    val = evaluate(term, A)
    k = term.arity

    def same(other: Term) -> bool:
        return evaluate(other, A) == val

    if val.arity != k:
        bad.append("arity")
    perm = rng.permutation(A.n)
    if not np.array_equal(evaluate(term, A.permute(perm)).data, _permuted(val.data, perm)):
        bad.append("isomorphism")
    if not same(Swap(Swap(term))):
        bad.append("ss=id")
    if k >= 1 and not same(repeat(Cyc, term, k)):
        bad.append("p^k=id")
    if evaluate(Eq(Eq(term)), A) != evaluate(Eq(term), A):
        bad.append("EE=E")
    if k >= 2 and evaluate(Subst(term), A) != evaluate(Ex(Eq(term)), A):
        bad.append("I=exE")
    other = Neg(Cyc(term))
    if evaluate(DotCap(term, other), A) != evaluate(Cap(term, other), A):
        bad.append("dotcap=cap")
    if k == 1 and evaluate(OneDimCap(term, other), A) != evaluate(Cap(term, other), A):
        bad.append("C=cap")
    if not same(desugar(term)):
        bad.append("desugar")
    return bad


# -- report -------------------------------------------------------------------------

@dataclass
class Disagreement:
    suite: str
    index: int
    seed: int
    term: str
    solver: str
    oracle: str
    note: str = ""


@dataclass
class FuzzReport:
    seed: int
    counts: dict = field(default_factory=dict)
    verdicts: dict = field(default_factory=dict)      # suite -> Counter of statuses
    records: list = field(default_factory=list)       # one dict per instance
    disagreements: list = field(default_factory=list)
    law_checks: int = 0
    law_violations: list = field(default_factory=list)  # (index, law, term)

    @property
    def ok(self) -> bool:
        return not self.disagreements and not self.law_violations

    def as_dict(self) -> dict:
        """Deterministic summary (timings are left out)."""
        laws = Counter(law for _, law, _ in self.law_violations)
        return {
            "schema": 1,
            "seed": self.seed,
            "suites": {s: {"instances": self.counts[s], **dict(sorted(self.verdicts[s].items()))}
                       for s in self.counts},
            "disagreements": [d.__dict__ for d in self.disagreements],
            "laws": {"checks": self.law_checks, "violations": {l: laws.get(l, 0) for l in LAWS}},
            "max_size_over_bound": max((r["size"] / r["bound"] for r in self.records
                                        if r["size"] is not None), default=0.0),
        }

    def text(self) -> str:
        d = self.as_dict()
        lines = [f"fuzz seed {self.seed}"]
        for s, c in d["suites"].items():
            rest = ", ".join(f"{k} {v}" for k, v in c.items() if k != "instances")
            lines.append(f"  {s}: {c['instances']} instances ({rest})")
        lines.append(f"  disagreements: {len(self.disagreements)}")
        for x in self.disagreements:
            lines.append(f"    {x.suite}#{x.index} seed {x.seed}: solver {x.solver}, oracle {x.oracle}: {x.term}")
        viol = sum(d["laws"]["violations"].values())
        lines.append(f"  laws: {self.law_checks} checks, {viol} violations")
        for i, law, t in self.law_violations[:20]:
            lines.append(f"    #{i} {law}: {t}")
        lines.append("  result: " + ("ok" if self.ok else "FAILED"))
        return "\n".join(lines) + "\n"

    def dumps(self) -> str:
        return json.dumps(self.as_dict(), indent=2, sort_keys=True) + "\n"


def _write_failure(out: Path, d: Disagreement, term: Term, vocab):
    out.mkdir(parents=True, exist_ok=True)
    header = (f"{d.suite} instance {d.index}, seed {d.seed}: solver {d.solver}, oracle {d.oracle}; "
              f"replay with instance_rng({d.seed}, {SUITES[d.suite][0]}, {d.index})")
    (out / f"{d.suite}-{d.index}.term").write_text(dumps_term_file(term, vocab, header), encoding="utf-8")


def run_fuzz(seed: int = 0, n_terms: int = 100, n_laws: int = 1000, suites=("ordered", "onedim"),
             failures_dir=None, progress=None) -> FuzzReport:
    rep = FuzzReport(seed)
    for name in suites:
        sid, kind, solver = SUITES[name]
        rep.counts[name] = n_terms
        rep.verdicts[name] = Counter()
        for i in range(n_terms):
            rng = instance_rng(seed, sid, i)
            t = random_normal_form(rng, kind)
            nf = from_term(t, kind)
            bound = size_bound(nf)
            t0 = time.perf_counter()
            v = solver(t)
            t1 = time.perf_counter()
            o = brute_force_sat(t, bound, complete_bound=bound)
            t2 = time.perf_counter()
            rep.verdicts[name][v.status] += 1
            size = v.model.n if v.model is not None else None
            rep.records.append({"suite": name, "index": i, "status": v.status, "oracle": o.status,
                                "size": size, "bound": bound, "solver_time": t1 - t0, "oracle_time": t2 - t1})
            note = ""
            if v.status == SAT and size > bound:
                note = f"model size {size} exceeds bound {bound}"
            if v.status != o.status or note:
                d = Disagreement(name, i, seed, str(t), v.status, o.status, note)
                rep.disagreements.append(d)
                if failures_dir is not None:
                    _write_failure(Path(failures_dir), d, t, nf.source_vocab)
            if progress:
                progress(name, i)
    for i in range(n_laws):
        rng = instance_rng(seed, 99, i)
        vocab = random_vocab(rng, int(rng.integers(1, 4)), 3)
        t = random_term(rng, vocab, CORE_OPS, int(rng.integers(1, 6)), sugar=True)
        A = random_structure(vocab, int(rng.integers(1, 5)), rng)
        rep.law_checks += 1
        for law in law_violations(t, A, rng):
            rep.law_violations.append((i, law, str(t)))
    return rep

