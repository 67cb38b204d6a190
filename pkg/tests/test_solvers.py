import re

import pytest

from ofl.gen import make_rng, random_typed_term
from ofl.ground import SAT, UNKNOWN, UNSAT, brute_force_sat
from ofl.normalform import ONEDIM, ORDERED, from_term
from ofl.reductions import infinity_axiom, infinity_axiom_c_free
from ofl.semantics import satisfied
from ofl.solvers import (
    check_no_finite_model_upto, fragment_bound, pick_solver, size_bound, solve, solve_onedim_eq,
    solve_ordered_eq,
)
from ofl.syntax import parse_term
from ofl.terms import TermError, Vocabulary

V = Vocabulary({"P": 1, "R": 2})


def T(text, vocab=V):
    return parse_term(text, vocab)


def _ordered_nf(n_kappas, n_ex):
    parts = ["ex P"] * n_kappas + ["all (not P cup ex R)"] * n_ex
    return from_term(T(" cap ".join(parts) or "top"), ORDERED)


def test_size_bound_examples():
    assert size_bound(_ordered_nf(2, 3)) == 12
    assert size_bound(_ordered_nf(0, 0)) == 2
    nf = from_term(T("ex0 P cap all0 (not P cup ex1 R) cap all0 (P cup ex1 R)"), ONEDIM)
    assert size_bound(nf) == 4


def test_size_bound_other_fragments():
    nf = _ordered_nf(1, 1)
    # without I the only unary atom is P(x), so there are two 1-types
    assert size_bound(nf, {"s", "not", "C", "cap", "ex"}) == 3 * 1 * 2
    assert size_bound(nf, {"E", "not", "C", "cap", "ex"}) == 2 + 2 * 2
    with pytest.raises(TermError):
        size_bound(nf, {"p", "not", "cap", "ex"})


def test_ordered_examples():
    assert solve_ordered_eq(T("ex ex (R cap not R)")).status == UNSAT
    v = solve_ordered_eq(T("all ex (R cap not E (R cup not R))"))
    assert v.status == SAT
    assert v.model.n <= v.stats["bound"]
    assert satisfied(v.model, T("all ex (R cap not E (R cup not R))"))


def test_onedim_examples():
    assert solve_onedim_eq(T("ex0 P cap all0 not P")).status == UNSAT
    t = T("ex0 P cap all0 (not P cup ex1 R)")
    v = solve_onedim_eq(t)
    assert v.status == SAT and v.model.n <= 2 and satisfied(v.model, t)


def test_wrong_fragment():
    with pytest.raises(TermError):
        solve_ordered_eq(T("ex ex s R"))
    with pytest.raises(TermError):
        solve_onedim_eq(T("ex ex R"))


def test_trace_lines():
    v = solve_ordered_eq(T("all ex (R cap not E (R cup not R))"), trace=True)
    assert v.trace
    for line in v.trace:
        assert re.fullmatch(r"guess (type|witness|table|size) .+", line), line
    v = solve_onedim_eq(T("ex0 P cap all0 (not P cup ex1 (R cap not E R))"), trace=True)
    assert v.status == SAT and all(line.startswith("guess ") for line in v.trace)


def test_pick_and_auto():
    assert pick_solver(T("all ex (R cap not E R)")) == "ordered"
    assert pick_solver(T("ex0 P cap all0 (not P cup ex1 R)")) == "onedim"
    assert pick_solver(T("ex ex s R")) == "oracle"
    v = solve(T("ex ex (s R cap not R)"), "auto")
    assert v.status == SAT and v.stats["solver"] == "oracle"
    assert fragment_bound(T("ex ex (s R cap not R)")) is not None
    assert fragment_bound(T("ex ex p R")) is None
    v = solve(T("ex ex (s R cap not s R)"), "auto")
    assert v.status == UNSAT


def test_oracle_solver_is_bounded():
    v = solve(T("ex ex (R cap not R)"), "oracle", max_size=2)
    assert v.status == UNKNOWN


def test_infinity_axioms_have_no_small_models():
    assert check_no_finite_model_upto(infinity_axiom(), 3)
    assert check_no_finite_model_upto(infinity_axiom_c_free(), 3)
    assert not check_no_finite_model_upto(T("ex P"), 1)


@pytest.mark.parametrize("kind,ops,vocab", [
    ("ordered", {"E", "not", "cap", "ex"}, Vocabulary({"P": 1, "R": 2})),
    ("ordered", {"I", "E", "not", "cap", "ex"}, Vocabulary({"R": 2, "S": 3})),
    ("onedim", {"E", "not", "cap", "ex1", "ex0"}, Vocabulary({"P": 1, "R": 2})),
    ("onedim", {"E", "not", "cap", "ex1", "ex0"}, Vocabulary({"P": 1, "S": 3})),
])
def test_full_pipeline_against_oracle(kind, ops, vocab):
    rng = make_rng(31)
    solver = solve_ordered_eq if kind == "ordered" else solve_onedim_eq
    for _ in range(40):
        t = random_typed_term(rng, vocab, ops, 0, int(rng.integers(2, 6)))
        v = solver(t)
        o = brute_force_sat(t, 3, vocab)
        if v.status == SAT:
            assert satisfied(v.model, t)
        if o.status == SAT:
            assert v.status == SAT, str(t)
        if v.status == UNSAT:
            assert o.status != SAT
