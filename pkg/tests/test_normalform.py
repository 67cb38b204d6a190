import pytest

from ofl.gen import make_rng, random_normal_form, random_typed_term
from ofl.ground import SAT, brute_force_sat
from ofl.normalform import (
    ONEDIM, ORDERED, Requirement, assemble, extract_requirements, from_term, saturate_universals,
    to_normal_form, witness_distinctness_rewrite,
)
from ofl.semantics import satisfied
from ofl.syntax import parse_term
from ofl.terms import Cap, Neg, Subst, TermError, Vocabulary, is_quantifier_free, operators_used

V = Vocabulary({"P": 1, "R": 2})


def T(text, vocab=V):
    return parse_term(text, vocab)


def sat3(t, vocab=None):
    return brute_force_sat(t, 3, vocab).status == SAT


def test_exists_exists_R():
    (nf,) = to_normal_form(T("ex ex R"))
    assert nf.kind == ORDERED
    fresh = [n for n in nf.vocab if n not in V]
    assert fresh == ["_nf0"] and nf.vocab["_nf0"] == 1
    assert str(nf) == "ex _nf0 cap all (not _nf0 cup ex R) cap all (_nf0 cup all not R)"
    ex, un = extract_requirements(nf)
    assert ex == [Requirement(1, T("_nf0", nf.vocab), T("R"))]
    assert len(un) == 1


def test_already_normal():
    t = T("ex (P cap not P)")
    (nf,) = to_normal_form(t)
    assert assemble(nf) == t


def test_from_term_round_trip():
    t = T("ex P cap all (not P cup ex R) cap all (P cup all not R)")
    nf = from_term(t, ORDERED)
    assert assemble(nf) == t
    assert nf.to_term() == t


def test_empty_requirements():
    nf = from_term(T("ex P"), ORDERED)
    assert extract_requirements(nf) == ([], [])


@pytest.mark.parametrize("text,msg", [
    ("ex ex p R", "p"),
    ("ex ex R cap ex0 P", "mixing"),
    ("ex R", "sentence"),
])
def test_rejections(text, msg):
    with pytest.raises(TermError, match=msg):
        to_normal_form(T(text))


def test_guards_and_bodies_quantifier_free():
    rng = make_rng(4)
    for _ in range(40):
        t = random_typed_term(rng, V, {"E", "not", "cap", "ex"}, 0, 4)
        for nf in to_normal_form(t, V):
            for r in nf.existentials + nf.universals:
                assert is_quantifier_free(r.alpha) and is_quantifier_free(r.beta)


def test_branch_counts():
    # C blocks padding, so the unary ∃ subterm is guessed
    t = T("ex C(R, P) cap ex P")
    branches = to_normal_form(t)
    assert 1 <= len(branches) <= 2 ** 2
    assert sat3(t) == any(sat3(nf.to_term(), nf.vocab) for nf in branches)
    assert len(to_normal_form(T("ex ex (R cap not E R) cap ex P"))) == 1


def test_one_dimensional_branches():
    t = T("ex0 P cap all0 (not P cup all1 R)")
    branches = to_normal_form(t)
    assert all(nf.kind == ONEDIM for nf in branches)
    for nf in branches:
        assert all(nf.vocab[n] == 1 for n in nf.vocab if n not in V)
    assert sat3(t) == any(sat3(nf.to_term(), nf.vocab) for nf in branches)


def test_equisatisfiable_random():
    rng = make_rng(8)
    vocab = Vocabulary({"P": 1, "R": 2})
    for _ in range(50):
        t = random_typed_term(rng, vocab, {"E", "not", "cap", "ex"}, 0, int(rng.integers(2, 5)))
        branches = to_normal_form(t, vocab)
        assert len(branches) == 1
        assert sat3(t, vocab) == any(sat3(nf.to_term(), nf.vocab) for nf in branches), str(t)
        for nf in branches:
            v = brute_force_sat(nf.to_term(), 3, nf.vocab)
            if v.status == SAT:
                assert satisfied(nf.decode(v.model), t)


def test_expand_gives_model_of_branch():
    rng = make_rng(9)
    for _ in range(30):
        t = random_typed_term(rng, V, {"E", "not", "cap", "ex"}, 0, 4)
        v = brute_force_sat(t, 3, V)
        if v.status != SAT:
            continue
        (nf,) = to_normal_form(t, V)
        assert satisfied(nf.expand(v.model), nf.to_term())


def test_saturate_universals():
    nf = from_term(T("all0 (not P cup all1 R)"), ONEDIM)
    sat = saturate_universals(nf)
    assert sat.existentials == (Requirement(None, T("P"), T("R")),)
    assert saturate_universals(sat) == sat
    with pytest.raises(TermError):
        saturate_universals(from_term(T("ex P"), ORDERED))


def test_saturate_preserves_sat():
    rng = make_rng(10)
    for _ in range(50):
        t = random_normal_form(rng, ONEDIM)
        nf = from_term(t, ONEDIM)
        assert sat3(t, nf.vocab) == sat3(saturate_universals(nf).to_term(), nf.vocab)


def test_witness_rewrite():
    nf = from_term(T("all (not P cup ex (R cap not E R))"), ORDERED)
    out = witness_distinctness_rewrite(nf)
    (r,) = out.existentials
    assert r.alpha == Cap(T("P"), Neg(Subst(T("R cap not E R"))))
    assert "I" in operators_used(out.to_term())
    # unary bodies are left alone
    nf1 = from_term(T("all (not P cup ex P)", Vocabulary({"P": 1})), ORDERED)
    assert witness_distinctness_rewrite(nf1) == nf1
    with pytest.raises(TermError):
        witness_distinctness_rewrite(from_term(T("all0 (not P cup ex1 R)"), ONEDIM))


def test_witness_rewrite_preserves_sat():
    rng = make_rng(12)
    for _ in range(50):
        t = random_normal_form(rng, ORDERED)
        nf = from_term(t, ORDERED)
        assert sat3(t, nf.vocab) == sat3(witness_distinctness_rewrite(nf).to_term(), nf.vocab)
