import itertools
import json

import numpy as np
import pytest

from ofl.fo import (
    And, Atom, Equal, Exists, FOSyntaxError, Not, eval_fo, format_fo, fo_relation, parse_fo, term_to_fo,
)
from ofl.gen import make_rng, random_term, random_vocab
from ofl.semantics import ADRelation, Structure, evaluate, random_structure, satisfied
from ofl.syntax import parse_term
from ofl.terms import (
    BOT, CORE_OPS, TOP, Cap, Neg, OneDimCap, TermError, Vocabulary,
)

V = Vocabulary({"P": 1, "R": 2, "S": 3})


def T(text):
    return parse_term(text, V)


def S_(n, **rels):
    return Structure.from_tuples(n, rels, V)


def test_swap():
    A = S_(2, R=[(0, 1)])
    assert evaluate(T("s R"), A) == ADRelation.from_tuples([(1, 0)], 2, 2)


def test_suffix_cap_matches_fo():
    A = S_(2, R=[(0, 1)], P=[(1,)])
    val = evaluate(T("R dotcap P"), A)
    assert val.tuples == [(0, 1)]
    f = And((Atom("R", (1, 2)), Atom("P", (2,))))
    assert set(val.tuples) == fo_relation(f, A, 2)


def test_eq_filter():
    A = S_(2, R=[(0, 0), (0, 1)])
    assert evaluate(T("E R"), A).tuples == [(0, 0)]


def test_ex0_nonempty():
    A = S_(3, S=[(0, 1, 2)])
    assert bool(evaluate(T("ex0 S"), A).data)
    assert repr(evaluate(T("ex0 S"), A)) == "⊤₀"


def test_subst_duplicates_last_coordinate():
    A = S_(3, S=[(0, 1, 1), (2, 0, 1)])
    assert evaluate(T("I S"), A).tuples == [(0, 1)]


def test_cyc_moves_last_to_front():
    A = S_(3, S=[(0, 1, 2)])
    # ā ∈ pX iff (a₃, a₁, a₂) ∈ X
    assert evaluate(T("p S"), A).tuples == [(1, 2, 0)]


def test_one_dim_cap():
    A = S_(3, R=[(0, 1), (1, 2)], P=[(2,)])
    assert evaluate(T("C(R, P)"), A).tuples == [(1, 2)]
    assert evaluate(T("C(P, R)"), A).tuples == [(1, 2)]
    # neither argument unary: empty 0-ary relation
    assert evaluate(OneDimCap(V.rel("R"), V.rel("S")), A).arity == 0
    assert not evaluate(OneDimCap(V.rel("R"), V.rel("S")), A)


def test_cap_unequal_arity_is_bot0():
    A = S_(2, R=[(0, 1)], P=[(0,), (1,)])
    val = evaluate(Cap(V.rel("R"), V.rel("P")), A)
    assert val.arity == 0 and not val


def test_dotcap_with_sentence_is_conjunct():
    A = S_(2, R=[(0, 1)])
    assert evaluate(T("R dotcap top"), A).tuples == [(0, 1)]
    assert evaluate(T("R dotcap bot"), A).tuples == []


def test_satisfied():
    A = S_(2, R=[(0, 1)])
    assert satisfied(A, TOP)
    assert not satisfied(A, BOT)
    assert not satisfied(A, T("ex ex (R cap not R)"))
    with pytest.raises(TermError):
        satisfied(A, T("R"))


def test_empty_relations_differ_by_arity():
    A = Structure(2)
    assert evaluate(T("not (P cap not P)"), A).arity == 1
    assert evaluate(T("bot"), A) != evaluate(Neg(Neg(T("bot"))), Structure(3))


def test_structure_json_round_trip(tmp_path):
    A = S_(3, R=[(0, 1), (2, 2)], S=[(0, 1, 2)])
    p = tmp_path / "a.json"
    p.write_text(A.dumps())
    B = Structure.load(p, V)
    assert B == A
    assert B.rel("P", 1).shape == (3,)


def test_structure_json_rejects_out_of_range():
    with pytest.raises(ValueError):
        Structure.from_json(json.loads('{"domain": 2, "relations": {"R": [[0, 2]]}}'), V)
    with pytest.raises(ValueError):
        Structure.from_json({"domain": 0}, V)


def test_isomorphism_example():
    A = S_(3, R=[(0, 1), (1, 2)], P=[(0,)])
    t = T("R dotcap not P")
    perm = [2, 0, 1]
    got = set(evaluate(t, A.permute(perm)).tuples)
    want = {tuple(perm[x] for x in tup) for tup in evaluate(t, A).tuples}
    assert got == want


# -- FO bridge ------------------------------------------------------------------------

def test_term_to_fo_examples():
    A = S_(3, R=[(0, 1), (2, 1), (1, 0)], P=[(1,)])
    f = term_to_fo(T("ex s R"))
    assert f.free_vars() == {1}
    want = Exists(2, Atom("R", (2, 1)))
    for a in range(3):
        assert eval_fo(f, A, {1: a}) == eval_fo(want, A, {1: a})
    assert format_fo(term_to_fo(T("s (s R dotcap P)"))) == "R(v1, v2) ∧ P(v1)"
    g = term_to_fo(T("E (R cup not R)"))
    for a, b in itertools.product(range(3), repeat=2):
        assert eval_fo(g, A, {1: a, 2: b}) == (a == b)


def test_eval_fo_examples():
    A = S_(2, R=[(0, 1)], P=[(0,)], S=[(0, 1, 0), (0, 1, 1)])
    assert eval_fo(Exists(1, Atom("R", (1, 2))), A, {2: 1})
    assert not eval_fo(Equal(1, 2), A, {1: 0, 2: 1})
    f = parse_fo("∀v₁(P(v₁)→∃v₂(R(v₁,v₂)∧∀v₃S(v₁,v₂,v₃)))")
    assert eval_fo(f, A, {})
    with pytest.raises(TermError):
        eval_fo(Atom("P", (1,)), A, {})


def test_parse_fo_words_and_errors():
    f = parse_fo("forall v1 (not P(v1) or exists v2 (R(v1, v2) and v1 = v2))")
    assert f.free_vars() == set()
    assert isinstance(parse_fo("~P(v1)"), Not)
    for bad in ["P(v1", "∃ P(v1)", "P(v1) ∧", "R(v1,,v2)"]:
        with pytest.raises(FOSyntaxError):
            parse_fo(bad)


def test_bridge_random():
    rng = make_rng(11)
    for _ in range(150):
        vocab = random_vocab(rng, 3, 3)
        t = random_term(rng, vocab, CORE_OPS, int(rng.integers(0, 6)), sugar=True)
        A = random_structure(vocab, int(rng.integers(1, 4)), rng)
        got = set(evaluate(t, A).tuples)
        assert got == fo_relation(term_to_fo(t), A, t.arity), str(t)


def test_random_structure_shapes():
    A = random_structure(V, 4, np.random.default_rng(0))
    assert A.rel("S", 3).shape == (4, 4, 4)
