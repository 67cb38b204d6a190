import itertools

import numpy as np
import pytest

from ofl.semantics import Structure, evaluate, random_structure
from ofl.tables import AtomPattern, canonical_atoms, is_king, kings, one_type, similar, table_of
from ofl.terms import BOT, TOP, Term, TermError, Vocabulary

V = Vocabulary({"P": 1, "R": 2})


def test_canonical_atoms_examples():
    assert canonical_atoms({"R": 2, "P": 1}, set(), 2) == (AtomPattern("R", (0, 1)),)
    assert set(canonical_atoms({"R": 2}, {"s"}, 2)) == {AtomPattern("R", (0, 1)), AtomPattern("R", (1, 0))}
    assert canonical_atoms({"S": 3}, {"I"}, 2) == (AtomPattern("S", (0, 1, 1)),)


def test_canonical_atoms_bounded():
    vocab = {"S": 3, "R": 2, "P": 1}
    for k in (1, 2, 3):
        atoms = canonical_atoms(vocab, {"I", "s"}, k)
        assert len(atoms) <= sum(k ** a for a in vocab.values())
        assert len(set(atoms)) == len(atoms)


def test_canonical_atoms_match_term_enumeration():
    # every 2-ary GRA({I,s}) term over S/3 denotes one of the patterns, and vice versa
    vocab = Vocabulary({"S": 3})
    rng = np.random.default_rng(0)
    structs = [random_structure(vocab, 3, rng) for _ in range(6)]
    terms = {vocab.rel("S")}
    frontier = set(terms)
    for _ in range(5):
        frontier = {Term(op, (t,)) for t in frontier for op in ("I", "s")} - terms
        terms |= frontier

    def sig(t):
        return tuple(evaluate(t, A).data.tobytes() for A in structs)

    by_sem = {sig(t) for t in terms if t.arity == 2}
    pats = canonical_atoms(vocab, {"I", "s"}, 2)
    pat_sig = set()
    for p in pats:
        vals = []
        for A in structs:
            arr = np.zeros((3, 3), bool)
            for tup in itertools.product(range(3), repeat=2):
                arr[tup] = A.relations["S"][p.select(tup)]
            vals.append(arr.tobytes())
        pat_sig.add(tuple(vals))
    assert by_sem == pat_sig


def test_table_of_examples():
    A = Structure.from_tuples(2, {"R": [(0, 1)]}, V)
    assert table_of(A, (0, 1), set()).as_dict() == {"R(x1,x2)": True}
    assert table_of(A, (0, 1), {"s"}).as_dict() == {"R(x1,x2)": True, "R(x2,x1)": False}


def test_table_projection_identity():
    rng = np.random.default_rng(1)
    vocab = Vocabulary({"P": 1, "R": 2, "S": 3})
    for _ in range(20):
        A = random_structure(vocab, 3, rng)
        for tup in itertools.product(range(3), repeat=2):
            short = table_of(A, tup, {"I"})
            long_ = table_of(A, tup + (tup[-1],), set())
            # I-atoms of (a1, a2) read the plain atoms of (a1, a2, a2)
            for atom, v in zip(short.atoms, short.values):
                if len(atom.idx) == 3 and atom.idx[-1] == atom.idx[-2]:
                    assert long_[AtomPattern(atom.name, (0, 1, 2))] == v


def test_one_type_and_kings():
    A = Structure.from_tuples(3, {"P": [(0,)]}, V)
    assert one_type(A, 0).as_dict()["P(x1)"] is True
    assert one_type(A, 1).as_dict()["P(x1)"] is False
    assert is_king(A, 0) and not is_king(A, 1)
    assert kings(A) == [0]
    assert is_king(Structure.from_tuples(1, {"R": [(0, 0)]}, V), 0)


def test_one_type_interchangeable():
    rng = np.random.default_rng(2)
    A = random_structure(V, 4, rng)
    F = {"I", "s", "E", "not", "cap"}
    for a, b in itertools.combinations(range(4), 2):
        if one_type(A, a).values == one_type(A, b).values:
            assert similar(A, (a,), A, (b,), F)


def test_similar_reflexive():
    rng = np.random.default_rng(3)
    A = random_structure(V, 3, rng)
    for F in ({"s"}, {"I", "s", "E"}, {"s", "C", "not", "cap"}, {"dotcap", "not"}):
        for tup in itertools.product(range(3), repeat=2):
            assert similar(A, tup, A, tup, F)


def test_similar_c_example():
    # k = 3: same table and last-two 1-types, first coordinates of different 1-type
    vocab = Vocabulary({"P": 1, "S": 3})
    A = Structure.from_tuples(4, {"P": [(0,)], "S": [(0, 2, 3), (1, 2, 3)]}, vocab)
    assert one_type(A, 0).values != one_type(A, 1).values
    assert similar(A, (0, 2, 3), A, (1, 2, 3), {"s", "C", "not", "cap"}, vocab)
    # ⋅∩ only aligns suffixes, so P never reaches the first coordinate without p
    assert similar(A, (0, 2, 3), A, (1, 2, 3), {"dotcap", "not"}, vocab)
    assert not similar(A, (0, 2, 3), A, (1, 2, 3), {"p", "dotcap", "not"}, vocab)


def test_similar_unsupported():
    A = Structure(2)
    with pytest.raises(TermError):
        similar(A, (0,), A, (1,), {"ex"})


UNARY = ("not", "E", "I", "s", "p")
BINARY = ("cap", "dotcap", "C")


def _closure(vocab, F, A, B, a, b, depth=3):
    """Exact truth pairs at (a, b) of all GRA(F) terms up to ``depth``, deduplicated by value."""
    def key(t):
        return (t.arity, evaluate(t, A).data.tobytes(), evaluate(t, B).data.tobytes())

    reps = {}
    for t in [TOP, BOT] + [vocab.rel(n) for n in vocab]:
        reps.setdefault(key(t), t)
    for _ in range(depth):
        cur = list(reps.values())
        new = [Term(op, (t,)) for t in cur for op in UNARY if op in F]
        new += [Term(op, (t, u)) for t in cur for u in cur for op in BINARY if op in F]
        for t in new:
            reps.setdefault(key(t), t)
    k = len(a)
    return [t for t in reps.values() if t.arity == k
            and bool(evaluate(t, A).data[a]) != bool(evaluate(t, B).data[b])]


@pytest.mark.parametrize("F", [
    {"s"}, {"I", "s"}, {"s", "E", "not", "cap"}, {"s", "C", "not", "cap"}, {"not", "dotcap"},
    {"I", "E", "not", "cap"}, {"p", "dotcap", "not"},
])
def test_similar_agrees_with_term_enumeration(F):
    rng = np.random.default_rng(len(F))
    for trial in range(12):
        n = int(rng.integers(1, 4))
        A = random_structure(V, n, rng)
        B = A if trial % 2 else random_structure(V, n, rng)
        for _ in range(3):
            a = tuple(int(x) for x in rng.integers(0, n, 2))
            b = tuple(int(x) for x in rng.integers(0, n, 2))
            sep = _closure(V, F, A, B, a, b, depth=3)
            assert similar(A, a, B, b, F, V) == (not sep), (F, a, b, sep[:1])
