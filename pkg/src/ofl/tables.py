"""Atom bases, k-tables, 1-types, kings and similarity of tuples.

Terms built from relation symbols with ``I`` and ``s`` alone denote
coordinate selections: at a k-tuple the term is true iff R holds of
``(a[i] for i in idx)`` for a fixed index tuple ``idx``.  Such a pair
``(R, idx)`` is an :class:`AtomPattern`, and the k-table of a tuple is the
truth vector on all patterns reachable for arity k.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Mapping, NamedTuple

from .terms import TermError

TABLE_OPS = frozenset(("I", "s"))
SIMILARITY_OPS = frozenset(("I", "s", "p", "E", "not", "C", "cap", "dotcap"))
# 1-types use every coordinate collapse, so they are the finest F ⊆ {I,s} types
DEFAULT_F = frozenset(("I", "s"))


class AtomPattern(NamedTuple):
    name: str
    idx: tuple  # 0-based coordinates of the tuple fed to the symbol

    def __str__(self):
        return f"{self.name}({','.join(f'x{i + 1}' for i in self.idx)})"

    def select(self, tup):
        return tuple(tup[i] for i in self.idx)


def _vocab_of(structure) -> dict:
    return {k: v.ndim for k, v in structure.relations.items()}


def canonical_atoms(vocab: Mapping[str, int], F, k: int) -> tuple[AtomPattern, ...]:
    """All patterns of arity ``k`` reachable from bare symbols under ``F ∩ {I,s}``.

    Sorted by symbol name, then index tuple.
    """
    if k < 1:
        raise ValueError("tables need arity at least 1")
    F = frozenset(F) & TABLE_OPS
    out = set()
    for name, ar in vocab.items():
        start = tuple(range(ar))
        seen = {start}
        todo = deque([start])
        while todo:
            idx = todo.popleft()
            m = max(idx) + 1  # the term's arity; idx always covers 0..m-1
            if m == k:
                out.add(AtomPattern(name, idx))
            nxt = []
            if "s" in F and m >= 2:
                sw = {m - 2: m - 1, m - 1: m - 2}
                nxt.append(tuple(sw.get(i, i) for i in idx))
            if "I" in F and m >= 2:
                nxt.append(tuple(m - 2 if i == m - 1 else i for i in idx))
            for j in nxt:
                if j not in seen:
                    seen.add(j)
                    todo.append(j)
    return tuple(sorted(out))


@dataclass(frozen=True)
class Table:
    F: frozenset
    k: int
    atoms: tuple   # AtomPattern, canonical order
    values: tuple  # bool per atom

    def __getitem__(self, atom) -> bool:
        return self.values[self.atoms.index(atom)]

    def as_dict(self) -> dict:
        return {str(a): v for a, v in zip(self.atoms, self.values)}

    def text(self) -> str:
        return " ".join(f"{'' if v else '¬'}{a}" for a, v in zip(self.atoms, self.values))

    def key(self) -> tuple:
        return self.values


def table_of(structure, tup, F=DEFAULT_F, vocab: Mapping[str, int] | None = None) -> Table:
    tup = tuple(tup)
    if not tup:
        raise ValueError("tables need a nonempty tuple")
    vocab = _vocab_of(structure) if vocab is None else vocab
    atoms = canonical_atoms(vocab, F, len(tup))
    vals = []
    for a in atoms:
        rel = structure.relations.get(a.name)
        vals.append(bool(rel[a.select(tup)]) if rel is not None else False)
    return Table(frozenset(F) & TABLE_OPS, len(tup), atoms, tuple(vals))


def one_type(structure, element: int, F=DEFAULT_F) -> Table:
    return table_of(structure, (element,), F)


def is_king(structure, element: int, F=DEFAULT_F) -> bool:
    t = one_type(structure, element, F).values
    return all(one_type(structure, b, F).values != t for b in range(structure.n) if b != element)


def kings(structure, F=DEFAULT_F) -> list[int]:
    return [a for a in range(structure.n) if is_king(structure, a, F)]


# -- similarity ---------------------------------------------------------------

def _views(k: int, F: frozenset, arities: set) -> list:
    """States (m, sigma) reachable from (k, identity); sigma maps view positions to tuple positions."""
    start = (k, tuple(range(k)))
    seen = {start}
    todo = deque([start])
    while todo:
        m, sg = todo.popleft()
        nxt = []
        if m >= 2 and "s" in F:
            nxt.append((m, sg[:-2] + (sg[-1], sg[-2])))
        if m >= 2 and "p" in F:
            nxt.append((m, (sg[-1],) + sg[:-1]))
        if m >= 1 and "I" in F and m + 1 in arities:
            nxt.append((m + 1, sg + (sg[-1],)))
        if "dotcap" in F:
            nxt.extend((j, sg[m - j:]) for j in range(m) if j in arities or j == 0)
        if "C" in F and m >= 2 and 1 in arities:
            nxt.append((1, sg[-1:]))
        for st in nxt:
            if st not in seen:
                seen.add(st)
                todo.append(st)
    return sorted(seen, key=lambda s: (-s[0], s[1]))


def _term_arities(vocab: Mapping[str, int], F: frozenset) -> set:
    ar = set(vocab.values())
    if "I" in F:
        ar |= {j for a in vocab.values() for j in range(1, a)}
    return ar


def similar(A, a, B, b, F, vocab: Mapping[str, int] | None = None) -> bool:
    """Do ``a`` in ``A`` and ``b`` in ``B`` satisfy the same k-ary GRA(F) terms?

    For every view state the set of achievable (truth at a, truth at b) pairs
    is computed as a least fixpoint of the operator rules; the tuples are
    similar iff no term of arity k tells them apart.
    """
    a, b = tuple(a), tuple(b)
    F = frozenset(F)
    if len(a) != len(b) or not a:
        raise ValueError("similarity compares nonempty tuples of equal length")
    bad = F - SIMILARITY_OPS
    if bad:
        raise TermError(f"similarity is not supported for operators {sorted(bad)}")
    if vocab is None:
        vocab = {**_vocab_of(B), **_vocab_of(A)}
    k = len(a)
    arities = _term_arities(vocab, F)
    states = _views(k, F, arities)

    def atom_pair(name, sg):
        ra, rb = A.relations.get(name), B.relations.get(name)
        x = bool(ra[tuple(a[i] for i in sg)]) if ra is not None else False
        y = bool(rb[tuple(b[i] for i in sg)]) if rb is not None else False
        return (x, y)

    pairs: dict = {st: set() for st in states}
    pairs[(0, ())] = {(True, True), (False, False)}  # top and bot
    by_arity: dict = {}
    for name, ar in vocab.items():
        by_arity.setdefault(ar, []).append(name)
    for (m, sg) in states:
        for name in by_arity.get(m, ()):
            pairs[(m, sg)].add(atom_pair(name, sg))

    def get(st):
        return pairs.get(st, ())

    changed = True
    while changed:
        changed = False
        for (m, sg) in states + [(0, ())]:
            cur = pairs.setdefault((m, sg), set())
            new = set()
            if "not" in F:
                new |= {(not x, not y) for x, y in cur}
            if "cap" in F:
                new |= {(x1 and x2, y1 and y2) for x1, y1 in cur for x2, y2 in cur}
            if "E" in F and m >= 2:
                ea = a[sg[-2]] == a[sg[-1]]
                eb = b[sg[-2]] == b[sg[-1]]
                new |= {(x and ea, y and eb) for x, y in cur}
            if "s" in F and m >= 2:
                new |= set(get((m, sg[:-2] + (sg[-1], sg[-2]))))
            if "p" in F and m >= 2:
                new |= set(get((m, (sg[-1],) + sg[:-1])))
            if "I" in F and m >= 1:
                new |= set(get((m + 1, sg + (sg[-1],))))
            if "dotcap" in F:
                new |= {(x1 and x2, y1 and y2) for x1, y1 in cur for x2, y2 in cur}
                for j in range(m):
                    for x1, y1 in get((j, sg[m - j:])):
                        new |= {(x1 and x2, y1 and y2) for x2, y2 in cur}
            if "C" in F and m >= 1:
                for x1, y1 in get((1, sg[-1:])):
                    new |= {(x1 and x2, y1 and y2) for x2, y2 in cur}
            if not new <= cur:
                cur |= new
                changed = True
    return all(x == y for x, y in pairs[(k, tuple(range(k)))])
