"""Finite structures and the term evaluator.

Relations are dense boolean numpy arrays of shape ``(n,)*k``; a 0-ary
relation is a 0-d array (True for the top element, False for bottom).
"""
from __future__ import annotations

import itertools
import json
from pathlib import Path
from typing import Mapping

import numpy as np

from .terms import Term, TermError, Vocabulary, c_arity


class ADRelation:
    """A k-ary relation over the domain {0..n-1}."""

    __slots__ = ("data", "n")

    def __init__(self, data, n: int):
        self.data = np.asarray(data, dtype=bool)
        self.n = n
        if self.data.shape != (n,) * self.data.ndim:
            raise ValueError(f"bad relation shape {self.data.shape} for domain {n}")

    @classmethod
    def from_tuples(cls, tuples, arity: int, n: int) -> "ADRelation":
        a = np.zeros((n,) * arity, dtype=bool)
        for t in tuples:
            t = tuple(t)
            if len(t) != arity or any(not 0 <= x < n for x in t):
                raise ValueError(f"tuple {t} does not fit arity {arity} over domain {n}")
            a[t] = True
        return cls(a, n)

    @property
    def arity(self) -> int:
        return self.data.ndim

    @property
    def tuples(self) -> list[tuple[int, ...]]:
        """Member tuples in lexicographic order."""
        return [tuple(int(x) for x in t) for t in np.argwhere(self.data)]

    def __contains__(self, t) -> bool:
        return bool(self.data[tuple(t)])

    def __len__(self):
        return int(self.data.sum())

    def __bool__(self):
        return bool(self.data.any())

    def __eq__(self, other):
        return (isinstance(other, ADRelation) and self.n == other.n
                and self.arity == other.arity and bool(np.array_equal(self.data, other.data)))

    def __hash__(self):
        return hash((self.n, self.arity, self.data.tobytes()))

    def __repr__(self):
        if self.arity == 0:
            return "⊤₀" if self.data else "⊥₀"
        return f"ADRelation({set(self.tuples)}, {self.arity})"


class Structure:
    """A finite structure over domain {0..n-1}; immutable by convention."""

    def __init__(self, n: int, relations: Mapping[str, np.ndarray] | None = None):
        if n < 1:
            raise ValueError("domain size must be at least 1")
        self.n = n
        self.relations = {}
        for name, a in (relations or {}).items():
            a = np.asarray(a, dtype=bool)
            if a.ndim < 1 or a.shape != (n,) * a.ndim:
                raise ValueError(f"relation {name} has shape {a.shape}, domain is {n}")
            self.relations[name] = a

    def rel(self, name: str, arity: int) -> np.ndarray:
        a = self.relations.get(name)
        if a is None:
            return np.zeros((self.n,) * arity, dtype=bool)
        if a.ndim != arity:
            raise TermError(f"symbol {name} has arity {a.ndim} in the structure, {arity} in the term")
        return a

    @classmethod
    def from_tuples(cls, n: int, rels: Mapping[str, object], vocab: Mapping[str, int] | None = None):
        """Build from ``{name: iterable of tuples}``; ``vocab`` fixes arities."""
        out = {}
        vocab = dict(vocab or {})
        for name, ts in rels.items():
            ts = [tuple(t) for t in ts]
            if name in vocab:
                ar = vocab[name]
            elif ts:
                ar = len(ts[0])
            else:
                raise ValueError(f"cannot infer the arity of empty relation {name}")
            out[name] = ADRelation.from_tuples(ts, ar, n).data
        for name, ar in vocab.items():
            out.setdefault(name, np.zeros((n,) * ar, dtype=bool))
        return cls(n, out)

    def to_json(self) -> dict:
        return {
            "domain": self.n,
            "relations": {k: [list(map(int, t)) for t in np.argwhere(v)]
                          for k, v in sorted(self.relations.items())},
        }

    @classmethod
    def from_json(cls, obj: dict, vocab: Mapping[str, int] | None = None) -> "Structure":
        if not isinstance(obj, dict) or "domain" not in obj:
            raise ValueError("structure JSON needs a 'domain' field")
        n = obj["domain"]
        if not isinstance(n, int) or n < 1:
            raise ValueError(f"bad domain size {n!r}")
        rels = obj.get("relations", {})
        vocab = dict(vocab or {})
        for name in rels:
            if vocab and name not in vocab:
                raise ValueError(f"relation {name} is not in the vocabulary")
        return cls.from_tuples(n, rels, vocab)

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def load(cls, path, vocab=None) -> "Structure":
        return cls.from_json(json.loads(Path(path).read_text()), vocab)

    def permute(self, perm) -> "Structure":
        """Image under the domain bijection i -> perm[i]."""
        perm = np.asarray(perm)
        inv = np.argsort(perm)
        out = {}
        for name, a in self.relations.items():
            out[name] = a[np.ix_(*([inv] * a.ndim))]
        return Structure(self.n, out)

    def restrict(self, elems) -> "Structure":
        """Induced substructure on ``elems`` (renumbered in the given order)."""
        idx = np.asarray(list(elems))
        return Structure(len(idx), {k: a[np.ix_(*([idx] * a.ndim))] for k, a in self.relations.items()})

    def __eq__(self, other):
        if not isinstance(other, Structure) or self.n != other.n:
            return False
        names = set(self.relations) | set(other.relations)
        for k in names:
            a, b = self.relations.get(k), other.relations.get(k)
            if a is None or b is None:
                c = a if b is None else b
                if c.any():
                    return False
            elif not np.array_equal(a, b):
                return False
        return True

    def __repr__(self):
        return f"Structure({self.dumps()})"


def all_tuples(n: int, k: int):
    return itertools.product(range(n), repeat=k)


# -- evaluation ---------------------------------------------------------------

_FALSE = np.array(False)
_TRUE = np.array(True)


def _eval(t: Term, A: Structure, memo: dict) -> np.ndarray:
    got = memo.get(t)
    if got is not None:
        return got
    op = t.op
    n = A.n
    if op == "rel":
        r = A.rel(t.name, t.rel_arity)
    elif op == "top":
        r = _TRUE
    elif op == "bot":
        r = _FALSE
    elif len(t.args) == 1:
        x = _eval(t.args[0], A, memo)
        k = x.ndim
        if op == "not":
            r = ~x
        elif op in ("ex", "all"):
            r = x if k == 0 else (x.any(axis=-1) if op == "ex" else x.all(axis=-1))
        elif op in ("ex1", "all1"):
            axes = tuple(range(1, k))
            r = x if k < 2 else (x.any(axis=axes) if op == "ex1" else x.all(axis=axes))
        elif op in ("ex0", "all0"):
            r = np.array(x.any() if op == "ex0" else x.all())
        elif op == "E":
            r = x if k < 2 else x & np.eye(n, dtype=bool)
        elif op == "I":
            r = x if k <= 1 else np.diagonal(x, axis1=-2, axis2=-1)
        elif op == "s":
            r = x if k < 2 else np.swapaxes(x, -1, -2)
        elif op == "p":
            r = x if k < 2 else np.moveaxis(x, 0, -1)
        else:
            raise TermError(f"unknown operator {op!r}")
    else:
        x = _eval(t.args[0], A, memo)
        y = _eval(t.args[1], A, memo)
        if op == "cap":
            r = x & y if x.ndim == y.ndim else _FALSE
        elif op == "cup":
            r = x | y if x.ndim == y.ndim else _TRUE
        elif op == "dotcap":
            r = x & y   # numpy broadcasting aligns trailing axes, i.e. suffixes
        elif op == "dotcup":
            r = x | y
        elif op == "C":
            r = x & y if c_arity(x.ndim, y.ndim) else _FALSE
        else:
            raise TermError(f"unknown operator {op!r}")
    r = np.ascontiguousarray(r) if r.ndim else np.asarray(r, dtype=bool)
    memo[t] = r
    return r


def evaluate(term: Term, structure: Structure) -> ADRelation:
    return ADRelation(_eval(term, structure, {}), structure.n)


def satisfied(structure: Structure, term: Term) -> bool:
    if term.arity != 0:
        raise TermError(f"satisfaction needs a 0-ary term, got arity {term.arity}")
    return bool(_eval(term, structure, {}))


def random_structure(vocab: Mapping[str, int], n: int, rng, density: float | None = None) -> Structure:
    """Uniformly random interpretation; ``density`` defaults to a per-symbol draw."""
    rels = {}
    for name, ar in vocab.items():
        d = rng.random() if density is None else density
        rels[name] = rng.random((n,) * ar) < d
    return Structure(n, rels)


def load_structure(path, vocab: Vocabulary | None = None) -> Structure:
    return Structure.load(path, vocab)
