"""Grid axioms in GRA(p,¬,⋅∩,∃₁,∃₀) and the tiling sentence in GRA(s,¬,⋅∩,∃).

With p rotating right, (pX)(a₁..a_k) = X(a_k, a₁..a_{k-1}), the rotations
that line the displayed cycle and completion terms up with their formulas are
the inverse ones, so every p there is applied as ppp.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fo import And, Atom, Forall, Formula, Not, Or
from ..semantics import Structure
from ..terms import (
    BOT, TOP, All, All0, Cyc, DotCap, DotCup, Ex, Ex1, Neg, Rel, Swap, Term, TermError,
    Vocabulary, big,
)

GRID_VOCAB = Vocabulary({"R": 2, "U": 2, "L": 2, "D": 2, "S": 4})
R, U, L, D, S = (GRID_VOCAB.rel(n) for n in ("R", "U", "L", "D", "S"))


def _pinv(t: Term) -> Term:
    return Cyc(Cyc(Cyc(t)))


def grid_terms() -> list[tuple[str, Term]]:
    successor = DotCap(All0(Ex1(R)), All0(Ex1(U)))
    # binary p is the swap, so p applied to L reads L(v2, v1)
    inverses = big(DotCap, [All0(DotCup(Neg(R), Cyc(L))), All0(DotCup(Neg(L), Cyc(R))),
                            All0(DotCup(Neg(U), Cyc(D))), All0(DotCup(Neg(D), Cyc(U)))], TOP)
    cycle = All0(_pinv(_pinv(DotCup(Neg(L), _pinv(DotCup(Neg(U), _pinv(DotCup(Neg(R), S))))))))
    completion = All0(_pinv(DotCup(_pinv(_pinv(_pinv(Neg(S)))), D)))
    return [("successor", successor), ("inverses", inverses), ("cycle", cycle), ("completion", completion)]


def grid_sentence() -> Term:
    return big(DotCap, [t for _, t in grid_terms()], TOP)


def grid_like_formula() -> Formula:
    """∀v1..v4 (R(v1,v2) ∧ U(v1,v3) ∧ R(v3,v4) → U(v2,v4))."""
    body = Or((Not(And((Atom("R", (1, 2)), Atom("U", (1, 3)), Atom("R", (3, 4))))), Atom("U", (2, 4))))
    for v in (4, 3, 2, 1):
        body = Forall(v, body)
    return body


def grid_closure(n: int, R0, U0, S0=None) -> Structure:
    """Least structure over the given R, U (and extra S tuples) satisfying inverses, cycle, completion."""
    r = np.array(R0, dtype=bool)
    u = np.array(U0, dtype=bool)
    s = np.zeros((n,) * 4, dtype=bool) if S0 is None else np.array(S0, dtype=bool)
    while True:
        l = r.T
        # S ⊇ {(v1..v4) : L(v1,v2) ∧ U(v2,v3) ∧ R(v3,v4)}
        cyc = l[:, :, None, None] & u[None, :, :, None] & r[None, None, :, :]
        s2 = s | cyc
        # D(v4, v1) for every S tuple, i.e. U(v1, v4)
        u2 = u | s2.any(axis=(1, 2))
        if np.array_equal(u2, u) and np.array_equal(s2, s):
            break
        u, s = u2, s2
    return Structure(n, {"R": r, "U": u, "L": r.T.copy(), "D": u.T.copy(), "S": s})


def random_grid_structure(rng, n: int, density: float = 0.3, s_density: float = 0.02) -> Structure:
    R0 = rng.random((n, n)) < density
    U0 = rng.random((n, n)) < density
    S0 = rng.random((n,) * 4) < s_density
    return grid_closure(n, R0, U0, S0)


def torus(w: int, h: int) -> Structure:
    """The w×h torus grid, element x + w·y, closed under the axioms."""
    n = w * h
    r = np.zeros((n, n), bool)
    u = np.zeros((n, n), bool)
    for y in range(h):
        for x in range(w):
            r[x + w * y, (x + 1) % w + w * y] = True
            u[x + w * y, x + w * ((y + 1) % h)] = True
    return grid_closure(n, r, u)


# -- tiling -------------------------------------------------------------------------

@dataclass(frozen=True)
class Tile:
    r: str
    l: str
    t: str
    b: str


def tiles_from_json(obj) -> list[Tile]:
    return [Tile(str(d["r"]), str(d["l"]), str(d["t"]), str(d["b"])) for d in obj]


def tiling_vocab(tiles) -> Vocabulary:
    v = {}
    for i in range(len(tiles)):
        v[f"P_{i}"] = 2
        v[f"TH_{i}"] = 3
        v[f"TV_{i}"] = 3
    return Vocabulary(v)


def tiling_terms(tiles) -> list[tuple[str, Term]]:
    tiles = list(tiles)
    if not tiles:
        raise TermError("empty tile set")
    idx = range(len(tiles))
    P = {i: Rel(f"P_{i}", 2) for i in idx}
    TH = {i: Rel(f"TH_{i}", 3) for i in idx}
    TV = {i: Rel(f"TV_{i}", 3) for i in idx}
    phi1 = All(All(big(DotCup, [P[i] for i in idx], BOT)))
    pairs = [(i, j) for i in idx for j in idx if i < j]
    phi2 = All(All(big(DotCap, [Neg(DotCap(P[i], P[j])) for i, j in pairs], TOP)))
    horiz = big(DotCup, [DotCap(P[j], TH[i]) for i in idx for j in idx if tiles[i].r == tiles[j].l], BOT)
    vert = big(DotCup, [DotCap(Swap(P[j]), TV[i]) for i in idx for j in idx if tiles[i].t == tiles[j].b], BOT)
    phi3 = All(Ex(All(DotCap(horiz, vert))))
    phi4 = All(All(big(DotCap, [DotCup(Neg(Ex(Swap(TH[i]))), P[i]) for i in idx], TOP)))
    phi5 = All(All(big(DotCap, [All(All(DotCup(Neg(Ex(Swap(TV[i]))), Swap(P[i])))) for i in idx], TOP)))
    out = [("phi1", phi1), ("phi2", phi2), ("phi3", phi3), ("phi4", phi4), ("phi5", phi5)]
    return [x for x in out if pairs or x[0] != "phi2"]


def tiling_to_term(tiles) -> tuple[Term, Vocabulary]:
    terms = tiling_terms(tiles)
    return big(DotCap, [t for _, t in terms], TOP), tiling_vocab(list(tiles))
