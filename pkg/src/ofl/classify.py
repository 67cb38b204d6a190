"""Fragment classification against the known complexity rows."""
from __future__ import annotations

from dataclasses import dataclass

from .terms import Term, format_ops, operators_used


def _ops(*names):
    return frozenset(names)


@dataclass(frozen=True)
class Row:
    ops: frozenset
    label: str
    status: str  # decidable | undecidable | open
    rank: int    # lower = better upper bound


# I is definable in GRA(E,not,cap,ex) (I t == ex E t), so it is admitted in that row.
ROWS = (
    Row(_ops("E", "not", "cap", "ex1", "ex0"), "NP-complete", "decidable", 0),
    Row(_ops("E", "not", "cap", "ex"), "PSPACE-complete", "decidable", 1),
    Row(_ops("I", "E", "not", "cap", "ex"), "PSPACE-complete", "decidable", 1),
    Row(_ops("s", "not", "C", "cap", "ex"), "NEXPTIME-complete", "decidable", 2),
    Row(_ops("E", "not", "C", "cap", "ex"), "NEXPTIME-complete", "decidable", 2),
    Row(_ops("s", "E", "not", "dotcap", "ex1", "ex0"), "NEXPTIME-complete", "decidable", 2),
    Row(_ops("p", "s", "E", "not", "C", "cap", "ex1", "ex0"), "NEXPTIME-complete", "decidable", 2),
    Row(_ops("s", "E", "not", "C", "cap", "ex"), "NEXPTIME-hard", "open", 3),
    Row(_ops("not", "dotcap", "ex"), "TOWER-complete", "decidable", 4),
    Row(_ops("E", "not", "dotcap", "ex"), "TOWER-complete", "decidable", 4),
    Row(_ops("p", "not", "cap", "ex"), "undecidable (Π⁰₁)", "undecidable", 5),
    Row(_ops("p", "not", "dotcap", "ex1", "ex0"), "undecidable (Π⁰₁)", "undecidable", 5),
    Row(_ops("s", "not", "dotcap", "ex"), "undecidable (Π⁰₁)", "undecidable", 5),
)
UNDECIDABLE_ROWS = tuple(r for r in ROWS if r.status == "undecidable")
# with at most binary symbols GRA(E,s,not,dotcap,ex) is two-variable logic
FO2_OPS = _ops("E", "s", "not", "dotcap", "ex")


@dataclass(frozen=True)
class FragmentVerdict:
    ops: frozenset
    row: frozenset | None
    status: str   # decidable | undecidable | open | unknown
    label: str
    exact: bool = False
    note: str = ""

    def text(self) -> str:
        if self.status == "open":
            s = f"{self.label}; decidability open"
        elif self.status == "unknown":
            s = "unknown (no matching row)"
        else:
            s = self.label
        if self.note:
            s += f" [{self.note}]"
        return s

    def as_dict(self) -> dict:
        return {
            "operators": format_ops(self.ops),
            "row": format_ops(self.row) if self.row is not None else None,
            "status": self.status,
            "label": self.label,
            "exact": self.exact,
            "note": self.note,
        }


def classify_ops(ops, max_arity: int | None = None) -> FragmentVerdict:
    ops = frozenset(ops)
    note = ""
    if max_arity is not None and max_arity <= 2 and ops <= FO2_OPS:
        note = "decidable over vocabularies with at most binary symbols (FO²)"
    for row in UNDECIDABLE_ROWS:
        if ops >= row.ops:
            return FragmentVerdict(ops, row.ops, "undecidable", row.label, ops == row.ops, note)
    # a subset of an undecidable row alone is not known to be undecidable
    containing = [r for r in ROWS if ops <= r.ops and r.status != "undecidable"]
    if not containing:
        return FragmentVerdict(ops, None, "unknown", "unknown", False, note)
    best = min(containing, key=lambda r: (r.rank, len(r.ops)))
    return FragmentVerdict(ops, best.ops, best.status, best.label, ops == best.ops, note)


def classify(term: Term, max_arity: int | None = None) -> FragmentVerdict:
    if max_arity is None:
        max_arity = max(term.symbols().values(), default=0)
    return classify_ops(operators_used(term), max_arity)
