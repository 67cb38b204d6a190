"""A small CDCL SAT solver (DPLL with clause learning).

Literals are non-zero ints in DIMACS style.  Unit propagation uses two
watched literals; conflicts are analysed to the first UIP; decisions follow
activity scores (VSIDS) with phase saving and Luby restarts.
"""
from __future__ import annotations

import heapq
import time


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while (1 << k) - 1 != i:
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1
    return 1 << (k - 1)


class Solver:
    def __init__(self):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.val = [0]       # per var: 1 true, -1 false, 0 unassigned
        self.level = [0]
        self.reason = [-1]
        self.phase = [False]
        self.activity = [0.0]
        self.decision = [False]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.ok = True
        self.heap: list = []
        self.var_inc = 1.0
        self.stats = {"decisions": 0, "conflicts": 0, "propagations": 0}

    # -- building ---------------------------------------------------------
    def new_var(self, decision: bool = True) -> int:
        self.nvars += 1
        v = self.nvars
        self.val.append(0)
        self.level.append(0)
        self.reason.append(-1)
        self.phase.append(False)
        self.activity.append(0.0)
        self.decision.append(decision)
        self.watches[v] = []
        self.watches[-v] = []
        if decision:
            heapq.heappush(self.heap, (0.0, v))
        return v

    def value(self, lit: int) -> int:
        v = self.val[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def add_clause(self, lits) -> bool:
        """Add a clause at decision level 0; returns False once the formula is unsat."""
        if not self.ok:
            return False
        if self.trail_lim:
            self._backtrack(0)
        out = []
        for l in set(lits):
            if -l in out:
                return True
            x = self.value(l)
            if x == 1:
                return True
            if x == 0:
                out.append(l)
        if any(-l in out for l in out):
            return True
        if not out:
            self.ok = False
            return False
        if len(out) == 1:
            self._enqueue(out[0], -1)
            self.ok = self._propagate() < 0
            return self.ok
        ci = len(self.clauses)
        self.clauses.append(out)
        self.watches[out[0]].append(ci)
        self.watches[out[1]].append(ci)
        return True

    # -- search -----------------------------------------------------------
    def _enqueue(self, lit: int, reason: int):
        v = lit if lit > 0 else -lit
        self.val[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self) -> int:
        """Returns the index of a conflicting clause, or -1."""
        val = self.val
        clauses = self.clauses
        watches = self.watches
        trail = self.trail
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.stats["propagations"] += 1
            fl = -p
            ws = watches[fl]
            i = j = 0
            end = len(ws)
            while i < end:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c[0] == fl:
                    c[0], c[1] = c[1], fl
                first = c[0]
                fv = val[first] if first > 0 else -val[-first]
                if fv == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    l = c[k]
                    lv = val[l] if l > 0 else -val[-l]
                    if lv != -1:
                        c[1], c[k] = l, fl
                        watches[l].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if fv == -1:
                        while i < end:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return ci
                    self._enqueue(first, ci)
            del ws[j:]
        return -1

    def _bump(self, v: int):
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[u], u) for u in range(1, self.nvars + 1)
                         if self.decision[u] and self.val[u] == 0]
            heapq.heapify(self.heap)
        elif self.decision[v]:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, ci: int):
        seen = set()
        learnt = [0]
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        clause = self.clauses[ci]
        while True:
            for q in clause:
                if q == p:
                    continue
                v = q if q > 0 else -q
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if self.level[v] == cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while True:
                p = self.trail[idx]
                idx -= 1
                if (p if p > 0 else -p) in seen:
                    break
            counter -= 1
            if counter == 0:
                break
            clause = self.clauses[self.reason[p if p > 0 else -p]]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backtrack(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        lim = self.trail_lim[lvl]
        for lit in self.trail[lim:]:
            v = lit if lit > 0 else -lit
            self.phase[v] = lit > 0
            self.val[v] = 0
            self.reason[v] = -1
            if self.decision[v]:
                heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[lim:]
        del self.trail_lim[lvl:]
        self.qhead = len(self.trail)

    def _pick(self) -> int:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.val[v] == 0:
                return v
        for v in range(1, self.nvars + 1):
            if self.val[v] == 0:
                return v
        return 0

    def solve(self, timeout: float | None = None, max_conflicts: int | None = None):
        """True (model in :meth:`model`), False, or None when a limit is hit."""
        if not self.ok:
            return False
        self._backtrack(0)
        if self._propagate() >= 0:
            self.ok = False
            return False
        deadline = None if timeout is None else time.monotonic() + timeout
        restart = 1
        budget = 100 * _luby(restart)
        conflicts = 0
        while True:
            ci = self._propagate()
            if ci >= 0:
                conflicts += 1
                self.stats["conflicts"] += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, lvl = self._analyze(ci)
                self._backtrack(lvl)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], -1)
                else:
                    k = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches[learnt[0]].append(k)
                    self.watches[learnt[1]].append(k)
                    self._enqueue(learnt[0], k)
                self.var_inc /= 0.95
                if max_conflicts is not None and conflicts >= max_conflicts:
                    self._backtrack(0)
                    return None
                if deadline is not None and conflicts % 64 == 0 and time.monotonic() > deadline:
                    self._backtrack(0)
                    return None
                budget -= 1
                if budget <= 0:
                    restart += 1
                    budget = 100 * _luby(restart)
                    self._backtrack(0)
                continue
            v = self._pick()
            if v == 0:
                self._model = [False] + [x == 1 for x in self.val[1:]]
                return True
            self.stats["decisions"] += 1
            if deadline is not None and self.stats["decisions"] % 256 == 0 and time.monotonic() > deadline:
                self._backtrack(0)
                return None
            self.trail_lim.append(len(self.trail))
            self._enqueue(v if self.phase[v] else -v, -1)

    def model(self) -> list[bool]:
        return self._model
