"""A small incremental CDCL SAT solver.

Literals are non-zero ints in DIMACS style. Clauses may be added between
calls to :meth:`SatSolver.solve`; learnt clauses are kept, so successive
calls on a growing clause set reuse earlier work.

Variables registered with :meth:`SatSolver.prefer` are decided first, in
the given order, always with the given phase. Everything else falls back
to VSIDS with phase saving.
"""

from __future__ import annotations

import heapq
from typing import Iterable, Sequence


def _luby(i: int) -> int:
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class SatSolver:
    def __init__(self):
        self.nvars = 0
        self.value = [0]  # per variable: 1 true, -1 false, 0 unassigned
        self.level = [0]
        self.reason: list = [None]
        self.activity = [0.0]
        self.saved = [-1]
        self.watches: list[list[list[int]]] = [[], []]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap: list[tuple[float, int]] = []
        self.var_inc = 1.0
        self.ok = True
        self.preferred: list[int] = []
        self.preferred_phase: dict[int, int] = {}
        self.pref_pos = 0
        self.conflicts = 0
        self.decisions = 0
        self.propagations = 0

    # ------------------------------------------------------------- building

    def new_var(self) -> int:
        self.nvars += 1
        v = self.nvars
        self.value.append(0)
        self.level.append(0)
        self.reason.append(None)
        self.activity.append(0.0)
        self.saved.append(-1)
        self.watches.append([])
        self.watches.append([])
        heapq.heappush(self.heap, (0.0, v))
        return v

    @staticmethod
    def _idx(lit: int) -> int:
        return 2 * lit if lit > 0 else -2 * lit + 1

    def _val(self, lit: int) -> int:
        v = self.value[lit if lit > 0 else -lit]
        return v if lit > 0 else -v

    def prefer(self, lits: Sequence[int]) -> None:
        """Decide these literals' variables first, in order, to the literal's polarity."""
        for lit in lits:
            v = abs(lit)
            if v not in self.preferred_phase:
                self.preferred.append(v)
            self.preferred_phase[v] = 1 if lit > 0 else -1
        self.pref_pos = 0

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause permanently; returns False once the formula is unsatisfiable."""
        if not self.ok:
            return False
        self._backtrack(0)
        seen: set[int] = set()
        clause = []
        for lit in lits:
            if -lit in seen:
                return True
            if lit in seen:
                continue
            val = self._val(lit)
            if val == 1:
                return True
            if val == -1:
                continue
            seen.add(lit)
            clause.append(lit)
        if not clause:
            self.ok = False
            return False
        if len(clause) == 1:
            self._enqueue(clause[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self._attach(clause)
        return True

    def _attach(self, clause: list[int]) -> None:
        self.watches[self._idx(clause[0])].append(clause)
        self.watches[self._idx(clause[1])].append(clause)

    # --------------------------------------------------------------- search

    def _enqueue(self, lit: int, reason) -> None:
        v = lit if lit > 0 else -lit
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _propagate(self):
        value = self.value
        watches = self.watches
        trail = self.trail
        idx = self._idx
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = -p
            ws = watches[idx(false_lit)]
            i = j = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], false_lit
                first = c[0]
                fv = value[first] if first > 0 else -value[-first]
                if fv == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    lv = value[lk] if lk > 0 else -value[-lk]
                    if lv != -1:
                        c[1], c[k] = lk, false_lit
                        watches[idx(lk)].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if fv == -1:
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        del ws[j:]
                        self.qhead = len(trail)
                        return c
                    self._enqueue(first, c)
            del ws[j:]
        return None

    def _bump(self, v: int) -> None:
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for k in range(1, self.nvars + 1):
                self.activity[k] *= 1e-100
            self.var_inc *= 1e-100
            self.heap = [(-self.activity[k], k) for k in range(1, self.nvars + 1) if not self.value[k]]
            heapq.heapify(self.heap)
        elif not self.value[v]:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        level = self.level
        reason = self.reason
        seen = set()
        learnt = [0]
        current = len(self.trail_lim)
        pending = 0
        p = 0
        index = len(self.trail) - 1
        clause = confl
        while True:
            for q in clause:
                if q == p:
                    continue
                v = q if q > 0 else -q
                if v not in seen and level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if level[v] == current:
                        pending += 1
                    else:
                        learnt.append(q)
            while True:
                lit = self.trail[index]
                index -= 1
                if (lit if lit > 0 else -lit) in seen:
                    break
            p = lit
            v = p if p > 0 else -p
            seen.discard(v)
            pending -= 1
            if pending == 0:
                break
            clause = reason[v]
        learnt[0] = -p
        self.var_inc *= 1.05

        # drop literals implied by the rest of the clause
        marked = {abs(q) for q in learnt}
        kept = [learnt[0]]
        for q in learnt[1:]:
            r = reason[abs(q)]
            if r is None or any(abs(x) not in marked and level[abs(x)] > 0 for x in r if x != -q):
                kept.append(q)
        learnt = kept

        if len(learnt) == 1:
            return learnt, 0
        best = max(range(1, len(learnt)), key=lambda k: level[abs(learnt[k])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, level[abs(learnt[1])]

    def _backtrack(self, target: int) -> None:
        if len(self.trail_lim) <= target:
            return
        stop = self.trail_lim[target]
        value = self.value
        for k in range(len(self.trail) - 1, stop - 1, -1):
            lit = self.trail[k]
            v = lit if lit > 0 else -lit
            self.saved[v] = value[v]
            value[v] = 0
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[stop:]
        del self.trail_lim[target:]
        self.qhead = len(self.trail)
        self.pref_pos = 0
        if len(self.heap) > 4 * self.nvars + 1000:
            self.heap = [(-self.activity[k], k) for k in range(1, self.nvars + 1) if not value[k]]
            heapq.heapify(self.heap)

    def _pick(self) -> int:
        value = self.value
        pref = self.preferred
        while self.pref_pos < len(pref):
            v = pref[self.pref_pos]
            if not value[v]:
                return v * self.preferred_phase[v]
            self.pref_pos += 1
        heap = self.heap
        while heap:
            act, v = heapq.heappop(heap)
            if value[v] or -act != self.activity[v]:
                continue
            return v if self.saved[v] > 0 else -v
        return 0

    def solve(self) -> bool:
        if not self.ok:
            return False
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        restart = 0
        budget = 100 * _luby(restart)
        local = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                local += 1
                if not self.trail_lim:
                    self.ok = False
                    return False
                learnt, back = self._analyze(confl)
                self._backtrack(back)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self._attach(learnt)
                    self._enqueue(learnt[0], learnt)
                continue
            if local >= budget:
                restart += 1
                budget = 100 * _luby(restart)
                local = 0
                self._backtrack(0)
                continue
            lit = self._pick()
            if lit == 0:
                return True
            self.decisions += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, None)

    def model_value(self, var: int) -> bool:
        return self.value[var] > 0
