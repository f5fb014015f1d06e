"""SAT solving: a small CDCL solver with two watched literals, and a pysat-backed twin.

Both expose the same incremental interface::

    s = make_solver()
    s.add_clause([1, -2])
    model = s.solve(assumptions=[2])   # list of signed literals, or None
"""
from __future__ import annotations

import heapq
from typing import Iterable, Sequence

try:  # optional fast backend
    from pysat.solvers import Solver as _PysatSolver
except ImportError:  # pragma: no cover
    _PysatSolver = None


def _luby(i: int) -> int:
    k = 1
    while (1 << k) - 1 < i + 1:
        k += 1
    while True:
        if i + 1 == (1 << k) - 1:
            return 1 << (k - 1)
        i = i - (1 << (k - 1)) + 1
        k = 1
        while (1 << k) - 1 < i + 1:
            k += 1


class CdclSolver:
    """Conflict-driven clause learning with 1UIP learning, VSIDS, phase saving and Luby restarts."""

    def __init__(self, clauses: Iterable[Sequence[int]] = ()):
        self.nvars = 0
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[list[int]]] = {}
        self.value: list[int] = [0]     # per var: 0 unassigned, 1 true, -1 false
        self.level: list[int] = [0]
        self.reason: list[list[int] | None] = [None]
        self.activity: list[float] = [0.0]
        self.phase: list[int] = [-1]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.heap: list[tuple[float, int]] = []
        self.inc = 1.0
        self.ok = True
        self.conflicts = 0
        for c in clauses:
            self.add_clause(c)

    # bookkeeping

    def _ensure(self, v: int):
        while self.nvars < v:
            self.nvars += 1
            self.value.append(0)
            self.level.append(0)
            self.reason.append(None)
            self.activity.append(0.0)
            self.phase.append(-1)
            self.watches[self.nvars] = []
            self.watches[-self.nvars] = []
            heapq.heappush(self.heap, (0.0, self.nvars))

    def _val(self, lit: int) -> int:
        v = self.value[abs(lit)]
        return v if lit > 0 else -v

    def _assign(self, lit: int, reason):
        v = abs(lit)
        self.value[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _backtrack(self, lvl: int):
        if len(self.trail_lim) <= lvl:
            return
        stop = self.trail_lim[lvl]
        for lit in self.trail[stop:]:
            v = abs(lit)
            self.phase[v] = self.value[v]
            self.value[v] = 0
            self.reason[v] = None
            heapq.heappush(self.heap, (-self.activity[v], v))
        del self.trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = min(self.qhead, len(self.trail))

    # clauses

    def add_clause(self, clause: Sequence[int]) -> bool:
        if not self.ok:
            return False
        self._backtrack(0)
        lits = []
        seen = set()
        for lit in clause:
            if lit == 0:
                raise ValueError("0 is not a literal")
            self._ensure(abs(lit))
            if -lit in seen:
                return True
            if lit in seen:
                continue
            seen.add(lit)
            val = self._val(lit)
            if val == 1:
                return True
            if val == 0:
                lits.append(lit)
        if not lits:
            self.ok = False
            return False
        if len(lits) == 1:
            self._assign(lits[0], None)
            if self._propagate() is not None:
                self.ok = False
            return self.ok
        self.clauses.append(lits)
        self.watches[lits[0]].append(lits)
        self.watches[lits[1]].append(lits)
        return True

    def _propagate(self):
        """Unit propagation; returns a conflicting clause or None."""
        trail = self.trail
        value = self.value
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            false_lit = -p
            ws = self.watches[false_lit]
            keep = []
            i = 0
            n = len(ws)
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                fv = value[abs(first)]
                if (fv if first > 0 else -fv) == 1:
                    keep.append(c)
                    continue
                for j in range(2, len(c)):
                    lit = c[j]
                    lv = value[abs(lit)]
                    if (lv if lit > 0 else -lv) != -1:
                        c[1], c[j] = lit, false_lit
                        self.watches[lit].append(c)
                        break
                else:
                    keep.append(c)
                    if (fv if first > 0 else -fv) == -1:
                        keep.extend(ws[i:])
                        self.watches[false_lit] = keep
                        self.qhead = len(trail)
                        return c
                    self._assign(first, c)
            self.watches[false_lit] = keep
        return None

    def _bump(self, v: int):
        self.activity[v] += self.inc
        if self.activity[v] > 1e100:
            self.activity = [a * 1e-100 for a in self.activity]
            self.inc *= 1e-100
            self.heap = [(-self.activity[x], x) for x in range(1, self.nvars + 1) if self.value[x] == 0]
            heapq.heapify(self.heap)
        if self.value[v] == 0:
            heapq.heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: list[int]) -> tuple[list[int], int]:
        seen = set()
        learnt = [0]
        counter = 0
        p = 0
        idx = len(self.trail) - 1
        cur = len(self.trail_lim)
        clause = confl
        while True:
            for q in clause:
                if q == p:
                    continue
                v = abs(q)
                if v not in seen and self.level[v] > 0:
                    seen.add(v)
                    self._bump(v)
                    if self.level[v] >= cur:
                        counter += 1
                    else:
                        learnt.append(q)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            counter -= 1
            seen.discard(abs(p))
            if counter == 0:
                break
            clause = self.reason[abs(p)]
        learnt[0] = -p
        if len(learnt) == 1:
            return learnt, 0
        # second watch: highest level among the rest
        best = max(range(1, len(learnt)), key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[best] = learnt[best], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _pick(self) -> int:
        while self.heap:
            _, v = heapq.heappop(self.heap)
            if self.value[v] == 0:
                return v if self.phase[v] > 0 else -v
        return 0

    def solve(self, assumptions: Sequence[int] = ()) -> list[int] | None:
        if not self.ok:
            return None
        for a in assumptions:
            self._ensure(abs(a))
        self._backtrack(0)
        if self._propagate() is not None:
            self.ok = False
            return None
        restart_no = 0
        budget = 100 * _luby(restart_no)
        conflicts_here = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                self.conflicts += 1
                conflicts_here += 1
                if len(self.trail_lim) == 0:
                    self.ok = False
                    return None
                learnt, bt = self._analyze(confl)
                self._backtrack(bt)
                if len(learnt) == 1:
                    self._assign(learnt[0], None)
                else:
                    self._learn(learnt)
                    self._assign(learnt[0], learnt)
                self.inc /= 0.95
                continue
            if conflicts_here >= budget:
                restart_no += 1
                budget = 100 * _luby(restart_no)
                conflicts_here = 0
                self._backtrack(0)
                continue
            lvl = len(self.trail_lim)
            if lvl < len(assumptions):
                a = assumptions[lvl]
                val = self._val(a)
                if val == -1:
                    self._backtrack(0)
                    return None
                self.trail_lim.append(len(self.trail))
                if val == 0:
                    self._assign(a, None)
                continue
            lit = self._pick()
            if lit == 0:
                model = [v if self.value[v] > 0 else -v for v in range(1, self.nvars + 1)]
                self._backtrack(0)
                return model
            self.trail_lim.append(len(self.trail))
            self._assign(lit, None)

    def _learn(self, learnt: list[int]):
        self.clauses.append(learnt)
        self.watches[learnt[0]].append(learnt)
        self.watches[learnt[1]].append(learnt)

    def close(self):
        pass


class PysatSolver:
    """Thin adapter over a pysat solver with the same interface."""

    def __init__(self, clauses: Iterable[Sequence[int]] = (), name: str = "cadical153"):
        if _PysatSolver is None:  # pragma: no cover
            raise RuntimeError("python-sat is not installed")
        self._s = _PysatSolver(name=name)
        self.nvars = 0
        for c in clauses:
            self.add_clause(c)

    def add_clause(self, clause: Sequence[int]) -> bool:
        if clause:
            self.nvars = max(self.nvars, max(abs(x) for x in clause))
        self._s.add_clause(list(clause))
        return True

    def solve(self, assumptions: Sequence[int] = ()) -> list[int] | None:
        if assumptions:
            self.nvars = max(self.nvars, max(abs(x) for x in assumptions))
        if not self._s.solve(assumptions=list(assumptions)):
            return None
        model = self._s.get_model() or []
        known = {abs(x) for x in model}
        return model + [-v for v in range(1, self.nvars + 1) if v not in known]

    def close(self):
        self._s.delete()

    def __del__(self):
        try:
            self._s.delete()
        except Exception:
            pass


BACKENDS = ("internal", "pysat")


def default_backend() -> str:
    return "pysat" if _PysatSolver is not None else "internal"


def make_solver(backend: str | None = None, clauses: Iterable[Sequence[int]] = ()):
    backend = backend or default_backend()
    if backend == "internal":
        return CdclSolver(clauses)
    if backend == "pysat":
        return PysatSolver(clauses)
    raise ValueError(f"unknown SAT backend {backend!r}")


def sat_solve(clauses: Iterable[Sequence[int]], assumptions: Sequence[int] = (),
              backend: str = "internal") -> list[int] | None:
    """One-shot solve; the model lists every variable up to the largest mentioned."""
    clauses = list(clauses)
    s = make_solver(backend, clauses)
    try:
        return s.solve(assumptions)
    finally:
        s.close()
