"""Counterexample-guided solving of exists-forall-exists(definitional) QBF."""
from __future__ import annotations

import itertools
import logging
import time
from dataclasses import dataclass, field

from .qdimacs import QbfProblem
from .sat import make_solver

log = logging.getLogger(__name__)

SAT = "sat"
UNSAT = "unsat"
RESOURCE = "resource"

DEFAULT_MAX_REFINEMENTS = 10**6


@dataclass
class Lemma:
    """A necessary condition ``forall F. exists W. clauses`` supplied by the caller.

    Variables in ``fixed`` are universals of the problem and get the
    counterexample's values; outer existentials keep their ids; every other
    variable is renamed apart in each instantiation.
    """
    clauses: list[list[int]]
    fixed: list[int]


@dataclass
class QbfResult:
    status: str                      # sat | unsat | resource
    model: dict[int, bool] = field(default_factory=dict)   # outer existential block
    refinements: int = 0


def _split_prefix(p: QbfProblem) -> tuple[list[int], list[int], list[int]]:
    blocks = [(q, vs) for q, vs in p.prefix if vs]
    qs = "".join(q for q, _ in blocks)
    if qs not in ("ea", "eae", "a", "ae", "e", ""):
        raise ValueError(f"unsupported quantifier prefix {qs!r}; expected exists-forall-exists")
    outer: list[int] = []
    univ: list[int] = []
    inner: list[int] = []
    seen_a = False
    for q, vs in blocks:
        if q == "a":
            univ += vs
            seen_a = True
        elif seen_a:
            inner += vs
        else:
            outer += vs
    quantified = set(outer) | set(univ) | set(inner)
    # free variables are outermost existential by convention
    outer += [v for v in range(1, p.num_vars + 1) if v not in quantified]
    return outer, univ, inner


def solve_qbf(p: QbfProblem, backend: str | None = None,
              max_refinements: int = DEFAULT_MAX_REFINEMENTS,
              timeout: float | None = None, lemma: Lemma | None = None) -> QbfResult:
    """Decide ``exists X. forall Y. exists Z. matrix``.

    ``Z`` must be definitional: the clauses outside ``p.core`` define each
    ``Z`` variable as a function of the others, so for fixed ``X, Y`` they have
    exactly one model. Candidates for ``X`` come from an abstraction that
    holds one renamed copy of the matrix per universal counterexample; a
    candidate is verified by searching ``Y`` that violates the core with the
    definitions kept asserted.

    A ``lemma`` is instantiated alongside each matrix copy; it must be implied
    by the QBF for UNSAT answers to stay correct. Exceeding ``max_refinements`` or ``timeout`` seconds yields ``RESOURCE``.
    """
    deadline = None if timeout is None else time.monotonic() + timeout
    outer, univ, inner = _split_prefix(p)
    if inner and p.core is None:
        raise ValueError("inner existential block without definitional metadata (core)")
    defs = p.definition_clauses
    core = p.core_clauses
    inner_set = set(inner)

    # verifier: definitions, plus "some core clause is false"
    verifier = make_solver(backend)
    top = p.num_vars
    for c in defs:
        verifier.add_clause(c)
    violated = []
    for c in core:
        top += 1
        s = top                       # s -> clause false
        for lit in c:
            verifier.add_clause([-s, -lit])
        violated.append(s)
    verifier.add_clause(violated)

    abstraction = make_solver(backend)
    next_free = [p.num_vars]
    refinements = 0

    outer_set = set(outer)

    def add_copy(y_val: dict[int, bool], clauses, keep) -> None:
        ren: dict[int, int] = {}
        for c in clauses:
            out = []
            sat = False
            for lit in c:
                v = abs(lit)
                if v in y_val:
                    if y_val[v] == (lit > 0):
                        sat = True
                        break
                    continue
                if not keep(v):
                    nv = ren.get(v)
                    if nv is None:
                        next_free[0] += 1
                        nv = ren[v] = next_free[0]
                    out.append(nv if lit > 0 else -nv)
                else:
                    out.append(lit)
            if not sat:
                abstraction.add_clause(out)
                if not out:
                    return

    try:
        if not univ:
            model = make_solver(backend, p.clauses).solve()
            if model is None:
                return QbfResult(UNSAT)
            vals = {abs(x): x > 0 for x in model}
            return QbfResult(SAT, {v: vals.get(v, False) for v in outer})
        for v in outer:
            abstraction.add_clause([v, -v])
        while True:
            cand = abstraction.solve()
            if cand is None:
                return QbfResult(UNSAT, refinements=refinements)
            vals = {abs(x): x > 0 for x in cand}
            x_val = {v: vals.get(v, False) for v in outer}
            cex = verifier.solve([v if b else -v for v, b in x_val.items()])
            if cex is None:
                return QbfResult(SAT, x_val, refinements)
            refinements += 1
            if refinements > max_refinements or (
                    deadline is not None and time.monotonic() > deadline):
                return QbfResult(RESOURCE, refinements=refinements)
            cvals = {abs(x): x > 0 for x in cex}
            y_val = {v: cvals.get(v, False) for v in univ}
            add_copy(y_val, p.clauses, lambda v: v not in inner_set)
            if lemma is not None:
                fixed = {v: y_val[v] for v in lemma.fixed}
                add_copy(fixed, lemma.clauses, lambda v: v in outer_set)
            if refinements % 100 == 0:
                log.debug("cegar: %d refinements", refinements)
    finally:
        verifier.close()
        abstraction.close()


def solve_by_expansion(p: QbfProblem, backend: str | None = None) -> QbfResult:
    """Reference decision by full universal expansion; exponential in the universal block."""
    outer, univ, inner = _split_prefix(p)
    if len(univ) > 20:
        raise ValueError("too many universal variables for expansion")
    s = make_solver(backend)
    nxt = p.num_vars
    inner_set = set(inner)
    for bits in itertools.product((False, True), repeat=len(univ)):
        y_val = dict(zip(univ, bits))
        ren: dict[int, int] = {}
        for c in p.clauses:
            out = []
            sat = False
            for lit in c:
                v = abs(lit)
                if v in y_val:
                    if y_val[v] == (lit > 0):
                        sat = True
                        break
                    continue
                if v in inner_set:
                    if v not in ren:
                        nxt += 1
                        ren[v] = nxt
                    out.append(ren[v] if lit > 0 else -ren[v])
                else:
                    out.append(lit)
            if not sat:
                s.add_clause(out)
    for v in outer:
        s.add_clause([v, -v])
    try:
        model = s.solve()
    finally:
        s.close()
    if model is None:
        return QbfResult(UNSAT)
    vals = {abs(x): x > 0 for x in model}
    return QbfResult(SAT, {v: vals.get(v, False) for v in outer})
