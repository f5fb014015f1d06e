"""Exact and approximate lasso-precise synthesis, witness checking and reports."""
from __future__ import annotations

import logging
import os
import shlex
import subprocess
import tempfile
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .encoding import CountingProblem, DecodeError, decode_system, encode_counting, encode_synthesis
from .lasso import Lasso, enumerate_k_words, format_lasso, input_letters
from .ltl import SpecFile
from .qbf import RESOURCE, SAT, UNSAT, emit_qdimacs, make_solver, solve_qbf
from .qbf.cegar import DEFAULT_MAX_REFINEMENTS
from .tsys import (DEFAULT_CEILING, ResourceLimit, TransitionSystem, _Evaluator, brute_force_max_rate,
                   brute_force_synth, models_lasso_precise, trace_on_input)

log = logging.getLogger(__name__)

REALIZABLE = "realizable"
UNREALIZABLE = "unrealizable"
RESOURCE_LIMIT = "resource-limit"

BACKENDS = ("internal-qbf", "external-qbf", "brute-force")
SOLVER_ENV = "LASSYNT_SOLVER"


class SynthesisError(RuntimeError):
    """Raised when a backend misbehaves (bad certificate, witness failing the oracle)."""


@dataclass
class SynthConfig:
    backend: str = "internal-qbf"
    sat_backend: str | None = None        # None picks pysat when installed
    solver_cmd: str | None = None         # external QDIMACS solver; falls back to $LASSYNT_SOLVER
    max_refinements: int = DEFAULT_MAX_REFINEMENTS
    timeout: float | None = None
    ceiling: int = DEFAULT_CEILING        # brute-force guard on the number of candidate systems
    phase_guard: bool = True
    use_lemma: bool = True                # input-lasso lemmas in the CEGAR loop


@dataclass
class SynthesisResult:
    verdict: str
    witness: TransitionSystem | None = None
    stats: dict = field(default_factory=dict)
    backend: str = ""
    n: int = 0
    k: int = 0

    def to_json(self) -> dict:
        out = {"verdict": self.verdict, "backend": self.backend, "n": self.n, "k": self.k,
               "stats": self.stats}
        if self.witness is not None:
            out["witness"] = self.witness.to_json()
        return out


@dataclass
class ApproxResult:
    system: TransitionSystem
    rate: Fraction
    epsilon: float
    table: list[tuple[str, bool]] | None = None

    @property
    def satisfied(self) -> bool:
        return self.rate >= 1 - Fraction(self.epsilon).limit_denominator(10**9)

    def to_json(self) -> dict:
        out = {"rate": f"{self.rate.numerator}/{self.rate.denominator}",
               "rate_float": float(self.rate), "epsilon": self.epsilon,
               "satisfied": self.satisfied, "witness": self.system.to_json()}
        if self.table is not None:
            out["words"] = [{"input": w, "holds": ok} for w, ok in self.table]
        return out


def check(spec: SpecFile, system: TransitionSystem, k: int) -> bool | Lasso:
    """``True`` if ``system`` is ``k``-lasso-precise for ``spec``, else a violating input lasso."""
    if tuple(system.inputs) != tuple(spec.inputs) or tuple(system.outputs) != tuple(spec.outputs):
        raise ValueError(f"system alphabet {system.inputs}/{system.outputs} does not match "
                         f"spec {tuple(spec.inputs)}/{tuple(spec.outputs)}")
    return models_lasso_precise(system, spec.formula, k)


def _verified(spec: SpecFile, sys: TransitionSystem, k: int) -> TransitionSystem:
    res = models_lasso_precise(sys, spec.formula, k)
    if res is not True:
        raise SynthesisError("witness from the QBF backend violates the specification on "
                             + format_lasso(res, spec.inputs) + "; this indicates an encoder bug")
    return sys


def _run_external(cmd: str, text: str, timeout: float | None) -> tuple[str, dict[int, bool]]:
    with tempfile.NamedTemporaryFile("w", suffix=".qdimacs", delete=False) as fh:
        fh.write(text)
        path = fh.name
    try:
        proc = subprocess.run(shlex.split(cmd) + [path], capture_output=True, text=True,
                              timeout=timeout)
    except subprocess.TimeoutExpired:
        return RESOURCE, {}
    finally:
        os.unlink(path)
    if proc.returncode == 10:
        status = SAT
    elif proc.returncode == 20:
        status = UNSAT
    else:
        raise SynthesisError(f"external solver exited with {proc.returncode}: {proc.stderr.strip()}")
    model = {}
    for line in proc.stdout.splitlines():
        parts = line.split()
        if parts and parts[0] == "V":
            for tok in parts[1:]:
                lit = int(tok)
                if lit:
                    model[abs(lit)] = lit > 0
    return status, model


def synthesize(spec: SpecFile, n: int, k: int, config: SynthConfig | None = None) -> SynthesisResult:
    cfg = config or SynthConfig()
    if n < 1 or k < 1:
        raise ValueError("n and k must be at least 1")
    t0 = time.perf_counter()
    if cfg.backend == "brute-force":
        try:
            sys = brute_force_synth(spec, n, k, cfg.ceiling)
        except ResourceLimit as e:
            return SynthesisResult(RESOURCE_LIMIT, None, {"reason": str(e)}, cfg.backend, n, k)
        verdict = REALIZABLE if sys is not None else UNREALIZABLE
        stats = {"time": round(time.perf_counter() - t0, 3)}
        return SynthesisResult(verdict, sys, stats, cfg.backend, n, k)
    if cfg.backend not in BACKENDS:
        raise ValueError(f"unknown backend {cfg.backend!r}")

    enc = encode_synthesis(spec, n, k, phase_guard=cfg.phase_guard)
    p = enc.problem
    stats = {"vars": p.num_vars, "clauses": len(p.clauses), "gates": enc.gates,
             "universals": len(enc.layout.universal_vars())}
    if cfg.backend == "internal-qbf":
        res = solve_qbf(p, cfg.sat_backend, cfg.max_refinements, cfg.timeout,
                        enc.lemma if cfg.use_lemma else None)
        status, model = res.status, res.model
        stats["refinements"] = res.refinements
    else:
        cmd = cfg.solver_cmd or os.environ.get(SOLVER_ENV)
        if not cmd:
            raise ValueError(f"external-qbf needs --solver or ${SOLVER_ENV}")
        status, model = _run_external(cmd, emit_qdimacs(p), cfg.timeout)
    stats["time"] = round(time.perf_counter() - t0, 3)
    if status == RESOURCE:
        return SynthesisResult(RESOURCE_LIMIT, None, stats, cfg.backend, n, k)
    if status == UNSAT:
        return SynthesisResult(UNREALIZABLE, None, stats, cfg.backend, n, k)
    if not model:
        raise SynthesisError("solver reported SAT without a certificate for the outer block")
    try:
        sys = decode_system(model, enc.layout)
    except DecodeError as e:
        raise SynthesisError(f"cannot decode witness: {e}") from e
    return SynthesisResult(REALIZABLE, _verified(spec, sys, k), stats, cfg.backend, n, k)


def sweep_n(spec: SpecFile, max_n: int, k: int, config: SynthConfig | None = None) -> SynthesisResult:
    """Try ``n = 1 .. max_n`` and return the first non-unrealizable result."""
    res = None
    for n in range(1, max_n + 1):
        res = synthesize(spec, n, k, config)
        if res.verdict != UNREALIZABLE:
            return res
    return res


def approx_synthesize(spec: SpecFile, n: int, k: int, epsilon: float = 0.0,
                      ceiling: int = DEFAULT_CEILING, table: bool = False) -> ApproxResult:
    """Exact maximizer of the satisfaction rate over all systems with ``n`` states.

    Ties go to the first system in enumeration order. The rate of the returned
    system is recomputed from scratch after the search.
    """
    best, best_rate = brute_force_max_rate(spec, n, k, ceiling)
    words = enumerate_k_words(input_letters(spec.inputs), k)
    ev = _Evaluator(spec.formula)
    rows = [(format_lasso(w.rep, spec.inputs), ev(trace_on_input(best, w.rep))) for w in words]
    rate = Fraction(sum(ok for _, ok in rows), len(rows))
    if rate != best_rate:
        raise SynthesisError(f"rate recomputation mismatch: {rate} vs {best_rate}")
    return ApproxResult(best, rate, epsilon, rows if table else None)


def export_counting(spec: SpecFile, n: int, k: int, path: str | Path,
                    phase_guard: bool = True) -> Path:
    """Write the maximum-model-counting instance for ``(spec, n, k)`` and return its path."""
    cp = encode_counting(spec, n, k, phase_guard=phase_guard)
    path = Path(path)
    header = [f"lassynt counting instance n={n} k={k}",
              f"inputs {' '.join(spec.inputs)} outputs {' '.join(spec.outputs)}",
              f"formula {spec.formula}"]
    path.write_text(cp.to_dimacs(header))
    return path


def max_projected_count(cp: CountingProblem, backend: str | None = None,
                        limit: int = 1 << 16) -> tuple[int, dict[int, bool]]:
    """Exhaustive maximum model count: every assignment of ``max_vars`` is tried."""
    mv = cp.max_vars
    if 2 ** len(mv) > limit:
        raise ResourceLimit(f"2^{len(mv)} max-variable assignments exceed {limit}")
    s = make_solver(backend, cp.clauses)
    top = cp.num_vars
    best, best_assign = -1, {}
    try:
        for bits in range(2 ** len(mv)):
            assign = {v: bool(bits >> i & 1) for i, v in enumerate(mv)}
            lits = [v if b else -v for v, b in assign.items()]
            if s.solve(lits) is None:
                c = 0
            else:
                top += 1
                act = top
                c = 0
                while True:
                    m = s.solve(lits + [act])
                    if m is None:
                        break
                    vals = {abs(x): x > 0 for x in m}
                    c += 1
                    s.add_clause([-act] + [-v if vals.get(v, False) else v for v in cp.count_vars])
                s.add_clause([-act])
            if c > best:
                best, best_assign = c, assign
    finally:
        s.close()
    return best, best_assign
