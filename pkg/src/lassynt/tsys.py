"""Transition systems, environments and the explicit-state synthesis oracles."""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .lasso import CanonicalWord, Lasso, enumerate_k_words, input_letters, format_letter
from .ltl import Ltl, eval_on_lasso, SpecFile

DEFAULT_CEILING = 10**8


class ResourceLimit(RuntimeError):
    pass


@dataclass(frozen=True)
class TransitionSystem:
    """Deterministic Moore machine; ``trans[t][i]`` uses the binary letter index of the input."""
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    labels: tuple[frozenset, ...]
    trans: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "labels", tuple(frozenset(x) for x in self.labels))
        object.__setattr__(self, "trans", tuple(tuple(r) for r in self.trans))
        n = len(self.labels)
        if n < 1 or len(self.trans) != n:
            raise ValueError("labels and transition rows must cover the same n >= 1 states")
        for row in self.trans:
            if len(row) != 2 ** len(self.inputs) or any(not 0 <= t < n for t in row):
                raise ValueError("transition table is not total over the input letters")
        for lab in self.labels:
            if not lab <= set(self.outputs):
                raise ValueError(f"label {set(lab)} uses undeclared outputs")

    @property
    def n(self) -> int:
        return len(self.labels)

    def step(self, t: int, letter: frozenset) -> int:
        return self.trans[t][_index(letter, self.inputs)]

    def to_json(self) -> dict:
        return {
            "states": self.n,
            "inputs": list(self.inputs),
            "outputs": list(self.outputs),
            "labels": [[o for o in self.outputs if o in lab] for lab in self.labels],
            "trans": [list(r) for r in self.trans],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data: dict) -> "TransitionSystem":
        sys = cls(data["inputs"], data["outputs"], data["labels"], data["trans"])
        if data.get("states", sys.n) != sys.n:
            raise ValueError("'states' does not match the label count")
        return sys

    def to_dot(self, name: str = "system") -> str:
        letters = input_letters(self.inputs)
        lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
        for t, lab in enumerate(self.labels):
            lines.append(f'  t{t} [shape=box, label="t{t}\\n{format_letter(lab, self.outputs)}"];')
        lines.append("  __init -> t0;")
        for t, row in enumerate(self.trans):
            edges: dict[int, list[str]] = {}
            for a, r in zip(letters, row):
                edges.setdefault(r, []).append(format_letter(a, self.inputs))
            for r, ls in edges.items():
                lines.append(f'  t{t} -> t{r} [label="{" ".join(ls)}"];')
        lines.append("}")
        return "\n".join(lines) + "\n"


def _index(letter, inputs: Sequence[str]) -> int:
    return sum(1 << b for b, x in enumerate(inputs) if x in letter)


def trace_on_input(sys: TransitionSystem, inp: Lasso) -> Lasso:
    """The trace lasso of ``sys`` reading ``inp``; its length is at most ``n * len(inp)``."""
    k, loop = len(inp), inp.loop_start
    base = [_index(a, sys.inputs) for a in inp.base]
    letters = inp.base
    t, pos = 0, 0
    first: dict[tuple[int, int], int] = {}
    trace = []
    while (t, pos) not in first:
        first[(t, pos)] = len(trace)
        trace.append(sys.labels[t] | letters[pos])
        t = sys.trans[t][base[pos]]
        pos = pos + 1 if pos + 1 < k else loop
    j = first[(t, pos)]
    return Lasso(trace[:j], trace[j:])


class _Evaluator:
    """Memoized evaluation of one formula on trace lassos."""

    def __init__(self, phi: Ltl):
        self.phi = phi
        self.cache: dict[tuple, bool] = {}

    def __call__(self, trace: Lasso) -> bool:
        key = (trace.u, trace.v)
        r = self.cache.get(key)
        if r is None:
            r = self.cache[key] = eval_on_lasso(self.phi, trace.u, trace.v)
        return r


def _words(inputs: Sequence[str], k: int) -> list[CanonicalWord]:
    return enumerate_k_words(input_letters(inputs), k)


def models_lasso_precise(sys: TransitionSystem, phi: Ltl, k: int,
                         words: list[CanonicalWord] | None = None, evaluator=None) -> bool | Lasso:
    """``True`` when every length-``k`` input lasso word yields a trace satisfying ``phi``.

    Otherwise the first violating input lasso (canonical representative).
    """
    words = _words(sys.inputs, k) if words is None else words
    ev = evaluator or _Evaluator(phi)
    for w in words:
        if not ev(trace_on_input(sys, w.rep)):
            return w.rep
    return True


def satisfaction_rate(sys: TransitionSystem, phi: Ltl, k: int,
                      words: list[CanonicalWord] | None = None, evaluator=None) -> Fraction:
    words = _words(sys.inputs, k) if words is None else words
    ev = evaluator or _Evaluator(phi)
    good = sum(1 for w in words if ev(trace_on_input(sys, w.rep)))
    return Fraction(good, len(words))


def count_systems(n: int, num_inputs: int, num_outputs: int) -> int:
    return n ** (n * 2 ** num_inputs) * 2 ** (n * num_outputs)


def enumerate_systems(n: int, inputs: Sequence[str], outputs: Sequence[str],
                      ceiling: int = DEFAULT_CEILING) -> Iterator[TransitionSystem]:
    """Every system with ``n`` states, once each.

    Order: successor table in row-major ``(state, letter)`` order with the
    first entry most significant, then labels as binary counters (state 0's
    label is the most significant digit, output ``b`` is bit ``b``).
    """
    if n < 1:
        raise ValueError("n must be at least 1")
    total = count_systems(n, len(inputs), len(outputs))
    if total > ceiling:
        raise ResourceLimit(f"{total} candidate systems exceed the ceiling {ceiling}")
    nl = 2 ** len(inputs)
    out_sets = [frozenset(o for b, o in enumerate(outputs) if idx >> b & 1)
                for idx in range(2 ** len(outputs))]
    for flat in itertools.product(range(n), repeat=n * nl):
        trans = tuple(flat[t * nl:(t + 1) * nl] for t in range(n))
        for labs in itertools.product(out_sets, repeat=n):
            yield TransitionSystem(inputs, outputs, labs, trans)


def brute_force_synth(spec: SpecFile, n: int, k: int,
                      ceiling: int = DEFAULT_CEILING) -> TransitionSystem | None:
    """First system in enumeration order that is ``k``-lasso-precise for ``spec``."""
    words = _words(spec.inputs, k)
    ev = _Evaluator(spec.formula)
    for sys in enumerate_systems(n, spec.inputs, spec.outputs, ceiling):
        if models_lasso_precise(sys, spec.formula, k, words, ev) is True:
            return sys
    return None


def brute_force_max_rate(spec: SpecFile, n: int, k: int,
                         ceiling: int = DEFAULT_CEILING) -> tuple[TransitionSystem, Fraction]:
    """Exact maximizer of the satisfaction rate; ties go to the earliest system."""
    words = _words(spec.inputs, k)
    total = len(words)
    ev = _Evaluator(spec.formula)
    best, best_good = None, -1
    for sys in enumerate_systems(n, spec.inputs, spec.outputs, ceiling):
        good = 0
        for idx, w in enumerate(words):
            if ev(trace_on_input(sys, w.rep)):
                good += 1
            elif good + (total - idx - 1) <= best_good:
                break
        else:
            if good > best_good:
                best, best_good = sys, good
                if good == total:
                    break
    return best, Fraction(best_good, total)


# environments

@dataclass(frozen=True)
class Environment:
    """Environment machine: reads system outputs, is labeled by system inputs."""
    inputs: tuple[str, ...]
    outputs: tuple[str, ...]
    labels: tuple[frozenset, ...]
    trans: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "inputs", tuple(self.inputs))
        object.__setattr__(self, "outputs", tuple(self.outputs))
        object.__setattr__(self, "labels", tuple(frozenset(x) for x in self.labels))
        object.__setattr__(self, "trans", tuple(tuple(r) for r in self.trans))
        n = len(self.labels)
        if n < 1 or len(self.trans) != n:
            raise ValueError("labels and transition rows must cover the same states")
        for row in self.trans:
            if len(row) != 2 ** len(self.outputs) or any(not 0 <= s < n for s in row):
                raise ValueError("environment transitions must be total over output letters")

    @property
    def n(self) -> int:
        return len(self.labels)

    @classmethod
    def from_lasso(cls, inp: Lasso, inputs: Sequence[str], outputs: Sequence[str]) -> "Environment":
        """Output-blind environment producing ``inp`` with ``len(inp)`` states."""
        k = len(inp)
        succ = [p + 1 if p + 1 < k else inp.loop_start for p in range(k)]
        return cls(inputs, outputs, inp.base, [[succ[p]] * 2 ** len(outputs) for p in range(k)])


def compose(sys: TransitionSystem, env: Environment) -> Lasso:
    """The unique trace of the closed loop.

    At step ``i`` the environment emits ``iota(s_i)``, the system is in ``t_i``;
    then ``t_{i+1} = tau(t_i, iota(s_i))`` and ``s_{i+1} = rho(s_i, o(t_{i+1}))``.
    """
    if tuple(sys.inputs) != tuple(env.inputs) or tuple(sys.outputs) != tuple(env.outputs):
        raise ValueError("system and environment alphabets differ")
    t, s = 0, 0
    first: dict[tuple[int, int], int] = {}
    trace = []
    while (t, s) not in first:
        first[(t, s)] = len(trace)
        e = env.labels[s]
        trace.append(sys.labels[t] | e)
        t = sys.trans[t][_index(e, sys.inputs)]
        s = env.trans[s][_index(sys.labels[t], sys.outputs)]
    j = first[(t, s)]
    return Lasso(trace[:j], trace[j:])


def check_under_env(sys: TransitionSystem, env: Environment, phi: Ltl) -> bool:
    return eval_on_lasso(phi, compose(sys, env))


def enumerate_environments(size: int, inputs: Sequence[str], outputs: Sequence[str]) -> Iterator[Environment]:
    nl = 2 ** len(outputs)
    in_sets = input_letters(inputs)
    for flat in itertools.product(range(size), repeat=size * nl):
        trans = [flat[s * nl:(s + 1) * nl] for s in range(size)]
        for labs in itertools.product(in_sets, repeat=size):
            yield Environment(inputs, outputs, labs, trans)
