"""Finite automata over prefixes of bounded-lasso words and deterministic parity automata."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Hashable, Sequence

from .lasso import Lasso

PAD = "#"
DEAD = None  # tracker value for "no loop possible from here"


@dataclass
class Dfa:
    alphabet: list
    trans: list[list[int]]
    initial: int
    accepting: frozenset[int]
    labels: list = field(default_factory=list)

    def __post_init__(self):
        self._index = {a: i for i, a in enumerate(self.alphabet)}

    @property
    def num_states(self) -> int:
        return len(self.trans)

    def letter_index(self, letter) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise ValueError(f"letter {letter!r} not in the alphabet") from None

    def step(self, state: int, letter) -> int:
        return self.trans[state][self.letter_index(letter)]

    def run(self, word: Sequence) -> int:
        q = self.initial
        for a in word:
            q = self.step(q, a)
        return q

    def accepts(self, word: Sequence) -> bool:
        return self.run(word) in self.accepting


@dataclass
class PrefixDfa(Dfa):
    """Deterministic acceptor of all finite prefixes of length-``k`` lasso words.

    State labels are ``(stored, trackers)``: the first ``k`` letters read so far
    (padded with ``#``) and one tracker per possible loop start ``j`` (1-based)
    holding the 1-based stored position expected next, or ``None`` once that
    loop has been refuted.
    """
    k: int = 0


def build_prefix_dfa(alphabet: Sequence[Hashable], k: int) -> PrefixDfa:
    """Reachable part of the tracker automaton for ``Prefix(L_k)`` over ``alphabet``.

    ``alphabet`` is the input alphabet, e.g. ``input_letters(I)``; to read
    letters over a larger alphabet project them first.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    if not alphabet:
        raise ValueError("empty alphabet")
    alphabet = list(alphabet)
    start = ((PAD,) * k, tuple(range(1, k + 1)))
    labels = [start]
    index = {start: 0}
    trans: list[list[int]] = []
    i = 0
    while i < len(labels):
        state = labels[i]
        row = []
        for a in alphabet:
            nxt = _prefix_step(state, a, k)
            if nxt not in index:
                index[nxt] = len(labels)
                labels.append(nxt)
            row.append(index[nxt])
        trans.append(row)
        i += 1
    accepting = frozenset(i for i, (_, t) in enumerate(labels) if any(x is not DEAD for x in t))
    return PrefixDfa(alphabet, trans, 0, accepting, labels, k=k)


def _prefix_step(state, a, k: int):
    stored, trackers = state
    m = stored.count(PAD)
    if m >= 1:
        filled = k - m
        return stored[:filled] + (a,) + (PAD,) * (m - 1), trackers
    new = []
    for j, i_j in enumerate(trackers, start=1):
        if i_j is DEAD or stored[i_j - 1] != a:
            new.append(DEAD)
        elif i_j < k:
            new.append(i_j + 1)
        else:
            new.append(j)
    return stored, tuple(new)


def dfa_accepts(dfa: Dfa, word: Sequence) -> bool:
    return dfa.accepts(word)


def minimize_dfa(dfa: Dfa) -> Dfa:
    """Moore partition refinement on the reachable part."""
    # reachable states
    order = [dfa.initial]
    seen = {dfa.initial}
    for q in order:
        for r in dfa.trans[q]:
            if r not in seen:
                seen.add(r)
                order.append(r)
    block = {q: int(q in dfa.accepting) for q in order}
    nblocks = len(set(block.values()))
    while True:
        sigs: dict[tuple, int] = {}
        new_block = {}
        for q in order:
            sig = (block[q],) + tuple(block[r] for r in dfa.trans[q])
            new_block[q] = sigs.setdefault(sig, len(sigs))
        block = new_block
        if len(sigs) == nblocks:
            break
        nblocks = len(sigs)
    # renumber so the initial block is 0 and blocks follow discovery order
    renum: dict[int, int] = {}
    for q in order:
        renum.setdefault(block[q], len(renum))
    trans = [None] * len(renum)
    labels: list = [[] for _ in renum]
    for q in order:
        b = renum[block[q]]
        labels[b].append(dfa.labels[q] if dfa.labels else q)
        if trans[b] is None:
            trans[b] = [renum[block[r]] for r in dfa.trans[q]]
    accepting = frozenset(renum[block[q]] for q in order if q in dfa.accepting)
    return Dfa(list(dfa.alphabet), trans, renum[block[dfa.initial]], accepting, labels)


# parity automata

@dataclass
class ParityAutomaton:
    """Parity automaton; colors are read at states, max color seen infinitely often must be even.

    ``trans[q][a]`` is a successor state index for deterministic automata, or a
    positive Boolean combination ``("and"|"or", [...])`` of state indices.
    """
    alphabet: list
    trans: list[list]
    initial: list[int]
    colors: list[int]
    labels: list = field(default_factory=list)
    max_color: int | None = None

    def __post_init__(self):
        self._index = {a: i for i, a in enumerate(self.alphabet)}
        if self.max_color is not None and any(c > self.max_color for c in self.colors):
            raise ValueError("color above the declared maximum")
        if any(c < 0 for c in self.colors):
            raise ValueError("colors are natural numbers")

    @property
    def num_states(self) -> int:
        return len(self.trans)

    @property
    def deterministic(self) -> bool:
        return len(self.initial) == 1 and all(isinstance(s, int) for row in self.trans for s in row)

    def letter_index(self, letter) -> int:
        try:
            return self._index[letter]
        except KeyError:
            raise ValueError(f"letter {letter!r} not in the alphabet") from None

    def require_deterministic(self):
        if not self.deterministic:
            raise ValueError("operation needs a deterministic parity automaton")


def parity_accepts_lasso(a: ParityAutomaton, lasso: Lasso) -> bool:
    """Acceptance of ``u v^omega`` by a deterministic parity automaton."""
    a.require_deterministic()
    base = [a.letter_index(x) for x in lasso.base]
    k, loop = len(base), lasso.loop_start
    q, pos = a.initial[0], 0
    first_seen: dict[tuple[int, int], int] = {}
    visited: list[int] = []
    while (q, pos) not in first_seen:
        first_seen[(q, pos)] = len(visited)
        visited.append(q)
        q = a.trans[q][base[pos]]
        pos = pos + 1 if pos + 1 < k else loop
    cycle = visited[first_seen[(q, pos)]:]
    return max(a.colors[s] for s in cycle) % 2 == 0


def lift_parity(a: ParityAutomaton, dfa: Dfa, project: Callable) -> ParityAutomaton:
    """Product accepting lasso words of ``a`` plus every word outside the bounded-lasso language.

    The DFA component reads ``project(letter)``; pairs whose DFA state is
    rejecting get color 0.
    """
    a.require_deterministic()
    proj = [dfa.letter_index(project(x)) for x in a.alphabet]
    start = (a.initial[0], dfa.initial)
    labels = [start]
    index = {start: 0}
    trans = []
    i = 0
    while i < len(labels):
        q, d = labels[i]
        row = []
        for li in range(len(a.alphabet)):
            nxt = (a.trans[q][li], dfa.trans[d][proj[li]])
            if nxt not in index:
                index[nxt] = len(labels)
                labels.append(nxt)
            row.append(index[nxt])
        trans.append(row)
        i += 1
    colors = [a.colors[q] if d in dfa.accepting else 0 for q, d in labels]
    return ParityAutomaton(list(a.alphabet), trans, [0], colors, labels, a.max_color)


# DOT export

def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def _fmt_letter(a) -> str:
    if isinstance(a, (frozenset, set)):
        return "{" + ",".join(sorted(a)) + "}"
    return str(a)


def _fmt_prefix_label(label) -> str:
    stored, trackers = label
    w = "".join("#" if x == PAD else _fmt_letter(x) for x in stored)
    t = ",".join("-" if x is DEAD else str(x) for x in trackers)
    return f"{w} | ({t})"


def dfa_to_dot(dfa: Dfa, name: str = "dfa") -> str:
    lines = [f"digraph {name} {{", "  rankdir=LR;", '  __init [shape=point, label=""];']
    for q in range(dfa.num_states):
        if isinstance(dfa, PrefixDfa):
            label = _fmt_prefix_label(dfa.labels[q])
        else:
            label = str(q)
        shape = "doublecircle" if q in dfa.accepting else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{_dot_escape(label)}"];')
    lines.append(f"  __init -> q{dfa.initial};")
    for q, row in enumerate(dfa.trans):
        edges: dict[int, list[str]] = {}
        for a, r in zip(dfa.alphabet, row):
            edges.setdefault(r, []).append(_fmt_letter(a))
        for r, letters in edges.items():
            lines.append(f'  q{q} -> q{r} [label="{_dot_escape(" ".join(letters))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def parity_to_dot(a: ParityAutomaton, name: str = "parity") -> str:
    a.require_deterministic()
    lines = [f"digraph {name} {{", "  rankdir=LR;"]
    for q in range(a.num_states):
        shape = "doublecircle" if a.colors[q] % 2 == 0 else "circle"
        lines.append(f'  q{q} [shape={shape}, label="{q} / {a.colors[q]}"];')
    for i, q in enumerate(a.initial):
        lines.append(f'  __init{i} [shape=point, label=""];')
        lines.append(f"  __init{i} -> q{q};")
    for q, row in enumerate(a.trans):
        edges: dict[int, list[str]] = {}
        for letter, r in zip(a.alphabet, row):
            edges.setdefault(r, []).append(_fmt_letter(letter))
        for r, letters in edges.items():
            lines.append(f'  q{q} -> q{r} [label="{_dot_escape(" ".join(letters))}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
