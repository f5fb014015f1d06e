"""QBF and maximum-model-counting encodings of bounded lasso-precise synthesis."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .lasso import delta, input_letters
from .ltl import (AND, ATOM, FALSE, NATOM, NEXT, OR, RELEASE, TRUE, UNTIL, Ltl, SpecFile,
                  is_nnf, to_nnf)
from .qbf.expr import (COUNTING, INPUT, INPUT_LOOP, LABEL, RUN_LOOP, RUN_OUTPUT, RUN_STATE,
                       SYSTEM, Builder, Expr, VarPool, tseitin)
from .qbf.cegar import Lemma
from .qbf.qdimacs import QbfProblem, emit_dimacs
from .tsys import TransitionSystem


@dataclass
class VarLayout:
    n: int
    k: int
    inputs: list[str]
    outputs: list[str]
    pool: VarPool = field(default_factory=VarPool)
    tau: dict[tuple[int, int, int], int] = field(default_factory=dict)     # (t, letter, t')
    label: dict[tuple[int, str], int] = field(default_factory=dict)        # (t, o)
    inp: dict[tuple[str, int], int] = field(default_factory=dict)          # (x, j), j < k
    loop: dict[int, int] = field(default_factory=dict)                     # j < k
    out: dict[tuple[str, int], int] = field(default_factory=dict)          # (o, j), j < n*k
    state: dict[tuple[int, int], int] = field(default_factory=dict)        # (t, j), j < n*k
    run_loop: dict[int, int] = field(default_factory=dict)                 # j < n*k
    count: dict[tuple[str, int], int] = field(default_factory=dict)        # (x, p), p < 2k

    @property
    def m(self) -> int:
        return self.n * self.k

    @property
    def letters(self) -> list[frozenset]:
        return input_letters(self.inputs)

    @classmethod
    def build(cls, n: int, k: int, inputs, outputs, counting: bool = False) -> "VarLayout":
        if n < 1 or k < 1:
            raise ValueError("n and k must be at least 1")
        lay = cls(n, k, list(inputs), list(outputs))
        new = lay.pool.new
        nl = 2 ** len(lay.inputs)
        for t in range(n):
            for i in range(nl):
                for t2 in range(n):
                    lay.tau[t, i, t2] = new(SYSTEM, f"tau[{t},{i},{t2}]")
        for t in range(n):
            for o in lay.outputs:
                lay.label[t, o] = new(LABEL, f"label[{t},{o}]")
        for x in lay.inputs:
            for j in range(k):
                lay.inp[x, j] = new(INPUT, f"in[{x},{j}]")
        for j in range(k):
            lay.loop[j] = new(INPUT_LOOP, f"l[{j}]")
        m = n * k
        for o in lay.outputs:
            for j in range(m):
                lay.out[o, j] = new(RUN_OUTPUT, f"out[{o},{j}]")
        for t in range(n):
            for j in range(m):
                lay.state[t, j] = new(RUN_STATE, f"st[{t},{j}]")
        for j in range(m):
            lay.run_loop[j] = new(RUN_LOOP, f"lp[{j}]")
        if counting:
            for x in lay.inputs:
                for p in range(2 * k):
                    lay.count[x, p] = new(COUNTING, f"u[{x},{p}]")
        return lay

    def system_vars(self) -> list[int]:
        return list(self.tau.values()) + list(self.label.values())

    def universal_vars(self) -> list[int]:
        return (list(self.inp.values()) + list(self.loop.values()) + list(self.out.values())
                + list(self.state.values()) + list(self.run_loop.values()))


def expected_var_count(n: int, k: int, ni: int, no: int) -> int:
    return n * (n * 2 ** ni + no) + k * (ni + 1) + n * k * (no + n + 1)


class Encoder:
    """Builds the constraint circuits over one layout and one shared ``Builder``."""

    def __init__(self, layout: VarLayout, builder: Builder | None = None):
        self.lay = layout
        self.b = builder or Builder()

    def v(self, var: int) -> Expr:
        return self.b.var(var)

    # input letters read at unrolled position h, one clause per loop choice

    def input_literal(self, x: str, h: int, positive: bool = True) -> Expr:
        b, lay = self.b, self.lay
        parts = []
        for jp in range(lay.k):
            lit = self.v(lay.inp[x, delta(h, lay.k, jp)])
            parts.append(b.implies(self.v(lay.loop[jp]), lit if positive else b.not_(lit)))
        return b.and_(parts)

    def input_is(self, h: int, letter: frozenset) -> Expr:
        b, lay = self.b, self.lay
        parts = []
        for jp in range(lay.k):
            pos = delta(h, lay.k, jp)
            match = b.and_([self.v(lay.inp[x, pos]) if x in letter else b.not_(self.v(lay.inp[x, pos]))
                            for x in lay.inputs])
            parts.append(b.implies(self.v(lay.loop[jp]), match))
        return b.and_(parts)

    # constraints

    def det(self) -> Expr:
        b, lay = self.b, self.lay
        groups = []
        for t in range(lay.n):
            for i in range(len(lay.letters)):
                cubes = []
                for t1 in range(lay.n):
                    cube = [self.v(lay.tau[t, i, t1])]
                    cube += [b.not_(self.v(lay.tau[t, i, t2])) for t2 in range(lay.n) if t2 != t1]
                    cubes.append(b.and_(cube))
                groups.append(b.or_(cubes))
        return b.and_(groups)

    def loop_onehot(self) -> Expr:
        b, lay = self.b, self.lay
        return b.and_(b.exactly_one(self.v(lay.loop[j]) for j in range(lay.k)),
                      b.exactly_one(self.v(lay.run_loop[j]) for j in range(lay.m)))

    def loop_phase(self) -> Expr:
        """The run may only loop back to a position reading the same input position."""
        b, lay = self.b, self.lay
        m, k = lay.m, lay.k
        bad = []
        for j in range(m):
            for jp in range(k):
                if delta(j, k, jp) != delta(m, k, jp):
                    bad.append(b.not_(b.and_(self.v(lay.run_loop[j]), self.v(lay.loop[jp]))))
        return b.and_(bad)

    def membership(self) -> Expr:
        b, lay = self.b, self.lay
        n, m = lay.n, lay.m
        letters = lay.letters
        parts = []
        # outputs follow the labels of the visited states
        for j in range(m):
            for t in range(n):
                parts.append(b.implies(self.v(lay.state[t, j]), b.and_(
                    [b.iff(self.v(lay.out[o, j]), self.v(lay.label[t, o])) for o in lay.outputs])))
        parts.append(self.v(lay.state[0, 0]))
        for j in range(m):
            reads = [self.input_is(j, a) for a in letters]
            for i in range(len(letters)):
                for t in range(n):
                    guard = b.and_(reads[i], self.v(lay.state[t, j]))
                    for t2 in range(n):
                        if j < m - 1:
                            target = self.v(lay.state[t2, j + 1])
                        else:
                            target = b.or_([b.and_(self.v(lay.run_loop[jj]), self.v(lay.state[t2, jj]))
                                            for jj in range(m)])
                        parts.append(b.implies(guard, b.iff(self.v(lay.tau[t, i, t2]), target)))
        return b.and_(parts)

    def ltl(self, phi: Ltl) -> Expr:
        """Satisfaction of ``phi`` (NNF) at position 0 of the run lasso, split by loop position."""
        if not is_nnf(phi):
            raise ValueError("formula must be in negation normal form")
        b, lay = self.b, self.lay
        return b.or_([b.and_(self.v(lay.run_loop[j]), self._ltl_loop(phi, j)[0])
                      for j in range(lay.m)])

    def _ltl_loop(self, phi: Ltl, j: int) -> list[Expr]:
        b, lay = self.b, self.lay
        m = lay.m
        inputs, outputs = set(lay.inputs), set(lay.outputs)
        vals: dict[Ltl, list[Expr]] = {}
        for g in phi.subformulas():
            k = g.kind
            if k in (ATOM, NATOM):
                pos = k == ATOM
                if g.name in inputs:
                    vals[g] = [self.input_literal(g.name, h, pos) for h in range(m)]
                elif g.name in outputs:
                    vals[g] = [self.v(lay.out[g.name, h]) if pos else b.not_(self.v(lay.out[g.name, h]))
                               for h in range(m)]
                else:
                    raise ValueError(f"atom {g.name!r} is neither input nor output")
            elif k == TRUE:
                vals[g] = [b.true] * m
            elif k == FALSE:
                vals[g] = [b.false] * m
            elif k == AND:
                vals[g] = [b.and_(x, y) for x, y in zip(vals[g.args[0]], vals[g.args[1]])]
            elif k == OR:
                vals[g] = [b.or_(x, y) for x, y in zip(vals[g.args[0]], vals[g.args[1]])]
            elif k == NEXT:
                a = vals[g.args[0]]
                vals[g] = [a[h + 1] if h < m - 1 else a[j] for h in range(m)]
            elif k in (UNTIL, RELEASE):
                vals[g] = self._fixpoint(vals[g.args[0]], vals[g.args[1]], j, k == UNTIL)
            else:  # pragma: no cover
                raise ValueError(k)
        return vals[phi]

    def _fixpoint(self, a: list[Expr], c: list[Expr], j: int, until: bool) -> list[Expr]:
        # second copy of the loop starts from the trivial approximant, the first copy reads it
        b = self.b
        m = len(a)

        def step(h, nxt):
            if until:
                return b.or_(c[h], b.and_(a[h], nxt))
            return b.and_(c[h], b.or_(a[h], nxt))

        approx = b.false if until else b.true
        second: dict[int, Expr] = {}
        for h in range(m - 1, j - 1, -1):
            second[h] = step(h, second[h + 1] if h < m - 1 else approx)
        first: list[Expr] = [None] * m
        for h in range(m - 1, -1, -1):
            first[h] = step(h, first[h + 1] if h < m - 1 else second[j])
        return first

    def unrolling(self) -> Expr:
        """Counting variables spell out the first ``2k`` input letters."""
        b, lay = self.b, self.lay
        parts = []
        for p in range(2 * lay.k):
            for x in lay.inputs:
                for jp in range(lay.k):
                    parts.append(b.implies(self.v(lay.loop[jp]), b.iff(
                        self.v(lay.count[x, p]), self.v(lay.inp[x, delta(p, lay.k, jp)]))))
        return b.and_(parts)


# public entry points

def encode_det(layout: VarLayout, builder: Builder | None = None) -> Expr:
    return Encoder(layout, builder).det()


def encode_loop_onehot(layout: VarLayout, builder: Builder | None = None) -> Expr:
    return Encoder(layout, builder).loop_onehot()


def encode_membership(layout: VarLayout, builder: Builder | None = None) -> Expr:
    return Encoder(layout, builder).membership()


def encode_ltl(phi: Ltl, layout: VarLayout, builder: Builder | None = None) -> Expr:
    return Encoder(layout, builder).ltl(phi)


@dataclass
class SynthesisEncoding:
    problem: QbfProblem
    layout: VarLayout
    root: Expr
    gates: int
    lemma_builder: Callable[[], Lemma] | None = field(default=None, repr=False)
    _lemma: Lemma | None = field(default=None, repr=False)

    @property
    def lemma(self) -> Lemma | None:
        """Solver lemma for this instance, built on first use."""
        if self._lemma is None and self.lemma_builder is not None:
            self._lemma = self.lemma_builder()
        return self._lemma


def encode_synthesis(spec: SpecFile, n: int, k: int, phase_guard: bool = True) -> SynthesisEncoding:
    """``det & (lasso & member -> [[phi]])`` as an exists-forall-exists QBF.

    With ``phase_guard`` the antecedent also forbids loop-back positions whose
    input position differs from the one the run would actually continue at.
    """
    lay = VarLayout.build(n, k, spec.inputs, spec.outputs)
    enc = Encoder(lay)
    b = enc.b
    antecedent = [enc.loop_onehot(), enc.membership()]
    if phase_guard:
        antecedent.append(enc.loop_phase())
    root = b.and_(enc.det(), b.implies(b.and_(antecedent), enc.ltl(to_nnf(spec.formula))))
    n_base = lay.pool.top
    cnf = tseitin(root, lay.pool)
    definitional = list(range(n_base + 1, lay.pool.top + 1))
    prefix = [("e", lay.system_vars()), ("a", lay.universal_vars()), ("e", definitional)]
    core = [len(cnf.clauses) - 1] if cnf.root else list(range(len(cnf.clauses)))
    problem = QbfProblem(lay.pool.top, prefix, cnf.clauses, core, dict(lay.pool.roles),
                         dict(lay.pool.names))
    # On a fixed input lasso the run of a deterministic system is consistent
    # with the membership constraints, so its trace has to satisfy phi; this
    # is implied by the QBF and speeds up the solver's refinements.
    def lemma() -> Lemma:
        loop_ok = b.exactly_one([enc.v(x) for x in lay.loop.values()])
        body = b.and_([enc.det()] + antecedent + [enc.ltl(to_nnf(spec.formula))])
        side = tseitin(b.implies(loop_ok, body), VarPool(dict(lay.pool.roles), dict(lay.pool.names)))
        return Lemma(side.clauses, list(lay.inp.values()) + list(lay.loop.values()))

    return SynthesisEncoding(problem, lay, root, len(definitional), lemma)


@dataclass
class CountingProblem:
    """``max over max_vars, count over count_vars, exists the rest`` of a CNF."""
    num_vars: int
    clauses: list[list[int]]
    max_vars: list[int]
    count_vars: list[int]
    layout: VarLayout | None = None

    @property
    def rest_vars(self) -> list[int]:
        taken = set(self.max_vars) | set(self.count_vars)
        return [v for v in range(1, self.num_vars + 1) if v not in taken]

    def to_dimacs(self, comments: list[str] | None = None) -> str:
        extra = list(comments or [])
        extra.append("max " + " ".join(map(str, self.max_vars)) + " 0")
        extra.append("count " + " ".join(map(str, self.count_vars)) + " 0")
        return emit_dimacs(self.num_vars, self.clauses, extra)

    @classmethod
    def from_dimacs(cls, text: str) -> "CountingProblem":
        from .qbf.qdimacs import parse_dimacs
        nv, clauses, comments = parse_dimacs(text)
        max_vars = count_vars = None
        for c in comments:
            parts = c.split()
            if parts and parts[0] in ("max", "count"):
                ids = [int(x) for x in parts[1:] if x != "0"]
                if parts[0] == "max":
                    max_vars = ids
                else:
                    count_vars = ids
        if max_vars is None or count_vars is None:
            raise ValueError("counting file needs 'c max' and 'c count' lines")
        return cls(nv, clauses, max_vars, count_vars)


def encode_counting(spec: SpecFile, n: int, k: int, phase_guard: bool = True) -> CountingProblem:
    lay = VarLayout.build(n, k, spec.inputs, spec.outputs, counting=True)
    enc = Encoder(lay)
    b = enc.b
    parts = [enc.det(), enc.loop_onehot(), enc.membership(), enc.ltl(to_nnf(spec.formula)),
             enc.unrolling()]
    if phase_guard:
        parts.append(enc.loop_phase())
    cnf = tseitin(b.and_(parts), lay.pool)
    return CountingProblem(lay.pool.top, cnf.clauses, lay.system_vars(), list(lay.count.values()), lay)


class DecodeError(ValueError):
    pass


def decode_system(model: dict[int, bool], layout: VarLayout) -> TransitionSystem:
    n = layout.n
    nl = 2 ** len(layout.inputs)
    trans = []
    for t in range(n):
        row = []
        for i in range(nl):
            succ = [t2 for t2 in range(n) if model.get(layout.tau[t, i, t2], False)]
            if len(succ) != 1:
                raise DecodeError(f"state {t} letter {i}: {len(succ)} successors")
            row.append(succ[0])
        trans.append(row)
    labels = [frozenset(o for o in layout.outputs if model.get(layout.label[t, o], False))
              for t in range(n)]
    return TransitionSystem(layout.inputs, layout.outputs, labels, trans)


def system_assignment(sys: TransitionSystem, layout: VarLayout) -> dict[int, bool]:
    """The system-block assignment that encodes ``sys``."""
    out = {}
    for (t, i, t2), var in layout.tau.items():
        out[var] = sys.trans[t][i] == t2
    for (t, o), var in layout.label.items():
        out[var] = o in sys.labels[t]
    return out
