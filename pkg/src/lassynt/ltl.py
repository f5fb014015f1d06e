"""LTL syntax, parsing, negation normal form and evaluation on lasso words."""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

ATOM_RE = re.compile(r"[a-zA-Z_][a-zA-Z0-9_]*\Z")

# node kinds
ATOM = "atom"
NATOM = "natom"
TRUE = "true"
FALSE = "false"
AND = "and"
OR = "or"
NOT = "not"
NEXT = "next"
UNTIL = "until"
RELEASE = "release"
EVENTUALLY = "eventually"
GLOBALLY = "globally"

UNARY = (NOT, NEXT, EVENTUALLY, GLOBALLY)
BINARY = (AND, OR, UNTIL, RELEASE)
NNF_KINDS = frozenset({ATOM, NATOM, TRUE, FALSE, AND, OR, NEXT, UNTIL, RELEASE})


class LtlSyntaxError(ValueError):
    def __init__(self, message: str, pos: int | None = None, line: int | None = None):
        self.pos = pos
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if pos is not None:
            where.append(f"column {pos + 1}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class UndeclaredAtomError(LtlSyntaxError):
    pass


@dataclass(frozen=True)
class Ltl:
    kind: str
    args: tuple["Ltl", ...] = ()
    name: str | None = None

    def __post_init__(self):
        if self.kind in (ATOM, NATOM) and not ATOM_RE.match(self.name or ""):
            raise ValueError(f"bad atom name {self.name!r}")

    def __str__(self) -> str:
        return to_string(self)

    def atoms(self) -> set[str]:
        out: set[str] = set()
        stack = [self]
        while stack:
            f = stack.pop()
            if f.name is not None:
                out.add(f.name)
            stack.extend(f.args)
        return out

    def size(self) -> int:
        return 1 + sum(a.size() for a in self.args)

    def subformulas(self) -> list["Ltl"]:
        """Distinct subformulas, children before parents."""
        seen: dict[Ltl, None] = {}

        def visit(f: Ltl):
            if f in seen:
                return
            for a in f.args:
                visit(a)
            seen[f] = None

        visit(self)
        return list(seen)


# constructors

TT = Ltl(TRUE)
FF = Ltl(FALSE)


def atom(name: str) -> Ltl:
    return Ltl(ATOM, name=name)


def natom(name: str) -> Ltl:
    return Ltl(NATOM, name=name)


def neg(f: Ltl) -> Ltl:
    """Syntactic negation; a negated atom becomes a literal."""
    if f.kind == ATOM:
        return natom(f.name)
    return Ltl(NOT, (f,))


def conj(*fs: Ltl) -> Ltl:
    out = fs[0]
    for f in fs[1:]:
        out = Ltl(AND, (out, f))
    return out


def disj(*fs: Ltl) -> Ltl:
    out = fs[0]
    for f in fs[1:]:
        out = Ltl(OR, (out, f))
    return out


def implies(a: Ltl, b: Ltl) -> Ltl:
    return Ltl(OR, (neg(a), b))


def X(f: Ltl) -> Ltl:
    return Ltl(NEXT, (f,))


def F(f: Ltl) -> Ltl:
    return Ltl(EVENTUALLY, (f,))


def G(f: Ltl) -> Ltl:
    return Ltl(GLOBALLY, (f,))


def U(a: Ltl, b: Ltl) -> Ltl:
    return Ltl(UNTIL, (a, b))


def R(a: Ltl, b: Ltl) -> Ltl:
    return Ltl(RELEASE, (a, b))


# parsing

_TOKEN_RE = re.compile(r"\s*(?:(->)|([!&|()])|([a-zA-Z_][a-zA-Z0-9_]*))")
_UNARY_OPS = {"!": NOT, "X": NEXT, "F": EVENTUALLY, "G": GLOBALLY}
_KEYWORDS = {"X", "F", "G", "U", "R", "true", "false"}


def _tokenize(text: str, declared: set[str] | None) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise LtlSyntaxError(f"unexpected character {text[pos:].lstrip()[0]!r}",
                                 len(text) - len(text[pos:].lstrip()))
        start = m.start(m.lastindex)
        tok = m.group(m.lastindex)
        # "GF w" style operator runs, unless the run is itself a declared atom
        if (m.lastindex == 3 and tok not in _KEYWORDS and set(tok) <= set("XFG")
                and (declared is None or tok not in declared)):
            tokens.extend((c, start + i) for i, c in enumerate(tok))
        else:
            tokens.append((tok, start))
        pos = m.end()
    return tokens


class _Parser:
    def __init__(self, text: str, declared: set[str] | None):
        self.text = text
        self.declared = declared
        self.tokens = _tokenize(text, declared)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def pos(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def take(self, expected: str | None = None) -> str:
        tok = self.peek()
        if tok is None:
            raise LtlSyntaxError("unexpected end of formula", self.pos())
        if expected is not None and tok != expected:
            raise LtlSyntaxError(f"expected {expected!r}, found {tok!r}", self.pos())
        self.i += 1
        return tok

    def parse(self) -> Ltl:
        if not self.tokens:
            raise LtlSyntaxError("empty formula", 0)
        f = self.implication()
        if self.peek() is not None:
            raise LtlSyntaxError(f"unexpected token {self.peek()!r}", self.pos())
        return f

    def implication(self) -> Ltl:
        lhs = self.disjunction()
        if self.peek() == "->":
            self.take()
            return implies(lhs, self.implication())
        return lhs

    def disjunction(self) -> Ltl:
        f = self.conjunction()
        while self.peek() == "|":
            self.take()
            f = Ltl(OR, (f, self.conjunction()))
        return f

    def conjunction(self) -> Ltl:
        f = self.binary_temporal()
        while self.peek() == "&":
            self.take()
            f = Ltl(AND, (f, self.binary_temporal()))
        return f

    def binary_temporal(self) -> Ltl:
        lhs = self.unary()
        tok = self.peek()
        if tok in ("U", "R"):
            self.take()
            return Ltl(UNTIL if tok == "U" else RELEASE, (lhs, self.binary_temporal()))
        return lhs

    def unary(self) -> Ltl:
        tok = self.peek()
        if tok in _UNARY_OPS:
            self.take()
            sub = self.unary()
            if tok == "!":
                return neg(sub)
            return Ltl(_UNARY_OPS[tok], (sub,))
        return self.primary()

    def primary(self) -> Ltl:
        pos = self.pos()
        tok = self.take()
        if tok == "(":
            f = self.implication()
            self.take(")")
            return f
        if tok == "true":
            return TT
        if tok == "false":
            return FF
        if tok in _KEYWORDS or not ATOM_RE.match(tok):
            raise LtlSyntaxError(f"unexpected token {tok!r}", pos)
        if self.declared is not None and tok not in self.declared:
            raise UndeclaredAtomError(f"undeclared atom {tok!r}", pos)
        return atom(tok)


def parse_ltl(text: str, declared_atoms: Iterable[str] | None = None) -> Ltl:
    """Parse an LTL formula.

    Precedence from tightest: unary ``! X F G``, then ``U``/``R`` (right
    associative), ``&``, ``|`` and finally ``->`` (right associative, desugared
    to ``!a | b``). Passing ``declared_atoms`` rejects unknown names.
    """
    declared = set(declared_atoms) if declared_atoms is not None else None
    if not text or not text.strip():
        raise LtlSyntaxError("empty formula", 0)
    return _Parser(text, declared).parse()


_PREC = {OR: 1, AND: 2, UNTIL: 3, RELEASE: 3}


def to_string(f: Ltl) -> str:
    def go(f: Ltl, ctx: int) -> str:
        k = f.kind
        if k == ATOM:
            return f.name
        if k == NATOM:
            return "!" + f.name
        if k in (TRUE, FALSE):
            return k
        if k in UNARY:
            op = {NOT: "!", NEXT: "X ", EVENTUALLY: "F ", GLOBALLY: "G "}[k]
            return op + go(f.args[0], 4)
        p = _PREC[k]
        sym = {AND: " & ", OR: " | ", UNTIL: " U ", RELEASE: " R "}[k]
        if k in (UNTIL, RELEASE):
            # right associative
            s = go(f.args[0], p + 1) + sym + go(f.args[1], p)
        else:
            s = go(f.args[0], p) + sym + go(f.args[1], p + 1)
        return f"({s})" if p < ctx else s

    return go(f, 0)


# negation normal form

def to_nnf(f: Ltl) -> Ltl:
    """Push negations to the atoms and rewrite F/G into U/R."""
    return _nnf(f, False)


def _nnf(f: Ltl, negated: bool) -> Ltl:
    k = f.kind
    if k == ATOM:
        return natom(f.name) if negated else f
    if k == NATOM:
        return atom(f.name) if negated else f
    if k == TRUE:
        return FF if negated else TT
    if k == FALSE:
        return TT if negated else FF
    if k == NOT:
        return _nnf(f.args[0], not negated)
    if k == NEXT:
        return X(_nnf(f.args[0], negated))
    if k == EVENTUALLY:
        # F a = true U a ; !F a = false R !a
        sub = _nnf(f.args[0], negated)
        return R(FF, sub) if negated else U(TT, sub)
    if k == GLOBALLY:
        sub = _nnf(f.args[0], negated)
        return U(TT, sub) if negated else R(FF, sub)
    a, b = (_nnf(x, negated) for x in f.args)
    dual = {AND: OR, OR: AND, UNTIL: RELEASE, RELEASE: UNTIL}
    return Ltl(dual[k] if negated else k, (a, b))


def is_nnf(f: Ltl) -> bool:
    return all(g.kind in NNF_KINDS for g in f.subformulas())


# semantics on ultimately periodic words

def eval_on_lasso(f: Ltl, u, v: Sequence[frozenset] | None = None,
                  atoms: Iterable[str] | None = None) -> bool:
    """Decide ``u v^omega |= f``.

    Letters are sets of the atoms that hold. Accepts either a ``Lasso`` (any
    object with ``u``/``v``) or the two words directly. With ``atoms`` given,
    a formula mentioning anything else is rejected.
    """
    if v is None:
        u, v = u.u, u.v
    if atoms is not None:
        unknown = f.atoms() - set(atoms)
        if unknown:
            raise ValueError(f"atoms {sorted(unknown)} not in the trace alphabet")
    return eval_positions(f, list(u) + list(v), len(u))[0]


def eval_positions(f: Ltl, base: Sequence[frozenset], loop_start: int) -> list[bool]:
    """Truth value of ``f`` at every base position of the lasso ``base``.

    The successor of the last position is ``loop_start``.
    """
    n = len(base)
    if n == 0 or not 0 <= loop_start < n:
        raise ValueError("lasso needs a nonempty period")
    succ = list(range(1, n)) + [loop_start]
    vals: dict[Ltl, list[bool]] = {}
    for g in f.subformulas():
        k = g.kind
        if k == ATOM or k == NATOM:
            vals[g] = [(g.name in a) == (k == ATOM) for a in base]
        elif k == TRUE:
            vals[g] = [True] * n
        elif k == FALSE:
            vals[g] = [False] * n
        elif k == NOT:
            vals[g] = [not x for x in vals[g.args[0]]]
        elif k == AND:
            a, b = vals[g.args[0]], vals[g.args[1]]
            vals[g] = [x and y for x, y in zip(a, b)]
        elif k == OR:
            a, b = vals[g.args[0]], vals[g.args[1]]
            vals[g] = [x or y for x, y in zip(a, b)]
        elif k == NEXT:
            a = vals[g.args[0]]
            vals[g] = [a[succ[p]] for p in range(n)]
        elif k in (UNTIL, EVENTUALLY):
            if k == UNTIL:
                a, b = vals[g.args[0]], vals[g.args[1]]
            else:
                a, b = [True] * n, vals[g.args[0]]
            vals[g] = _fixpoint(a, b, succ, until=True)
        elif k in (RELEASE, GLOBALLY):
            if k == RELEASE:
                a, b = vals[g.args[0]], vals[g.args[1]]
            else:
                a, b = [False] * n, vals[g.args[0]]
            vals[g] = _fixpoint(a, b, succ, until=False)
        else:  # pragma: no cover
            raise ValueError(f"unknown node kind {k}")
    return vals[f]


def _fixpoint(a: list[bool], b: list[bool], succ: list[int], until: bool) -> list[bool]:
    # a U b = b | (a & X(a U b)), least; a R b = b & (a | X(a R b)), greatest.
    # Two backward sweeps over the positions reach the fixpoint on a lasso.
    n = len(a)
    cur = [not until] * n
    for _ in range(2):
        for p in range(n - 1, -1, -1):
            nxt = cur[succ[p]]
            cur[p] = (b[p] or (a[p] and nxt)) if until else (b[p] and (a[p] or nxt))
    return cur


# spec files

@dataclass
class SpecFile:
    inputs: list[str]
    outputs: list[str]
    formula: Ltl
    name: str = ""
    source: str = field(default="", repr=False)

    def __post_init__(self):
        clash = set(self.inputs) & set(self.outputs)
        if clash:
            raise ValueError(f"propositions both input and output: {sorted(clash)}")
        missing = self.formula.atoms() - set(self.inputs) - set(self.outputs)
        if missing:
            raise UndeclaredAtomError(f"undeclared atoms {sorted(missing)}")

    @property
    def atoms(self) -> list[str]:
        return self.inputs + self.outputs

    def to_text(self) -> str:
        lines = [f"[inputs] {' '.join(self.inputs)}".rstrip(),
                 f"[outputs] {' '.join(self.outputs)}".rstrip(),
                 f"[ltl] {to_string(self.formula)}"]
        return "\n".join(lines) + "\n"


def parse_spec(text: str, name: str = "") -> SpecFile:
    sections: dict[str, tuple[int, str]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        m = re.match(r"\[(inputs|outputs|ltl)\]\s*(.*)\Z", line)
        if not m:
            raise LtlSyntaxError(f"expected a [inputs], [outputs] or [ltl] line, got {line!r}",
                                 line=lineno)
        key, rest = m.groups()
        if key in sections:
            raise LtlSyntaxError(f"duplicate [{key}] section", line=lineno)
        sections[key] = (lineno, rest)
    for key in ("inputs", "outputs", "ltl"):
        if key not in sections:
            raise LtlSyntaxError(f"missing [{key}] section")
    inputs = sections["inputs"][1].split()
    outputs = sections["outputs"][1].split()
    for lineno, names in (sections["inputs"][0], inputs), (sections["outputs"][0], outputs):
        for a in names:
            if not ATOM_RE.match(a) or a in _KEYWORDS:
                raise LtlSyntaxError(f"bad proposition name {a!r}", line=lineno)
        if len(set(names)) != len(names):
            raise LtlSyntaxError("duplicate proposition", line=lineno)
    if set(inputs) & set(outputs):
        raise LtlSyntaxError("a proposition is declared as both input and output",
                             line=sections["outputs"][0])
    lineno, ftext = sections["ltl"]
    try:
        formula = parse_ltl(ftext, set(inputs) | set(outputs))
    except LtlSyntaxError as e:
        e.line = lineno
        e.args = (f"{e.args[0]} (line {lineno})",)
        raise
    return SpecFile(inputs, outputs, formula, name=name, source=text)


def load_spec(path: str | Path) -> SpecFile:
    path = Path(path)
    return parse_spec(path.read_text(encoding="utf-8"), name=path.stem)
