"""QDIMACS and DIMACS text formats."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class QbfProblem:
    """Prenex CNF. ``prefix`` is a list of ``("e"|"a", [vars])`` blocks, outermost first.

    ``core`` indexes the clauses that are not gate definitions (usually the
    root unit); ``None`` means all of them.
    """
    num_vars: int
    prefix: list[tuple[str, list[int]]]
    clauses: list[list[int]]
    core: list[int] | None = None
    roles: dict[int, str] = field(default_factory=dict)
    names: dict[int, str] = field(default_factory=dict)

    def __post_init__(self):
        seen: set[int] = set()
        for q, vs in self.prefix:
            if q not in ("e", "a"):
                raise ValueError(f"bad quantifier {q!r}")
            for v in vs:
                if v in seen:
                    raise ValueError(f"variable {v} quantified twice")
                if not 1 <= v <= self.num_vars:
                    raise ValueError(f"variable {v} out of range")
                seen.add(v)
        for c in self.clauses:
            for lit in c:
                if not 1 <= abs(lit) <= self.num_vars:
                    raise ValueError(f"literal {lit} references an undeclared variable")

    def block_vars(self, q: str) -> list[int]:
        return [v for qq, vs in self.prefix if qq == q for v in vs]

    @property
    def core_clauses(self) -> list[list[int]]:
        if self.core is None:
            return self.clauses
        return [self.clauses[i] for i in self.core]

    @property
    def definition_clauses(self) -> list[list[int]]:
        if self.core is None:
            return []
        core = set(self.core)
        return [c for i, c in enumerate(self.clauses) if i not in core]


def _legend(roles: dict[int, str], names: dict[int, str]) -> list[str]:
    lines = []
    by_role: dict[str, list[int]] = {}
    for v, r in roles.items():
        by_role.setdefault(r, []).append(v)
    for r, vs in by_role.items():
        lines.append(f"c role {r} {_ranges(vs)}")
    for v in sorted(names):
        lines.append(f"c var {v} {names[v]}")
    return lines


def _ranges(vs: list[int]) -> str:
    if not vs:
        return ""
    vs = sorted(vs)
    out = []
    start = prev = vs[0]
    for v in vs[1:] + [None]:
        if v is not None and v == prev + 1:
            prev = v
            continue
        out.append(str(start) if start == prev else f"{start}-{prev}")
        if v is not None:
            start = prev = v
    return " ".join(out)


def emit_qdimacs(p: QbfProblem, comments: list[str] | None = None) -> str:
    lines = [f"c {c}" for c in comments or []]
    lines += _legend(p.roles, p.names)
    if p.core is not None:
        lines.append(f"c core {_ranges(p.core) if p.core else '-'}")
    lines.append(f"p cnf {p.num_vars} {len(p.clauses)}")
    for q, vs in p.prefix:
        if vs:
            lines.append(f"{q} {' '.join(map(str, vs))} 0")
    lines += [" ".join(map(str, c + [0])) for c in p.clauses]
    return "\n".join(lines) + "\n"


def parse_qdimacs(text: str) -> QbfProblem:
    """Read QDIMACS; role legends written by ``emit_qdimacs`` are restored."""
    num_vars = num_clauses = None
    prefix: list[tuple[str, list[int]]] = []
    clauses: list[list[int]] = []
    roles: dict[int, str] = {}
    names: dict[int, str] = {}
    core: list[int] | None = None
    cur: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            parts = line.split()
            if len(parts) >= 3 and parts[1] == "core":
                core = [] if parts[2] == "-" else [
                    i for rng in parts[2:] for i in _expand(rng)]
            elif len(parts) >= 3 and parts[1] == "role":
                for rng in parts[3:]:
                    for v in _expand(rng):
                        roles[v] = parts[2]
            elif len(parts) >= 4 and parts[1] == "var":
                names[int(parts[2])] = " ".join(parts[3:])
            continue
        if line.startswith("p"):
            _, fmt, nv, nc = line.split()
            if fmt != "cnf":
                raise ValueError(f"unsupported format {fmt!r}")
            num_vars, num_clauses = int(nv), int(nc)
            continue
        if num_vars is None:
            raise ValueError("clause or quantifier before the problem line")
        if line[0] in "ea" and not clauses and not cur:
            toks = line.split()
            if toks[-1] != "0":
                raise ValueError("quantifier line must end in 0")
            prefix.append((toks[0], [int(t) for t in toks[1:-1]]))
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if num_vars is None:
        raise ValueError("missing problem line")
    if cur:
        raise ValueError("last clause not terminated by 0")
    if len(clauses) != num_clauses:
        raise ValueError(f"header announces {num_clauses} clauses, found {len(clauses)}")
    return QbfProblem(num_vars, prefix, clauses, core, roles, names)


def _expand(rng: str) -> range:
    lo, _, hi = rng.partition("-")
    return range(int(lo), int(hi or lo) + 1)


def emit_dimacs(num_vars: int, clauses: list[list[int]], comments: list[str] | None = None) -> str:
    lines = [f"c {c}" for c in comments or []]
    lines.append(f"p cnf {num_vars} {len(clauses)}")
    lines += [" ".join(map(str, c + [0])) for c in clauses]
    return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> tuple[int, list[list[int]], list[str]]:
    """Returns ``(num_vars, clauses, comment lines without the leading 'c ')``."""
    num_vars = None
    clauses: list[list[int]] = []
    comments: list[str] = []
    cur: list[int] = []
    for raw in text.splitlines():
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            comments.append(line[1:].strip())
            continue
        if line.startswith("p"):
            num_vars = int(line.split()[2])
            continue
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(cur)
                cur = []
            else:
                cur.append(lit)
    if num_vars is None:
        raise ValueError("missing problem line")
    return num_vars, clauses, comments
