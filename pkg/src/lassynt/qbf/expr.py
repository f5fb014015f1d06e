"""Hash-consed Boolean circuits with role-tagged variables, and Tseitin conversion."""
from __future__ import annotations

from dataclasses import dataclass, field

# roles, in allocation order of the synthesis encoding
SYSTEM = "system"
LABEL = "label"
INPUT = "input"
INPUT_LOOP = "input-loop"
RUN_OUTPUT = "run-output"
RUN_STATE = "run-state"
RUN_LOOP = "run-loop"
COUNTING = "counting"
DEFINITIONAL = "definitional"


@dataclass
class VarPool:
    """Allocates DIMACS variable ids (from 1) and remembers role and name of each."""
    roles: dict[int, str] = field(default_factory=dict)
    names: dict[int, str] = field(default_factory=dict)

    @property
    def top(self) -> int:
        return len(self.roles)

    def new(self, role: str, name: str | None = None) -> int:
        v = len(self.roles) + 1
        self.roles[v] = role
        if name is not None:
            self.names[v] = name
        return v

    def by_role(self, *roles: str) -> list[int]:
        return [v for v, r in self.roles.items() if r in roles]


class Expr:
    """Circuit node; build through a ``Builder`` so structurally equal nodes are shared."""
    __slots__ = ("op", "args", "var", "uid")

    def __init__(self, op: str, args: tuple = (), var: int = 0, uid: int = 0):
        self.op = op
        self.args = args
        self.var = var
        self.uid = uid

    def __repr__(self):
        if self.op == "var":
            return f"v{self.var}"
        if self.op in ("true", "false"):
            return self.op
        return f"{self.op}({', '.join(map(repr, self.args))})"


class Builder:
    """Smart constructors with constant folding and structural hashing."""

    def __init__(self):
        self._table: dict[tuple, Expr] = {}
        self.true = self._make("true", ())
        self.false = self._make("false", ())

    def _make(self, op: str, args: tuple, var: int = 0) -> Expr:
        key = (op, var, tuple(a.uid for a in args))
        e = self._table.get(key)
        if e is None:
            e = Expr(op, args, var, len(self._table))
            self._table[key] = e
        return e

    def __len__(self) -> int:
        return len(self._table)

    def var(self, v: int) -> Expr:
        if v <= 0:
            raise ValueError("variables are positive integers")
        return self._make("var", (), v)

    def const(self, b: bool) -> Expr:
        return self.true if b else self.false

    def not_(self, a: Expr) -> Expr:
        if a is self.true:
            return self.false
        if a is self.false:
            return self.true
        if a.op == "not":
            return a.args[0]
        return self._make("not", (a,))

    def _nary(self, op: str, xs, unit: Expr, zero: Expr) -> Expr:
        seen: dict[int, Expr] = {}
        for x in xs:
            if x is zero:
                return zero
            if x is unit:
                continue
            if x.op == op:
                for y in x.args:
                    seen.setdefault(y.uid, y)
            else:
                seen.setdefault(x.uid, x)
        args = sorted(seen.values(), key=lambda e: e.uid)
        uids = set(seen)
        for a in args:
            if a.op == "not" and a.args[0].uid in uids:
                return zero
        if not args:
            return unit
        if len(args) == 1:
            return args[0]
        return self._make(op, tuple(args))

    def and_(self, *xs: Expr) -> Expr:
        if len(xs) == 1 and not isinstance(xs[0], Expr):
            xs = tuple(xs[0])
        return self._nary("and", xs, self.true, self.false)

    def or_(self, *xs: Expr) -> Expr:
        if len(xs) == 1 and not isinstance(xs[0], Expr):
            xs = tuple(xs[0])
        return self._nary("or", xs, self.false, self.true)

    def implies(self, a: Expr, b: Expr) -> Expr:
        return self.or_(self.not_(a), b)

    def iff(self, a: Expr, b: Expr) -> Expr:
        if a is b:
            return self.true
        if a.op in ("true", "false"):
            return b if a is self.true else self.not_(b)
        if b.op in ("true", "false"):
            return a if b is self.true else self.not_(a)
        if a.uid > b.uid:
            a, b = b, a
        return self._make("iff", (a, b))

    def exactly_one(self, xs) -> Expr:
        xs = list(xs)
        pairs = [self.or_(self.not_(xs[i]), self.not_(xs[j]))
                 for i in range(len(xs)) for j in range(i + 1, len(xs))]
        return self.and_([self.or_(xs)] + pairs)


def evaluate(e: Expr, assignment) -> bool:
    """Evaluate under ``assignment`` (mapping or callable from var id to bool)."""
    get = assignment if callable(assignment) else assignment.__getitem__
    memo: dict[int, bool] = {}

    def go(x: Expr) -> bool:
        r = memo.get(x.uid)
        if r is not None:
            return r
        op = x.op
        if op == "var":
            r = bool(get(x.var))
        elif op == "true":
            r = True
        elif op == "false":
            r = False
        elif op == "not":
            r = not go(x.args[0])
        elif op == "and":
            r = all(go(a) for a in x.args)
        elif op == "or":
            r = any(go(a) for a in x.args)
        elif op == "iff":
            r = go(x.args[0]) == go(x.args[1])
        else:  # pragma: no cover
            raise ValueError(op)
        memo[x.uid] = r
        return r

    return go(e)


def variables(e: Expr) -> set[int]:
    out: set[int] = set()
    seen: set[int] = set()
    stack = [e]
    while stack:
        x = stack.pop()
        if x.uid in seen:
            continue
        seen.add(x.uid)
        if x.op == "var":
            out.add(x.var)
        stack.extend(x.args)
    return out


@dataclass
class Cnf:
    clauses: list[list[int]]
    root: int          # literal asserting the expression; 0 when the expression is constant
    definitions: dict[int, int]  # expression uid -> literal standing for it

    @property
    def definition_clauses(self) -> list[list[int]]:
        """Clauses without the root unit (the biconditional gate definitions)."""
        return self.clauses[:-1] if self.root else self.clauses


def tseitin(e: Expr, pool: VarPool, assert_root: bool = True) -> Cnf:
    """Equisatisfiable CNF; every gate gets a definitional variable and full biconditional clauses.

    The last clause is the unit for the root literal when ``assert_root``. A
    constant expression yields either no clauses (true) or the empty clause.
    """
    clauses: list[list[int]] = []
    lit: dict[int, int] = {}

    def go(root: Expr) -> int:
        # iterative post-order to stay clear of the recursion limit
        stack = [(root, False)]
        while stack:
            x, done = stack.pop()
            if x.uid in lit:
                continue
            if x.op == "var":
                lit[x.uid] = x.var
                continue
            if x.op == "not":
                inner = x.args[0]
                if inner.uid in lit:
                    lit[x.uid] = -lit[inner.uid]
                else:
                    stack.append((x, True))
                    stack.append((inner, False))
                continue
            if not done:
                stack.append((x, True))
                stack.extend((a, False) for a in x.args if a.uid not in lit)
                continue
            if x.op in ("true", "false"):
                raise ValueError("constants must be folded before Tseitin conversion")
            d = pool.new(DEFINITIONAL)
            ls = [lit[a.uid] for a in x.args]
            if x.op == "and":
                for a in ls:
                    clauses.append([-d, a])
                clauses.append([d] + [-a for a in ls])
            elif x.op == "or":
                for a in ls:
                    clauses.append([d, -a])
                clauses.append([-d] + ls)
            elif x.op == "iff":
                a, b = ls
                clauses.extend([[-d, -a, b], [-d, a, -b], [d, a, b], [d, -a, -b]])
            else:  # pragma: no cover
                raise ValueError(x.op)
            lit[x.uid] = d
        return lit[root.uid]

    if e.op == "true":
        return Cnf([], 0, {})
    if e.op == "false":
        return Cnf([[]], 0, {})
    root = go(e)
    if assert_root:
        clauses.append([root])
    return Cnf(clauses, root if assert_root else 0, lit)
