import random

from hypothesis import strategies as st

from lassynt.lasso import Lasso, input_letters
from lassynt.ltl import (FF, TT, Ltl, R, U, X, atom, conj, disj, natom, F, G, neg, SpecFile)


def formulas(atoms=("r", "g"), max_leaves=6, nnf=False):
    """Hypothesis strategy for LTL formulas over ``atoms``."""
    leaves = st.sampled_from([atom(a) for a in atoms] + [natom(a) for a in atoms] + [TT, FF])

    def extend(children):
        binary = st.tuples(children, children)
        ops = [
            binary.map(lambda p: conj(*p)),
            binary.map(lambda p: disj(*p)),
            binary.map(lambda p: U(*p)),
            binary.map(lambda p: R(*p)),
            children.map(X),
        ]
        if not nnf:
            ops += [children.map(F), children.map(G), children.map(neg)]
        return st.one_of(ops)

    return st.recursive(leaves, extend, max_leaves=max_leaves)


def lassos(atoms=("r", "g"), max_len=5):
    letters = st.sampled_from(input_letters(list(atoms)))
    return st.tuples(st.lists(letters, max_size=max_len - 1),
                     st.lists(letters, min_size=1, max_size=max_len)).map(lambda p: Lasso(*p))


def random_formula(rng: random.Random, atoms, size: int) -> Ltl:
    """Seeded random formula with roughly ``size`` operators; plain function for sampled suites."""
    if size <= 0:
        r = rng.random()
        a = rng.choice(list(atoms))
        return atom(a) if r < 0.5 else natom(a)
    op = rng.choice(["and", "or", "X", "F", "G", "U", "R", "not", "G", "F"])
    if op in ("and", "or", "U", "R"):
        left = rng.randint(0, size - 1)
        a = random_formula(rng, atoms, left)
        b = random_formula(rng, atoms, size - 1 - left)
        return {"and": conj, "or": disj, "U": U, "R": R}[op](a, b)
    sub = random_formula(rng, atoms, size - 1)
    return {"X": X, "F": F, "G": G, "not": neg}[op](sub)


def random_spec(rng: random.Random, inputs=("r",), outputs=("g",), size=None) -> SpecFile:
    size = rng.randint(1, 5) if size is None else size
    f = random_formula(rng, list(inputs) + list(outputs), size)
    return SpecFile(list(inputs), list(outputs), f, name="random")
