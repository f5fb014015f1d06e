import pytest
from hypothesis import given, settings

from conftest import formulas, lassos
from lassynt.lasso import Lasso
from lassynt.ltl import (FF, TT, LtlSyntaxError, SpecFile, UndeclaredAtomError, atom, eval_on_lasso,
                         is_nnf, natom, parse_ltl, parse_spec, to_nnf, to_string, F, G, X, U, neg,
                         conj, implies)


def naive_holds(f, lasso: Lasso, i: int = 0) -> bool:
    """Direct recursive semantics; the path from any position revisits itself within len(lasso) steps."""
    n = len(lasso)
    base = lasso.base
    succ = lambda p: p + 1 if p + 1 < n else lasso.loop_start

    def path(p):
        out = []
        for _ in range(n + 1):
            out.append(p)
            p = succ(p)
        return out

    k = f.kind
    if k == "atom":
        return f.name in base[i]
    if k == "natom":
        return f.name not in base[i]
    if k == "true":
        return True
    if k == "false":
        return False
    if k == "not":
        return not naive_holds(f.args[0], lasso, i)
    if k == "and":
        return naive_holds(f.args[0], lasso, i) and naive_holds(f.args[1], lasso, i)
    if k == "or":
        return naive_holds(f.args[0], lasso, i) or naive_holds(f.args[1], lasso, i)
    if k == "next":
        return naive_holds(f.args[0], lasso, succ(i))
    if k == "eventually":
        return any(naive_holds(f.args[0], lasso, p) for p in path(i))
    if k == "globally":
        return all(naive_holds(f.args[0], lasso, p) for p in path(i))
    if k == "until":
        for p in path(i):
            if naive_holds(f.args[1], lasso, p):
                return True
            if not naive_holds(f.args[0], lasso, p):
                return False
        return False
    if k == "release":
        for p in path(i):
            if not naive_holds(f.args[1], lasso, p):
                return False
            if naive_holds(f.args[0], lasso, p):
                return True
        return True
    raise AssertionError(k)


r, g = frozenset({"r"}), frozenset({"g"})
e = frozenset()


def test_examples():
    assert eval_on_lasso(G(F(atom("g"))), (), (g, e)) is True
    assert eval_on_lasso(F(G(atom("g"))), (), (g, e)) is False
    assert eval_on_lasso(X(atom("r")), (e,), (r,)) is True
    assert eval_on_lasso(U(atom("r"), atom("g")), (r, r), (g,)) is True
    assert eval_on_lasso(U(atom("r"), atom("g")), (r,), (e,)) is False
    assert eval_on_lasso(TT, (), (e,)) and not eval_on_lasso(FF, (), (e,))


def test_eval_accepts_lasso_object_and_checks_atoms():
    assert eval_on_lasso(atom("r"), Lasso((r,), (e,)))
    with pytest.raises(ValueError):
        eval_on_lasso(atom("q"), Lasso((), (e,)), atoms=["r", "g"])


@given(formulas(), lassos())
@settings(max_examples=300)
def test_eval_matches_naive_semantics(f, lasso):
    assert eval_on_lasso(f, lasso) == naive_holds(f, lasso)


@given(formulas(), lassos())
@settings(max_examples=200)
def test_nnf_preserves_semantics(f, lasso):
    nf = to_nnf(f)
    assert is_nnf(nf)
    assert eval_on_lasso(nf, lasso) == eval_on_lasso(f, lasso)


@given(formulas(), lassos())
@settings(max_examples=200)
def test_negation_flips(f, lasso):
    assert eval_on_lasso(to_nnf(neg(f)), lasso) != eval_on_lasso(f, lasso)


@given(formulas())
def test_pretty_print_round_trip(f):
    assert parse_ltl(to_string(f)) == f


def test_parse_precedence():
    f = parse_ltl("a -> b -> c")
    assert f == implies(atom("a"), implies(atom("b"), atom("c")))
    assert parse_ltl("a & b | c") == parse_ltl("(a & b) | c")
    assert parse_ltl("!a") == natom("a")
    assert parse_ltl("GF a") == G(F(atom("a")))
    assert parse_ltl("a U b U c") == U(atom("a"), U(atom("b"), atom("c")))
    assert parse_ltl("X a U b") == U(X(atom("a")), atom("b"))


def test_declared_atom_named_like_operators():
    f = parse_ltl("GF", declared_atoms={"GF"})
    assert f == atom("GF")


@pytest.mark.parametrize("text", ["a &", "(a", "a b", "->", "a U", ""])
def test_syntax_errors(text):
    with pytest.raises(LtlSyntaxError):
        parse_ltl(text)


def test_undeclared_atom():
    with pytest.raises(UndeclaredAtomError):
        parse_ltl("a & q", declared_atoms={"a"})


def test_spec_file_parsing():
    s = parse_spec("# c\n[inputs] w\n[outputs] g1 g2\n[ltl] G F w -> G F g1\n", "rr")
    assert s.inputs == ["w"] and s.outputs == ["g1", "g2"]
    assert parse_spec(s.to_text()).formula == s.formula


def test_spec_file_errors_carry_lines():
    with pytest.raises(LtlSyntaxError):
        parse_spec("[inputs] r\n[outputs] g\n")
    with pytest.raises(LtlSyntaxError) as ei:
        parse_spec("[inputs] r\n[outputs] g\n[ltl] G(r -> F q)\n")
    assert ei.value.line == 3
    with pytest.raises(LtlSyntaxError):
        parse_spec("[inputs] r\n[outputs] r\n[ltl] r\n")
    with pytest.raises(UndeclaredAtomError):
        SpecFile(["r"], ["g"], atom("x"))


def test_implication_desugars_through_literal():
    assert implies(atom("a"), atom("b")) == parse_ltl("a -> b")
    assert conj(atom("a"), atom("b")).size() == 3
