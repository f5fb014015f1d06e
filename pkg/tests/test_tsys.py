import itertools
import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from conftest import formulas, lassos, random_formula
from lassynt.lasso import Lasso, enumerate_k_words, input_letters, lassos_of_length, word_eq
from lassynt.ltl import FF, TT, SpecFile, atom, load_spec, parse_ltl, G
from lassynt.tsys import (Environment, ResourceLimit, TransitionSystem, brute_force_max_rate,
                          brute_force_synth, check_under_env, compose, count_systems,
                          enumerate_environments, enumerate_systems, models_lasso_precise,
                          satisfaction_rate, trace_on_input)
from importlib import resources

R, E, G_ = frozenset({"r"}), frozenset(), frozenset({"g"})


def corpus(name):
    return load_spec(resources.files("lassynt").joinpath("corpus", f"{name}.spec"))


def always_g(n=1):
    return TransitionSystem(["r"], ["g"], [G_] * n, [[0, 0]] * n)


def toggle():
    return TransitionSystem(["r"], ["g"], [E, G_], [[1, 1], [0, 0]])


def test_trace_examples():
    tr = trace_on_input(always_g(), Lasso((), (R,)))
    assert word_eq(tr, Lasso((), (R | G_,)))
    tr = trace_on_input(toggle(), Lasso((), (E,)))
    assert len(tr.v) == 2


@given(lassos(atoms=("r",), max_len=4), st.integers(0, 63))
def test_trace_length_and_letters(inp, idx):
    sys = list(enumerate_systems(2, ["r"], ["g"]))[idx]
    tr = trace_on_input(sys, inp)
    assert len(tr) <= sys.n * len(inp)
    t = 0
    for i in range(3 * len(tr)):
        assert tr.letter(i) == sys.labels[t] | inp.letter(i)
        t = sys.step(t, inp.letter(i))


def test_enumeration_counts():
    assert count_systems(1, 1, 1) == 2 == len(list(enumerate_systems(1, ["r"], ["g"])))
    assert count_systems(2, 1, 1) == 64 == len(set(enumerate_systems(2, ["r"], ["g"])))
    assert count_systems(3, 1, 1) == 5832
    with pytest.raises(ResourceLimit):
        next(enumerate_systems(3, ["r"], ["g"], ceiling=100))


def test_json_round_trip():
    sys = toggle()
    data = sys.to_json()
    assert data == {"states": 2, "inputs": ["r"], "outputs": ["g"], "labels": [[], ["g"]],
                    "trans": [[1, 1], [0, 0]]}
    assert TransitionSystem.from_json(json.loads(sys.dumps())) == sys
    assert "digraph" in sys.to_dot()


def test_bad_system_rejected():
    with pytest.raises(ValueError):
        TransitionSystem(["r"], ["g"], [E], [[0]])
    with pytest.raises(ValueError):
        TransitionSystem(["r"], ["g"], [E], [[0, 3]])


def test_models_examples():
    assert models_lasso_precise(toggle(), TT, 3) is True
    res = models_lasso_precise(toggle(), G(atom("g")), 1)
    assert isinstance(res, Lasso)
    go = SpecFile([], ["o"], parse_ltl("G o"))
    sys = brute_force_synth(go, 1, 3)
    assert sys is not None and sys.labels == (frozenset({"o"}),)


def test_rates():
    assert satisfaction_rate(toggle(), TT, 2) == 1
    assert satisfaction_rate(toggle(), FF, 2) == 0
    # G(r -> g) on the toggle system: only words whose r's all fall on odd steps survive
    rate = satisfaction_rate(toggle(), parse_ltl("G(r -> g)"), 1)
    assert rate == Fraction(1, 2)


def test_simple_arbiter_never_fully_satisfied():
    spec = corpus("simple")
    for n, k in [(1, 1), (2, 1), (1, 2)]:
        _, rate = brute_force_max_rate(spec, n, k)
        assert rate < 1


def test_always_grant_satisfies_single_client_greedy_reading():
    # documents the shipped single-client formula: granting forever meets every clause
    spec = corpus("greedy1")
    for k in (1, 2, 3, 4):
        assert models_lasso_precise(always_g(), spec.formula, k) is True


@pytest.mark.parametrize("seed", range(5))
def test_rate_one_iff_lasso_precise(seed):
    rng = random.Random(seed)
    phi = random_formula(rng, ["r", "g"], 4)
    for sys in itertools.islice(enumerate_systems(2, ["r"], ["g"]), 0, 64, 7):
        for k in (1, 2, 3):
            assert (satisfaction_rate(sys, phi, k) == 1) == (models_lasso_precise(sys, phi, k) is True)


@pytest.mark.parametrize("seed", range(5))
def test_lemma_monotone_in_k(seed):
    rng = random.Random(100 + seed)
    phi = random_formula(rng, ["r", "g"], 4)
    for sys in itertools.islice(enumerate_systems(2, ["r"], ["g"]), 0, 64, 5):
        holds = [models_lasso_precise(sys, phi, k) is True for k in (1, 2, 3, 4)]
        for a, b in zip(holds, holds[1:]):
            assert b <= a  # precise at k+1 implies precise at k


def test_compose_matches_trace_for_output_blind_env():
    for inp in lassos_of_length(input_letters(["r"]), 3):
        env = Environment.from_lasso(inp, ["r"], ["g"])
        for sys in itertools.islice(enumerate_systems(2, ["r"], ["g"]), 0, 64, 3):
            assert word_eq(compose(sys, env), trace_on_input(sys, inp))


def test_compose_stepping():
    # environment emits r in state 0 and moves to state 1 when the system's next state grants
    env = Environment(["r"], ["g"], [R, E], [[0, 1], [1, 1]])
    # system grants one step after a request
    sys = TransitionSystem(["r"], ["g"], [E, G_], [[0, 1], [0, 1]])
    tr = compose(sys, env)
    # t1 = tau(0, {r}) = 1 grants, so s1 = rho(0, {g}) = 1 already emits nothing
    assert [tr.letter(i) for i in range(4)] == [R, G_, E, E]


def test_environment_enumeration_size():
    assert len(list(enumerate_environments(1, ["r"], ["g"]))) == 2
    assert len(list(enumerate_environments(2, ["r"], ["g"]))) == 64


@pytest.mark.parametrize("seed", range(4))
def test_proposition_both_directions_small(seed):
    rng = random.Random(seed)
    phi = random_formula(rng, ["r", "g"], rng.randint(1, 4))
    envs = [e for s in (1, 2) for e in enumerate_environments(s, ["r"], ["g"])]
    for sys in itertools.islice(enumerate_systems(2, ["r"], ["g"]), 0, 64, 9):
        for k in (1, 2):
            small = [e for e in envs if e.n <= k]
            all_env = all(check_under_env(sys, e, phi) for e in small)
            if all_env:
                assert models_lasso_precise(sys, phi, k) is True
            if models_lasso_precise(sys, phi, k * sys.n) is True:
                assert all_env
