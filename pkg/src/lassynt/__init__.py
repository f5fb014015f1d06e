"""Bounded synthesis of lasso-precise reactive systems from LTL."""
from .ltl import Ltl, SpecFile, parse_ltl, parse_spec, load_spec, to_nnf, eval_on_lasso
from .lasso import Lasso, delta, unroll, word_eq, canonical_word, enumerate_k_words
from .automata import Dfa, ParityAutomaton, build_prefix_dfa, minimize_dfa, lift_parity
from .tsys import (TransitionSystem, Environment, models_lasso_precise, satisfaction_rate,
                   brute_force_synth, brute_force_max_rate, enumerate_systems)
from .encoding import encode_synthesis, encode_counting, decode_system, expected_var_count
from .synth import SynthConfig, SynthesisResult, ApproxResult, synthesize, approx_synthesize, check

__version__ = "0.1.0"
