from dataclasses import replace

import pytest

from stategrammar.core import (
    CONTEXT_FREE,
    LINEAR,
    RIGHT_LINEAR,
    CounterSpec,
    Production,
    StateGrammar,
    classify,
    validate,
)
from stategrammar.corpus import corpus, example1

from conftest import plain_cfg


def test_example1_is_valid(grammars):
    assert validate(grammars["example1_k2"]) == []


def test_every_corpus_grammar_is_valid(grammars):
    for name, g in grammars.items():
        assert validate(g) == [], name


def test_undeclared_axiom_reported():
    g = replace(example1(2), axiom="Missing")
    report = validate(g)
    assert len(report) == 1
    assert "axiom undeclared" in report[0]


def test_negative_update_in_monotonic_grammar():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a"}),
        productions=(Production("q", ("*",), "S", "q", (-1,), ("a",)),),
        axiom="S",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
        counters=CounterSpec.monotonic(1),
        acceptance="counters_equal",
    )
    assert any("negative update in monotonic grammar" in v for v in validate(g))


def test_zero_guard_decrement_rejected():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a"}),
        productions=(Production("q", ("z",), "S", "q", (-1,), ("a",)),),
        axiom="S",
        states=frozenset({"q", "f"}),
        initial_state="q",
        final_states=frozenset({"f"}),
        counters=CounterSpec.reversal(1),
    )
    assert any("decrement under zero guard" in v for v in validate(g))


def test_alphabet_disjointness_checked():
    g = replace(example1(2), terminals=frozenset({"a1", "b1", "a2", "b2", "S"}))
    assert any("not disjoint" in v for v in validate(g))


def test_classify_example1(grammars):
    c = classify(grammars["example1_k2"])
    assert c.shape == CONTEXT_FREE and c.lambda_free


def test_classify_single_lambda_rule():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset(),
        productions=(Production("q", (), "S", "q", (), ()),),
        axiom="S",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
    )
    c = classify(g)
    assert c.shape == RIGHT_LINEAR and not c.lambda_free


def test_classify_linear_vs_right_linear():
    lin = plain_cfg({"S": ["a S b", "a b"]})
    assert classify(lin).shape == LINEAR
    rl = plain_cfg({"S": ["a S", "a"]})
    assert classify(rl).shape == RIGHT_LINEAR


def test_classify_prop18_reduction_grammar():
    from stategrammar.reduce import SubsetSumInstance, subset_sum_to_rlgsc

    g = subset_sum_to_rlgsc(SubsetSumInstance((3, 5, 2), 5))
    c = classify(g)
    assert c.shape == RIGHT_LINEAR and c.lambda_free


def test_classify_monotone_on_corpus(grammars):
    # right_linear implies the linear predicate; classify never contradicts it
    order = {RIGHT_LINEAR: 0, LINEAR: 1, CONTEXT_FREE: 2}
    for name, g in grammars.items():
        c1 = classify(g)
        c2 = classify(g)
        assert c1 == c2, name  # idempotent
        assert c1.shape in order


def test_empty_final_set_is_allowed():
    g = replace(example1(2), final_states=frozenset())
    assert validate(g) == []
