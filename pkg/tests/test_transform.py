import pytest

from stategrammar import derive
from stategrammar.core import (
    COUNTERS_EQUAL,
    FINAL_STATE_ZERO,
    RIGHT_LINEAR,
    CounterSpec,
    Production,
    StateGrammar,
    classify,
    validate,
)
from stategrammar.derive import CONTROLLED, FREE, LEFTMOST, Budget, bounded_language, member
from stategrammar.transform import (
    BalancedFilter,
    ControlledCFG,
    FiniteAutomaton,
    RegularControl,
    cfgmc_to_ccfgs,
    cfgmc_to_cfgsc,
    cfgs_to_regctrl,
    controlled_language,
    degeneralize,
    determinize,
    expand_ccfgs_states,
    is_normal_form,
    lgs_to_lg,
    make_finals_halting,
    regctrl_to_cfgs,
    strip_counters,
    to_normal_form,
)

from conftest import plain_cfg


def lang(g, mode, n):
    return bounded_language(g, mode, n)


# ---------------------------------------------------------------------------
# state elimination (linear grammars)


def test_lgs_to_lg_one_state_is_isomorphic_copy():
    g = plain_cfg({"S": ["a S b", "a b"]})
    out = lgs_to_lg(g)
    assert validate(out) == []
    assert out.axiom == "S@s"
    assert lang(out, FREE, 8) == lang(g, FREE, 8)


def test_lgs_to_lg_two_state_grammar():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a", "b"}),
        productions=(
            Production("q0", (), "S", "q1", (), ("a", "S")),
            Production("q1", (), "S", "q0", (), ("b",)),
        ),
        axiom="S",
        states=frozenset({"q0", "q1"}),
        initial_state="q0",
        final_states=frozenset({"q0"}),
    )
    out = lgs_to_lg(g)
    assert len(out.states) == 1
    assert lang(out, FREE, 10) == lang(g, FREE, 10)


def test_lgs_to_lg_on_reduction_state_skeleton():
    from stategrammar.reduce import SubsetSumInstance, subset_sum_to_rlgsc

    g = subset_sum_to_rlgsc(SubsetSumInstance((2, 3), 3))
    skeleton = StateGrammar(
        nonterminals=g.nonterminals,
        terminals=g.terminals,
        productions=tuple(
            Production(p.from_state, (), p.lhs, p.to_state, (), p.rhs)
            for p in g.productions
        ),
        axiom=g.axiom,
        states=g.states,
        initial_state=g.initial_state,
        final_states=g.final_states,
    )
    out = lgs_to_lg(skeleton)
    assert classify(out).shape == RIGHT_LINEAR
    assert lang(out, FREE, 4) == lang(skeleton, FREE, 4) == {("a",)}


def test_lgs_to_lg_rejects_nonlinear(grammars):
    with pytest.raises(ValueError):
        lgs_to_lg(grammars["example1_k2"])


# ---------------------------------------------------------------------------
# regular control


def test_unconstrained_control_is_plain_language():
    base = plain_cfg({"S": ["a S b", "a b"]})
    labels = tuple(f"r{i}" for i in range(len(base.productions)))
    fa = FiniteAutomaton(
        frozenset({"u"}),
        tuple(("u", l, "u") for l in labels),
        "u",
        frozenset({"u"}),
    )
    c = ControlledCFG(base, RegularControl(labels, fa))
    out = regctrl_to_cfgs(c)
    assert lang(out, FREE, 8) == lang(base, FREE, 8)


def test_constrained_control_example():
    base = plain_cfg({"S": ["a S b", "a b"]})
    # labels: r0 = S -> aSb, r1 = S -> ab; control r0 r0 r1 | r1
    fa = FiniteAutomaton(
        frozenset({"0", "1", "2", "3"}),
        (("0", "r0", "1"), ("1", "r0", "2"), ("2", "r1", "3"), ("0", "r1", "3")),
        "0",
        frozenset({"3"}),
    )
    c = ControlledCFG(base, RegularControl(("r0", "r1"), fa))
    expected = {("a", "b"), ("a", "a", "a", "b", "b", "b")}
    assert controlled_language(c, 20, 16, 6) == expected
    out = regctrl_to_cfgs(c)
    assert lang(out, FREE, 6) == expected


def test_cfgs_to_regctrl_reference_interpretation(grammars):
    g = grammars["example1_k2"]
    c = cfgs_to_regctrl(g)
    ref = controlled_language(c, 60, 24, 10)
    assert ref == lang(g, FREE, 10)


def test_regctrl_round_trip_bounded_equality(grammars):
    g = grammars["example1_k2"]
    back = regctrl_to_cfgs(cfgs_to_regctrl(g))
    assert validate(back) == []
    assert lang(back, FREE, 12) == lang(g, FREE, 12)


def test_determinize_is_equivalent_on_label_words():
    fa = FiniteAutomaton(
        frozenset({"0", "1"}),
        (("0", "x", "0"), ("0", "x", "1"), ("1", "y", "0")),
        "0",
        frozenset({"1"}),
    )
    dfa = determinize(fa)
    assert dfa.deterministic()

    def accepts(a, word):
        cur = frozenset({a.initial})
        for s in word:
            cur = a.move(cur, s)
        return bool(cur & a.finals)

    import itertools

    for n in range(5):
        for word in itertools.product("xy", repeat=n):
            assert accepts(fa, word) == accepts(dfa, word)


# ---------------------------------------------------------------------------
# normal form


def test_normal_form_counter_free_identity(grammars):
    g = grammars["example1_k2"]
    assert to_normal_form(g) is g


def test_normal_form_structure_one_reversal(grammars):
    g = grammars["counter_block_synth"]
    nf = to_normal_form(g)
    assert validate(nf) == []
    assert is_normal_form(nf)
    assert len(nf.final_states) == 1
    assert nf.acceptance == FINAL_STATE_ZERO
    assert lang(nf, FREE, 6) == lang(g, FREE, 6)


def test_normal_form_three_reversals_split(grammars):
    g = grammars["three_reversal_blocks"]
    nf = to_normal_form(g)
    assert nf.counters.count == 2
    assert set(nf.counters.bounds) == {1}
    assert lang(nf, FREE, 10) == lang(g, FREE, 10)


def test_normal_form_preserves_example2(grammars):
    g = grammars["example2_wdollarw"]
    nf = to_normal_form(g)
    assert lang(nf, FREE, 5) == lang(g, FREE, 5)


def _monotone_value_paths(g, max_len):
    """Counter value sequences along witnesses for every short word."""
    for w in sorted(bounded_language(g, FREE, max_len)):
        d = member(g, FREE, w, Budget(120, 40, 12))
        assert d is not None
        yield w, [cfg.counters for cfg in d.configs]


def test_normal_form_phases_never_restart(grammars):
    for name in ("three_reversal_blocks", "example2_wdollarw"):
        nf = to_normal_form(grammars[name])
        for w, values in _monotone_value_paths(nf, 6):
            k = nf.counters.count
            for j in range(k):
                seq = [v[j] for v in values]
                decreased = False
                for prev, cur in zip(seq, seq[1:]):
                    if cur < prev:
                        decreased = True
                    if cur > prev:
                        assert not decreased, (name, w, j, seq)


# ---------------------------------------------------------------------------
# counter stripping


def test_strip_counters_identity_for_counter_free(grammars):
    g = grammars["example1_k2"]
    out, filt = strip_counters(g)
    assert out is g and filt.pairs == ()


def test_strip_counters_requires_normal_form(grammars):
    with pytest.raises(ValueError):
        strip_counters(grammars["example2_wdollarw"])


def test_strip_counters_example2(grammars):
    g = grammars["example2_wdollarw"]
    nf = to_normal_form(g)
    out, filt = strip_counters(nf)
    assert validate(out) == []
    raw = bounded_language(out, FREE, 5 + 10)
    got = frozenset(w for w in filt.apply(raw) if len(w) <= 5)
    assert got == lang(g, FREE, 5)


def test_strip_counters_unbalanced_filters_to_empty():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a"}),
        productions=(Production("q0", ("z",), "S", "f", (1,), ("a",)),),
        axiom="S",
        states=frozenset({"q0", "f"}),
        initial_state="q0",
        final_states=frozenset({"f"}),
        counters=CounterSpec.reversal(1),
        acceptance=FINAL_STATE_ZERO,
    )
    assert lang(g, FREE, 3) == frozenset()
    out, filt = strip_counters(g)
    raw = lang(out, FREE, 4)
    assert raw and filt.apply(raw) == frozenset()


def test_strip_counters_synthetic_pair(grammars):
    g = grammars["counter_pair_synth"]
    nf = to_normal_form(g)
    out, filt = strip_counters(nf)
    raw = bounded_language(out, FREE, 6 + 12)
    got = frozenset(w for w in filt.apply(raw) if len(w) <= 6)
    assert got == lang(g, FREE, 6)


# ---------------------------------------------------------------------------
# monotonic conversions


def test_cfgmc_to_cfgsc_dyck(grammars):
    g = grammars["dyck_equal"]
    out = cfgmc_to_cfgsc(g)
    assert validate(out) == []
    assert out.acceptance == FINAL_STATE_ZERO
    assert lang(out, FREE, 4) == lang(g, FREE, 4)


def test_cfgmc_to_cfgsc_zero_counters():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a"}),
        productions=(Production("q", (), "S", "q", (), ("a",)),),
        axiom="S",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
        counters=CounterSpec.monotonic(0),
        acceptance=COUNTERS_EQUAL,
    )
    out = cfgmc_to_cfgsc(g)
    assert validate(out) == []
    assert lang(out, FREE, 2) == lang(g, FREE, 2) == {("a",)}


def test_cfgmc_to_cfgsc_gadget_nonempty():
    from stategrammar.decide import cfgsc_index_emptiness
    from stategrammar.reduce import binary_gadget

    g = binary_gadget("11")
    out = cfgmc_to_cfgsc(g)
    dec = cfgsc_index_emptiness(out, 4, 4)
    assert dec.nonempty


def test_cfgmc_to_ccfgs_dyck(grammars):
    g = grammars["dyck_equal"]
    out = cfgmc_to_ccfgs(g)
    assert validate(out) == []
    assert lang(out, CONTROLLED, 4) == lang(g, FREE, 4)


def test_cfgmc_to_ccfgs_single_increment():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a"}),
        productions=(Production("q", ("*",), "S", "q", (1,), ()),),
        axiom="S",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
        counters=CounterSpec.monotonic(1),
        acceptance=COUNTERS_EQUAL,
    )
    out = cfgmc_to_ccfgs(g)
    assert lang(out, CONTROLLED, 3) == lang(g, FREE, 3) == {()}


def test_cfgmc_to_ccfgs_forced_imbalance_is_empty():
    g = StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a"}),
        productions=(Production("q", ("*", "*"), "S", "q", (1, 0), ()),),
        axiom="S",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
        counters=CounterSpec.monotonic(2),
        acceptance=COUNTERS_EQUAL,
    )
    out = cfgmc_to_ccfgs(g)
    assert lang(g, FREE, 3) == frozenset()
    assert lang(out, CONTROLLED, 3) == frozenset()


# ---------------------------------------------------------------------------
# controlled-state expansion


def test_expansion_preserves_remark1(grammars):
    g = grammars["remark_case1"]
    ex = expand_ccfgs_states(g)
    assert validate(ex) == []
    assert len(ex.states) == len(g.states) * 4
    assert lang(ex, CONTROLLED, 6) == lang(g, CONTROLLED, 6)


def test_expansion_without_erasers_keeps_language():
    g = StateGrammar(
        nonterminals=frozenset({"S", "C"}),
        terminals=frozenset({"a"}),
        productions=(
            Production("q", (), "S", "q", (), ("a", "S")),
            Production("q", (), "S", "q", (), ("a",)),
        ),
        axiom="S",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
        control=(frozenset({"S"}), frozenset({"C"})),
    )
    ex = expand_ccfgs_states(g)
    assert lang(ex, CONTROLLED, 4) == lang(g, CONTROLLED, 4)


def test_expansion_preserves_dyck_pipeline(grammars):
    out = cfgmc_to_ccfgs(grammars["dyck_equal"])
    ex = expand_ccfgs_states(out)
    assert lang(ex, CONTROLLED, 4) == lang(out, CONTROLLED, 4)


def test_make_finals_halting_preserves_language(grammars):
    g = grammars["remark_case2"]
    h = make_finals_halting(g)
    assert not any(p.from_state in h.final_states for p in h.productions)
    assert lang(h, CONTROLLED, 4) == lang(g, CONTROLLED, 4)


# ---------------------------------------------------------------------------
# degeneralization


def _generalized(rules, k, terminals=("a",)):
    states = {p.from_state for p in rules} | {p.to_state for p in rules}
    nts = {p.lhs for p in rules} | {
        s for p in rules for s in p.rhs if s not in terminals
    }
    return StateGrammar(
        nonterminals=frozenset(nts),
        terminals=frozenset(terminals),
        productions=tuple(rules),
        axiom="S",
        states=frozenset(states) | {"f"},
        initial_state="q0",
        final_states=frozenset({"f"}),
        counters=CounterSpec.reversal(k, generalized=True),
    )


def test_degeneralize_unit_rule_passthrough():
    g = _generalized(
        [
            Production("q0", ("*",), "S", "q0", (1,), ("a", "T")),
            Production("q0", ("p",), "T", "f", (-1,), ("a",)),
        ],
        1,
    )
    out = degeneralize(g)
    assert out.counters.count == 1
    assert not out.counters.generalized
    assert len(out.productions) == 2
    assert lang(out, FREE, 4) == lang(g, FREE, 4)


def test_degeneralize_plus5_worked_example():
    # seed the counter, apply +5, then drain it five times and emit `a`
    rules = [
        Production("q0", ("*",), "S", "q", (1,), ("T",)),
        Production("q", ("p",), "T", "p", (5,), ("U",)),
        Production("p", ("p",), "U", "p", (-1,), ("U",)),
        Production("p", ("p",), "U", "f", (-1,), ("a",)),
    ]
    g = _generalized(rules, 1)
    out = degeneralize(g)
    assert out.counters.count == 1 + 2  # two auxiliary counters for +5
    from stategrammar.derive import explore

    res = explore(out, FREE, Budget(400, 20, 10), want_final_counters=True)
    # words a with the main counter fully drained: 1 + 5 - 6 = 0
    assert ("a",) in res.words
    # every complete run of the +5 gadget contributes exactly 5:
    # final counters of accepting runs are determined
    assert lang(out, FREE, 2) == lang(g, FREE, 2) == {("a",)}


def test_degeneralize_drain_count_pins_the_gain():
    # grammar that decrements exactly n times then accepts at zero
    def chain(n):
        rules = [Production("q0", ("z",), "S", "q", (5,), ("T0",))]
        for i in range(n):
            rules.append(
                Production("q", ("p",), f"T{i}", "q", (-1,), (f"T{i + 1}",))
            )
        rules.append(Production("q", ("z",), f"T{n}", "f", (0,), ("a",)))
        return _generalized(rules, 1)

    for n, ok in ((4, False), (5, True), (6, False)):
        out = degeneralize(chain(n))
        assert (lang(out, FREE, 2) == {("a",)}) is ok, n


def test_degeneralize_preserves_right_linear_and_index():
    from stategrammar.reduce import SubsetSumInstance, subset_sum_to_rlgsc

    g = subset_sum_to_rlgsc(SubsetSumInstance((3, 5, 2), 5))
    out = degeneralize(g)
    assert classify(out).shape == RIGHT_LINEAR
    assert validate(out) == []
    d = member(out, FREE, ("a",), Budget(2000, 6, 20))
    assert d is not None
    assert d.index(out) == 1  # single nonterminal throughout


def test_degeneralize_rejects_bad_decrements():
    g = _generalized([Production("q0", ("p",), "S", "f", (-2,), ("a",))], 1)
    with pytest.raises(ValueError):
        degeneralize(g)
