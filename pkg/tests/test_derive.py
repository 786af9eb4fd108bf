import pytest

from stategrammar import derive
from stategrammar.core import CounterSpec, Production, StateGrammar
from stategrammar.derive import (
    CIRCULAR,
    CONTROLLED,
    FREE,
    LEFTISH,
    LEFTMOST,
    Budget,
    Config,
    bounded_language,
    enumerate_words,
    explore,
    initial_config,
    member,
    step,
    sweep_circular,
)
from stategrammar.transform import expand_ccfgs_states

from conftest import count, dyck_ok, join, plain_cfg, words_upto

B = Budget(60, 30, 8)


# ---------------------------------------------------------------------------
# step


def test_step_example1_initial(grammars):
    g = grammars["example1_k2"]
    succ = step(g, FREE, initial_config(g))
    assert len(succ) == 1
    cfg, rule = succ[0]
    assert cfg.state == "q0" and cfg.form == ("A1", "A2")
    assert g.productions[rule].lhs == "S"


def test_step_terminal_form_has_no_successors(grammars):
    g = grammars["example1_k2"]
    cfg = Config("q0", (), (), (), ("a1", "b1"))
    for mode in (FREE, LEFTMOST, LEFTISH):
        assert step(g, mode, cfg) == []


def _naive_successors(g, cfg):
    """Independent oracle: apply every rule at every occurrence directly."""
    out = set()
    for pos, sym in enumerate(cfg.form):
        if sym not in g.nonterminals:
            continue
        for i, p in enumerate(g.productions):
            if p.lhs != sym or p.from_state != cfg.state:
                continue
            ok = True
            for j, gd in enumerate(p.guard):
                if gd == "z" and cfg.counters[j] != 0:
                    ok = False
                if gd == "p" and cfg.counters[j] == 0:
                    ok = False
            if not ok:
                continue
            counters = tuple(c + u for c, u in zip(cfg.counters, p.update))
            if any(c < 0 for c in counters):
                continue
            form = cfg.form[:pos] + p.rhs + cfg.form[pos + 1:]
            out.add((p.to_state, counters, form, i))
    return out


def test_step_example2_matches_naive_application(grammars):
    g = grammars["example2_wdollarw"]
    cfg = Config("q0", (0, 0), (0, 0), (0, 0), ("A1", "A2"))
    got = {(c.state, c.counters, c.form, r) for c, r in step(g, FREE, cfg)}
    assert got == _naive_successors(g, cfg)
    assert all(c.state in ("qa", "qb", "q1") for c, _ in step(g, FREE, cfg))


def test_step_mode_errors(grammars):
    e2 = grammars["example2_wdollarw"]
    with pytest.raises(ValueError):
        step(e2, LEFTISH, initial_config(e2))
    with pytest.raises(ValueError):
        sweep_circular(e2, initial_config(e2))
    g2 = grammars["example1_k2"]
    with pytest.raises(ValueError):
        step(g2, CONTROLLED, initial_config(g2))


def test_leftish_skips_nonterminals_without_rules():
    g = StateGrammar(
        nonterminals=frozenset({"A", "B"}),
        terminals=frozenset({"b"}),
        productions=(Production("q", (), "B", "q", (), ("b",)),),
        axiom="A",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
    )
    cfg = Config("q", (), (), (), ("A", "B"))
    assert step(g, LEFTMOST, cfg) == []
    succ = step(g, LEFTISH, cfg)
    assert [c.form for c, _ in succ] == [("A", "b")]


# ---------------------------------------------------------------------------
# circular sweeps


def test_sweep_example1_two_occurrences(grammars):
    g = grammars["example1_k2"]
    cfg = Config("q0", (), (), (), ("A1", "A2"))
    got = {(c.state, c.form) for c, _ in sweep_circular(g, cfg)}
    assert got == {
        ("q0", ("a1", "A1", "b1", "a2", "A2", "b2")),
        ("q0", ("a1", "A1", "b1", "a2", "b2")),
        ("q0", ("a1", "b1", "a2", "A2", "b2")),
        ("q0", ("a1", "b1", "a2", "b2")),
    }


def test_sweep_requires_a_nonterminal(grammars):
    g = grammars["example1_k2"]
    with pytest.raises(ValueError):
        sweep_circular(g, Config("q0", (), (), (), ("a1",)))


def test_sweep_single_occurrence_equals_free_step(grammars):
    g = grammars["example1_k2"]
    cfg = initial_config(g)
    swept = {(c.state, c.form) for c, _ in sweep_circular(g, cfg)}
    stepped = {(c.state, c.form) for c, _ in step(g, FREE, cfg)}
    assert swept == stepped


def test_sweep_rewrites_every_original_occurrence(grammars):
    g = grammars["example1_k3"]
    cfg = Config("q0", (), (), (), ("A1", "A2", "A3"))
    for nxt, labels in sweep_circular(g, cfg):
        assert len(labels) == 3


def test_circular_language_of_example1(grammars):
    g = grammars["example1_k2"]
    free = bounded_language(g, FREE, 8)
    circ = bounded_language(g, CIRCULAR, 8)
    assert circ == free


# ---------------------------------------------------------------------------
# enumerate


def test_enumerate_example1_exact_budget(grammars):
    g = grammars["example1_k2"]
    words = enumerate_words(g, FREE, Budget(40, 20, 0))
    short = {w for w in words if len(w) <= 8}
    assert short == {
        ("a1", "b1", "a2", "b2"),
        ("a1", "a1", "b1", "b1", "a2", "a2", "b2", "b2"),
    }


def test_enumerate_example2_against_predicate(grammars):
    g = grammars["example2_wdollarw"]
    got = bounded_language(g, FREE, 5)
    expected = set()
    for w in words_upto(("a", "b"), 2):
        if count(w, "a") == count(w, "b"):
            expected.add(w + ("$",) + w)
    assert got == {w for w in expected if len(w) <= 5}


def test_enumerate_dyck_against_bracket_oracle(grammars):
    g = grammars["dyck_equal"]
    got = bounded_language(g, FREE, 4)
    pairs = {"a": "a'", "b": "b'"}
    expected = {
        w
        for w in words_upto(("a", "a'", "b", "b'"), 4)
        if dyck_ok(w, pairs) and count(w, "a") == count(w, "b")
    }
    assert got == expected
    assert join(got) == ["", "aa'bb'", "abb'a'", "baa'b'", "bb'aa'"]


def test_enumerate_max_words_stops_early(grammars):
    g = grammars["example1_k2"]
    words = enumerate_words(g, FREE, Budget(60, 30, 0, max_words=1))
    assert len(words) == 1


# ---------------------------------------------------------------------------
# member


def test_member_example1_word(grammars):
    g = grammars["example1_k2"]
    d = member(g, FREE, ("a1", "b1", "a2", "b2"), Budget(40, 20, 0))
    assert d is not None
    assert len(d.rules) == 3
    assert d.replay_ok(g, FREE)
    assert d.configs[-1].form == ("a1", "b1", "a2", "b2")


def test_member_rejects_absent_word(grammars):
    g = grammars["example1_k2"]
    assert member(g, FREE, ("a1", "b1"), Budget(60, 30, 0)) is None


def test_member_dyck_empty_word(grammars):
    g = grammars["dyck_equal"]
    d = member(g, FREE, (), Budget(10, 5, 2))
    assert d is not None and len(d.rules) == 1


def test_member_rejects_foreign_symbols(grammars):
    with pytest.raises(ValueError):
        member(grammars["example1_k2"], FREE, ("zzz",), B)


def test_member_circular(grammars):
    g = grammars["example1_k2"]
    d = member(g, CIRCULAR, ("a1", "b1", "a2", "b2"), Budget(10, 20, 0))
    assert d is not None and d.replay_ok(g, CIRCULAR)


# ---------------------------------------------------------------------------
# invariants


def test_witness_replay_for_all_short_words(grammars):
    for name in ("example1_k2", "example2_wdollarw", "dyck_equal"):
        g = grammars[name]
        mode = FREE
        for w in sorted(bounded_language(g, mode, 5)):
            d = member(g, mode, w, Budget(80, 30, 8))
            assert d is not None, (name, w)
            assert d.replay_ok(g, mode), (name, w)
            assert d.configs[-1].form == w


def test_mode_coincidence_for_plain_cfgs():
    cfgs = [
        plain_cfg({"S": ["a S b", ""]}),
        plain_cfg({"S": ["S S", "a"]}),
        plain_cfg({"S": ["A B", "a"], "A": ["a"], "B": ["b", "a B"]}),
    ]
    for g in cfgs:
        for n in (4, 6):
            free = bounded_language(g, FREE, n)
            lm = bounded_language(g, LEFTMOST, n)
            lt = bounded_language(g, LEFTISH, n)
            assert free == lm == lt


def test_order_independence_for_monotonic(grammars):
    g = grammars["dyck_equal"]
    for n in (4, 6):
        assert bounded_language(g, FREE, n) == bounded_language(g, LEFTMOST, n)


def test_guard_soundness_on_explored_configs(grammars):
    # walk the reachable configs of a counter grammar, checking nonnegativity
    # and the reversal discipline from the raw counter values along each path
    g = grammars["three_reversal_blocks"]
    seen = set()
    frontier = [initial_config(g)]
    steps = 0
    while frontier and steps < 4000:
        cfg = frontier.pop()
        for nxt, _ in step(g, FREE, cfg):
            steps += 1
            assert all(c >= 0 for c in nxt.counters)
            assert all(r <= b for r, b in zip(nxt.reversals, g.counters.bounds))
            if len(nxt.form) <= 10 and nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)


def _erase_once_probe():
    return StateGrammar(
        nonterminals=frozenset({"S", "T", "C"}),
        terminals=frozenset({"a"}),
        productions=(
            Production("q0", (), "S", "q1", (), ("C", "T")),
            Production("q1", (), "C", "q2", (), ()),
            Production("q2", (), "T", "q3", (), ("a", "C")),
            Production("q3", (), "C", "q4", (), ()),
        ),
        axiom="S",
        states=frozenset({"q0", "q1", "q2", "q3", "q4"}),
        initial_state="q0",
        final_states=frozenset({"q4"}),
        control=(frozenset({"S", "T"}), frozenset({"C"})),
        control_variant="terminal_rhs",
    )


def test_erase_once_blocks_reintroduction():
    g = _erase_once_probe()
    assert bounded_language(g, CONTROLLED, 4) == frozenset()


def test_erase_once_expansion_agrees_with_history_flags(grammars):
    cases = [grammars["remark_case1"], grammars["remark_case2"], _erase_once_probe()]
    for g in cases:
        expanded = expand_ccfgs_states(g)
        for n in (3, 5):
            assert bounded_language(g, CONTROLLED, n) == bounded_language(
                expanded, CONTROLLED, n
            )


def test_erase_once_never_violated_in_derivations(grammars):
    g = grammars["dyck_ccfgs"]
    v2 = g.control[1]
    for w in sorted(bounded_language(g, CONTROLLED, 4)):
        d = member(g, CONTROLLED, w, Budget(60, 24, 0))
        assert d is not None
        erased = set()
        for applied, cfg in zip(d.rules, d.configs[1:]):
            p = g.productions[applied[0]]
            assert not (set(p.rhs) & erased), "erased symbol reintroduced"
            if p.lhs in v2 and p.lhs not in p.rhs:
                erased.add(p.lhs)


def test_budget_caps_are_conjunctive(grammars):
    g = grammars["example1_k2"]
    tight = enumerate_words(g, FREE, Budget(3, 30, 0))
    assert tight == {("a1", "b1", "a2", "b2")}
    res = explore(g, FREE, Budget(3, 30, 0))
    assert res.hit_step_cap and not res.exhaustive


def test_dedup_key_includes_phases(grammars):
    # two configs equal in (state, counters, form) but different phase must
    # be kept apart: with bound 1 a drained counter cannot restart
    g = grammars["counter_block_synth"]
    words = bounded_language(g, FREE, 6)
    assert words == {(), ("a", "b"), ("a", "a", "b", "b"), ("a",) * 3 + ("b",) * 3}
