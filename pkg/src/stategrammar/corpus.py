"""Built-in corpus of small state grammars used throughout the test suite.

Each entry is a faithful encoding of a worked example: the nested-blocks
family G_k, the two-counter w$w grammar, the Dyck grammar with equal a/b
counts under monotonic counters, the two controlled xx-language grammars,
a controlled version of the Dyck grammar, and a few synthetic counter
grammars exercising multi-reversal normalization and counter stripping.
"""
from __future__ import annotations

from dataclasses import dataclass

from .core import (
    ANY,
    CLASSIC,
    COUNTERS_EQUAL,
    FINAL_STATE,
    POS,
    TERMINAL_RHS,
    V1_RHS,
    ZERO,
    CounterSpec,
    Production,
    StateGrammar,
)


def _p(q: str, A: str, p: str, rhs: str, guard: str = "", update: str = "") -> Production:
    g = tuple(guard.split()) if guard else ()
    u = tuple(int(x) for x in update.split()) if update else ()
    return Production(q, g, A, p, u, tuple(rhs.split()))


def example1(k: int) -> StateGrammar:
    """G_k generating {a1^n b1^n ... ak^n bk^n | n > 0} with k states."""
    if k < 2:
        raise ValueError("the nested-blocks family needs k >= 2")
    terminals = [f"a{i}" for i in range(1, k + 1)] + [f"b{i}" for i in range(1, k + 1)]
    nts = ["S"] + [f"A{i}" for i in range(1, k + 1)]
    states = [f"q{i}" for i in range(k)]
    rules = [_p("q0", "S", "q0", " ".join(f"A{i}" for i in range(1, k + 1)))]
    for i in range(1, k + 1):
        src = f"q{i - 1}"
        dst = f"q{i}" if i < k else "q0"
        rules.append(_p(src, f"A{i}", dst, f"a{i} A{i} b{i}"))
        rules.append(_p(src, f"A{i}", dst, f"a{i} b{i}"))
    return StateGrammar(
        nonterminals=frozenset(nts),
        terminals=frozenset(terminals),
        productions=tuple(rules),
        axiom="S",
        states=frozenset(states),
        initial_state="q0",
        final_states=frozenset({"q0"}),
    )


def example2_wdollarw() -> StateGrammar:
    """Two 1-reversal counters accepting {w$w | w in {a,b}*, |w|_a = |w|_b}."""
    rules = (
        _p("q0", "S", "q0", "A1 A2", "z z", "0 0"),
        _p("q0", "A1", "qa", "a A1", "* *", "1 0"),
        _p("q0", "A1", "qb", "b A1", "* *", "0 1"),
        _p("qa", "A2", "q0", "a A2", "* *", "0 0"),
        _p("qb", "A2", "q0", "b A2", "* *", "0 0"),
        _p("q0", "A1", "q1", "A1", "z z", "0 0"),
        _p("q0", "A1", "q1", "A1", "p p", "0 0"),
        _p("q1", "A1", "q1", "A1", "p p", "-1 -1"),
        _p("q1", "A2", "q1", "", "z z", "0 0"),
        _p("q1", "A1", "qf", "$", "z z", "0 0"),
    )
    return StateGrammar(
        nonterminals=frozenset({"S", "A1", "A2"}),
        terminals=frozenset({"a", "b", "$"}),
        productions=rules,
        axiom="S",
        states=frozenset({"q0", "qa", "qb", "q1", "qf"}),
        initial_state="q0",
        final_states=frozenset({"qf"}),
        counters=CounterSpec.reversal(2),
    )


def dyck_equal() -> StateGrammar:
    """Monotonic two-counter grammar for {w in D2 | |w|_a = |w|_b}.

    Brackets are a/a' and b/b'; the counters record how many a-blocks and
    b-blocks were opened, and acceptance requires the totals to agree.
    """
    rules = (
        _p("q", "S", "q", "S a S a' S", "* *", "1 0"),
        _p("q", "S", "q", "S b S b' S", "* *", "0 1"),
        _p("q", "S", "q", "", "* *", "0 0"),
    )
    return StateGrammar(
        nonterminals=frozenset({"S"}),
        terminals=frozenset({"a", "a'", "b", "b'"}),
        productions=rules,
        axiom="S",
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
        counters=CounterSpec.monotonic(2),
        acceptance=COUNTERS_EQUAL,
    )


def remark_case1() -> StateGrammar:
    """Controlled grammar for {xx | x in (a+b)*} whose V2 rules emit terminals."""
    rules = (
        _p("q0", "S", "qa", "C1 C2"),
        _p("q0", "S", "qb", "C1 C2"),
        _p("qa", "C1", "pa", "a C1"),
        _p("qa", "C1", "q1", ""),
        _p("qb", "C1", "pb", "b C1"),
        _p("qb", "C1", "q1", ""),
        _p("q1", "C2", "q2", ""),
        _p("pa", "C2", "qa", "a C2"),
        _p("pa", "C2", "qb", "a C2"),
        _p("pb", "C2", "qa", "b C2"),
        _p("pb", "C2", "qb", "b C2"),
    )
    return StateGrammar(
        nonterminals=frozenset({"S", "C1", "C2"}),
        terminals=frozenset({"a", "b"}),
        productions=rules,
        axiom="S",
        states=frozenset({"q0", "qa", "qb", "pa", "pb", "q1", "q2"}),
        initial_state="q0",
        final_states=frozenset({"q2"}),
        control=(frozenset({"S"}), frozenset({"C1", "C2"})),
        control_variant=TERMINAL_RHS,
    )


def remark_case2() -> StateGrammar:
    """Same xx language with V2 rules emitting V1 placeholders, decoded at the end."""
    rules = (
        _p("q0", "S", "qa", "C1 C2"),
        _p("q0", "S", "qb", "C1 C2"),
        _p("qa", "C1", "pa", "A C1"),
        _p("qa", "C1", "q1", ""),
        _p("qb", "C1", "pb", "B C1"),
        _p("qb", "C1", "q1", ""),
        _p("q1", "C2", "q2", ""),
        _p("pa", "C2", "qa", "A C2"),
        _p("pa", "C2", "qb", "A C2"),
        _p("pb", "C2", "qa", "B C2"),
        _p("pb", "C2", "qb", "B C2"),
        _p("q2", "A", "q2", "a"),
        _p("q2", "B", "q2", "b"),
    )
    return StateGrammar(
        nonterminals=frozenset({"S", "A", "B", "C1", "C2"}),
        terminals=frozenset({"a", "b"}),
        productions=rules,
        axiom="S",
        states=frozenset({"q0", "qa", "qb", "pa", "pb", "q1", "q2"}),
        initial_state="q0",
        final_states=frozenset({"q2"}),
        control=(frozenset({"S", "A", "B"}), frozenset({"C1", "C2"})),
        control_variant=V1_RHS,
    )


def dyck_ccfgs() -> StateGrammar:
    """Controlled, counterless version of `dyck_equal`.

    Counter increments become C1/C2 emissions into the sentential form and
    the final drain erases C1 C2 blocks cyclically; structurally this is
    what `transform.cfgmc_to_ccfgs` produces for the Dyck grammar.
    """
    rules = (
        _p("q0", "S'", "q0", "C1 C2 S"),
        _p("q0", "S", "q0", "C1 S a S a' S"),
        _p("q0", "S", "q1", "C1 S a S a' S"),
        _p("q0", "S", "q0", "C2 S b S b' S"),
        _p("q0", "S", "q1", "C2 S b S b' S"),
        _p("q0", "S", "q0", ""),
        _p("q0", "S", "q1", ""),
        _p("q1", "C1", "q2", ""),
        _p("q2", "C2", "q1", ""),
        _p("q2", "C2", "qf", ""),
    )
    return StateGrammar(
        nonterminals=frozenset({"S'", "S", "C1", "C2"}),
        terminals=frozenset({"a", "a'", "b", "b'"}),
        productions=rules,
        axiom="S'",
        states=frozenset({"q0", "q1", "q2", "qf"}),
        initial_state="q0",
        final_states=frozenset({"qf"}),
        control=(frozenset({"S'", "S"}), frozenset({"C1", "C2"})),
        control_variant=CLASSIC,
    )


def three_reversal_blocks() -> StateGrammar:
    """One 3-reversal counter generating {a^n b^n c^m d^m | n, m >= 1}."""
    rules = (
        _p("qa", "S", "qa", "a S", "*", "1"),
        _p("qa", "S", "qb", "S", "p", "0"),
        _p("qb", "S", "qb", "b S", "p", "-1"),
        _p("qb", "S", "qc", "T", "z", "0"),
        _p("qc", "T", "qc", "c T", "*", "1"),
        _p("qc", "T", "qd", "T", "p", "0"),
        _p("qd", "T", "qd", "d T", "p", "-1"),
        _p("qd", "T", "qf", "", "z", "0"),
    )
    return StateGrammar(
        nonterminals=frozenset({"S", "T"}),
        terminals=frozenset({"a", "b", "c", "d"}),
        productions=rules,
        axiom="S",
        states=frozenset({"qa", "qb", "qc", "qd", "qf"}),
        initial_state="qa",
        final_states=frozenset({"qf"}),
        counters=CounterSpec.reversal(1, bound=3),
    )


def counter_block_synth() -> StateGrammar:
    """One 1-reversal counter generating {a^n b^n | n >= 0}."""
    rules = (
        _p("q0", "S", "q0", "a S", "*", "1"),
        _p("q0", "S", "q1", "T", "*", "0"),
        _p("q1", "T", "q1", "b T", "p", "-1"),
        _p("q1", "T", "qf", "", "z", "0"),
    )
    return StateGrammar(
        nonterminals=frozenset({"S", "T"}),
        terminals=frozenset({"a", "b"}),
        productions=rules,
        axiom="S",
        states=frozenset({"q0", "q1", "qf"}),
        initial_state="q0",
        final_states=frozenset({"qf"}),
        counters=CounterSpec.reversal(1),
    )


def counter_pair_synth() -> StateGrammar:
    """Two 1-reversal counters generating {w c^(|w|_a) d^(|w|_b) | w in {a,b}*}."""
    rules = (
        _p("q0", "S", "q0", "a S", "* *", "1 0"),
        _p("q0", "S", "q0", "b S", "* *", "0 1"),
        _p("q0", "S", "q1", "T", "* *", "0 0"),
        _p("q1", "T", "q1", "c T", "p *", "-1 0"),
        _p("q1", "T", "q1", "d T", "z p", "0 -1"),
        _p("q1", "T", "qf", "", "z z", "0 0"),
    )
    return StateGrammar(
        nonterminals=frozenset({"S", "T"}),
        terminals=frozenset({"a", "b", "c", "d"}),
        productions=rules,
        axiom="S",
        states=frozenset({"q0", "q1", "qf"}),
        initial_state="q0",
        final_states=frozenset({"qf"}),
        counters=CounterSpec.reversal(2),
    )


@dataclass(frozen=True)
class CorpusInfo:
    """Known facts used to cross-check the emptiness pipeline.

    `index` and `cap` are the documented bounds under which the pipeline's
    "empty within bound" answer is a true emptiness answer for this
    grammar; controlled grammars fall outside the pipeline (`index` None).
    """

    nonempty: bool
    index: int | None
    cap: int


def corpus() -> dict[str, StateGrammar]:
    return {
        "example1_k2": example1(2),
        "example1_k3": example1(3),
        "example2_wdollarw": example2_wdollarw(),
        "dyck_equal": dyck_equal(),
        "remark_case1": remark_case1(),
        "remark_case2": remark_case2(),
        "dyck_ccfgs": dyck_ccfgs(),
        "three_reversal_blocks": three_reversal_blocks(),
        "counter_block_synth": counter_block_synth(),
        "counter_pair_synth": counter_pair_synth(),
    }


CORPUS_INFO: dict[str, CorpusInfo] = {
    "example1_k2": CorpusInfo(nonempty=True, index=2, cap=1),
    "example1_k3": CorpusInfo(nonempty=True, index=3, cap=1),
    "example2_wdollarw": CorpusInfo(nonempty=True, index=2, cap=2),
    "dyck_equal": CorpusInfo(nonempty=True, index=2, cap=2),
    "remark_case1": CorpusInfo(nonempty=True, index=None, cap=0),
    "remark_case2": CorpusInfo(nonempty=True, index=None, cap=0),
    "dyck_ccfgs": CorpusInfo(nonempty=True, index=None, cap=0),
    "three_reversal_blocks": CorpusInfo(nonempty=True, index=1, cap=2),
    "counter_block_synth": CorpusInfo(nonempty=True, index=1, cap=2),
    "counter_pair_synth": CorpusInfo(nonempty=True, index=1, cap=2),
}
