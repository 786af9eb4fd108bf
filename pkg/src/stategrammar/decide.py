"""Emptiness of finite-index state grammars with 1-reversal counters.

The pipeline erases terminals, normalizes the counters, and searches the
index-bounded configuration space: states of the companion counter
machine are pairs [q, w] where w is a nonterminal word of length at most
m, and every rule application on any occurrence inside w becomes a
lambda-transition mirroring the rule's guard and update.

A NonEmpty answer always carries a replayable witness.  EmptyWithinBound
is a true "empty" when the caller-supplied index and counter cap soundly
cover some derivation of every word (as they do for the built-in corpus
and the subset-sum reductions); when no cap was even reached during the
search, the answer is unconditional.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import derive, engine, transform
from .core import (
    ANY,
    FINAL_STATE_ZERO,
    MONOTONIC,
    NO_COUNTERS,
    REVERSAL_BOUNDED,
    ZERO,
    CounterSpec,
    Production,
    StateGrammar,
    validate,
)
from .machine import CounterMachine, Transition, ncm_empty_bounded


def erase_terminals(g: StateGrammar) -> StateGrammar:
    """Map every terminal to the empty word; emptiness is preserved."""
    rules = tuple(
        Production(
            p.from_state, p.guard, p.lhs, p.to_state, p.update,
            tuple(s for s in p.rhs if s in g.nonterminals),
        )
        for p in g.productions
    )
    return StateGrammar(
        nonterminals=g.nonterminals,
        terminals=frozenset(),
        productions=rules,
        axiom=g.axiom,
        states=g.states,
        initial_state=g.initial_state,
        final_states=g.final_states,
        counters=g.counters,
        acceptance=g.acceptance,
    )


def index_grammar_to_ncm(g: StateGrammar, m: int) -> CounterMachine:
    """Counter machine over the reachable [q, w] states, |w| <= m.

    Only states reachable from [q0, S] are materialized; the full
    |Q| * |V|^m product would be astronomically larger and contributes
    nothing to the language.
    """
    if m < 1:
        raise ValueError("index bound must be >= 1")
    if g.terminals:
        for p in g.productions:
            if any(s in g.terminals for s in p.rhs):
                raise ValueError("erase terminals first")
    if g.counters.discipline == REVERSAL_BOUNDED and any(
        b != 1 for b in g.counters.bounds
    ):
        raise ValueError("normalize the counters to one reversal first")
    if g.counters.generalized:
        raise ValueError("degeneralize the grammar first")
    if g.control is not None:
        raise ValueError("the index construction is for uncontrolled grammars")

    def name(q: str, w: tuple[str, ...]) -> str:
        return f"[{q}|{'.'.join(w)}]"

    k = g.counters.count
    by_state_lhs: dict[tuple[str, str], list[int]] = {}
    for i, p in enumerate(g.productions):
        by_state_lhs.setdefault((p.from_state, p.lhs), []).append(i)

    start = (g.initial_state, (g.axiom,))
    frontier = [start]
    seen = {start}
    transitions: list[Transition] = []
    while frontier:
        q, w = frontier.pop()
        for pos, sym in enumerate(w):
            for r in by_state_lhs.get((q, sym), ()):
                p = g.productions[r]
                w2 = w[:pos] + p.rhs + w[pos + 1:]
                if len(w2) > m:
                    continue
                nxt = (p.to_state, w2)
                transitions.append(
                    Transition(name(q, w), None, p.guard, None, name(*nxt),
                               p.update, (), label=g.label(r))
                )
                if nxt not in seen:
                    seen.add(nxt)
                    frontier.append(nxt)

    states = {name(q, w) for q, w in seen}
    acc = "acc!"
    states.add(acc)
    hop_guard = (ZERO,) * k if g.acceptance == FINAL_STATE_ZERO else (ANY,) * k
    for q, w in seen:
        if not w and q in g.final_states:
            transitions.append(
                Transition(name(q, w), None, hop_guard, None, acc, (0,) * k, ())
            )
    return CounterMachine(
        states=frozenset(states),
        input_alphabet=frozenset(),
        counters=g.counters if k else CounterSpec(),
        stack_alphabet=None,
        bottom=None,
        transitions=tuple(transitions),
        initial_state=name(*start),
        final_states=frozenset({acc}),
    )


@dataclass(frozen=True)
class EmptinessDecision:
    """Outcome of the bounded emptiness pipeline.

    `conditional` marks an empty answer that relies on the caller's index
    and counter bounds being sound for this grammar; it is False when the
    search exhausted the whole configuration space below the caps.
    """

    nonempty: bool
    m: int
    cap: int
    effective_m: int
    witness: derive.Derivation | None = None
    searched: StateGrammar | None = None
    conditional: bool = True

    def __bool__(self) -> bool:
        return self.nonempty

    def describe(self) -> str:
        if self.nonempty:
            return f"NONEMPTY (index {self.m}, cap {self.cap})"
        qual = "" if not self.conditional else "; sound only if index/cap cover the grammar"
        return f"EMPTY within bounds (index {self.m}, cap {self.cap}{qual})"


def _prepare(g: StateGrammar, m: int):
    """Terminal erasure plus counter normalization, tracking how many helper
    nonterminals the conversions can keep alive in a sentential form."""
    errors = validate(g)
    if errors:
        raise ValueError(f"invalid grammar: {errors[0]}")
    if g.control is not None:
        raise ValueError("emptiness pipeline covers uncontrolled grammars only")
    if g.counters.generalized:
        raise ValueError("degeneralize the grammar first")
    m_eff = m
    work = g
    if work.counters.discipline == MONOTONIC:
        work = transform.cfgmc_to_cfgsc(work)
        m_eff += 1  # the drain marker
    work = erase_terminals(work)
    if work.counters.discipline == REVERSAL_BOUNDED:
        if any(b >= 2 for b in work.counters.bounds):
            m_eff += 1  # the counter-splitting helper nonterminal
        work = transform.to_normal_form(work)
        m_eff += 1  # the end marker
    return work, m_eff


def cfgsc_index_emptiness(
    g: StateGrammar,
    m: int,
    cap: int,
    via_machine: bool = False,
    mode: str = derive.FREE,
) -> EmptinessDecision:
    """Decide emptiness assuming some derivation of index <= m exists when
    the language is nonempty, with counters soundly capped by `cap`.

    `m` refers to the input grammar; the helper symbols introduced by the
    internal conversions are accounted for automatically.  The default path
    searches the derivation space directly (identical to, and checked
    against, building the [q, w] machine when `via_machine` is set).

    `mode` selects the derivation relation searched.  Free covers every
    grammar; leftmost is sound exactly when nonemptiness guarantees some
    leftmost derivation within the index bound, which holds for the
    subset-sum reductions and shrinks their search space by orders of
    magnitude.
    """
    if m < 1:
        raise ValueError("index bound must be >= 1")
    if cap < 0:
        raise ValueError("counter cap must be >= 0")
    if mode not in (derive.FREE, derive.LEFTMOST):
        raise ValueError("emptiness search supports free or leftmost derivations")
    work, m_eff = _prepare(g, m)
    if via_machine:
        if mode != derive.FREE:
            raise ValueError("the [q, w] machine realizes the free interpretation")
        mach = index_grammar_to_ncm(work, m_eff)
        res = ncm_empty_bounded(mach, cap)
        return EmptinessDecision(
            res.nonempty, m, cap, m_eff,
            witness=None, searched=work,
            conditional=not res.nonempty and not res.exhaustive,
        )
    budget = derive.Budget(
        max_steps=engine.UNBOUNDED_STEPS,
        max_form_len=m_eff,
        max_counter=cap,
    )
    result = derive.explore(work, mode, budget, target=())
    if result.witness is not None:
        return EmptinessDecision(
            True, m, cap, m_eff, witness=result.witness, searched=work,
            conditional=False,
        )
    return EmptinessDecision(
        False, m, cap, m_eff, witness=None, searched=work,
        conditional=not result.exhaustive,
    )
