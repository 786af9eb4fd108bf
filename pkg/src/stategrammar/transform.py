"""Constructive transformations between grammar classes.

Every transformation here is a pure function on immutable grammar values
and preserves the bounded language (the test suite enumerates both sides).
The heavy ones:

* `to_normal_form`   -- split every r-reversal counter into floor(r/2)+1
  one-reversal counters with the phase tracked in the states, then route
  all old final states through a unique accepting state that drains every
  counter to zero (acceptance becomes final-state-with-zero-counters).
* `strip_counters`   -- trade counters for emission symbols c_i/d_i and a
  Parikh filter keeping words with equally many c_i and d_i.
* `degeneralize`     -- compile binary-constant increments down to unit
  updates with auxiliary one-reversal counters via recursive doubling.
"""
from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .core import (
    ANY,
    CLASSIC,
    COUNTERS_EQUAL,
    FINAL_STATE,
    FINAL_STATE_ZERO,
    LINEAR,
    MONOTONIC,
    NO_COUNTERS,
    POS,
    REVERSAL_BOUNDED,
    RIGHT_LINEAR,
    ZERO,
    CounterSpec,
    Production,
    StateGrammar,
    classify,
    fresh_name,
)


# ---------------------------------------------------------------------------
# state elimination for linear shapes


def lgs_to_lg(g: StateGrammar) -> StateGrammar:
    """Fold the states of a (right-)linear grammar into V x Q nonterminals.

    `(q,A) -> (p, u B v)` becomes `A@q -> u B@p v`; a terminating rule is
    kept exactly when its target state is final.
    """
    shape = classify(g).shape
    if shape not in (LINEAR, RIGHT_LINEAR):
        raise ValueError("state elimination needs a linear or right-linear grammar")
    if g.counters.count:
        raise ValueError("state elimination is defined for counter-free grammars")

    def pair(a: str, q: str) -> str:
        return f"{a}@{q}"

    nts = frozenset(pair(a, q) for a in g.nonterminals for q in g.states)
    state = fresh_name("s", set(nts) | set(g.terminals))
    rules = []
    for p in g.productions:
        nt_pos = [i for i, s in enumerate(p.rhs) if s in g.nonterminals]
        if nt_pos:
            i = nt_pos[0]
            rhs = p.rhs[:i] + (pair(p.rhs[i], p.to_state),) + p.rhs[i + 1:]
            rules.append(Production(state, (), pair(p.lhs, p.from_state), state, (), rhs))
        elif p.to_state in g.final_states:
            rules.append(Production(state, (), pair(p.lhs, p.from_state), state, (), p.rhs))
    return StateGrammar(
        nonterminals=nts,
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=pair(g.axiom, g.initial_state),
        states=frozenset({state}),
        initial_state=state,
        final_states=frozenset({state}),
    )


# ---------------------------------------------------------------------------
# context-free grammars with regular control


@dataclass(frozen=True)
class FiniteAutomaton:
    """NFA over production labels; edges are (src, label, dst) triples."""

    states: frozenset[str]
    edges: tuple[tuple[str, str, str], ...]
    initial: str
    finals: frozenset[str]

    def move(self, sources: frozenset[str], label: str) -> frozenset[str]:
        return frozenset(d for s, l, d in self.edges if s in sources and l == label)

    def deterministic(self) -> bool:
        seen = set()
        for s, l, _ in self.edges:
            if (s, l) in seen:
                return False
            seen.add((s, l))
        return True


@dataclass(frozen=True)
class RegularControl:
    """A regular set of production-label words; labels[i] names production i."""

    labels: tuple[str, ...]
    fa: FiniteAutomaton


@dataclass(frozen=True)
class ControlledCFG:
    base: StateGrammar
    control: RegularControl


def determinize(fa: FiniteAutomaton) -> FiniteAutomaton:
    """Reachable subset construction; missing transitions reject implicitly."""
    labels = sorted({l for _, l, _ in fa.edges})

    def name(subset: frozenset[str]) -> str:
        return "{" + "+".join(sorted(subset)) + "}"

    start = frozenset({fa.initial})
    frontier = [start]
    seen = {start}
    edges = []
    while frontier:
        cur = frontier.pop()
        for l in labels:
            nxt = fa.move(cur, l)
            if not nxt:
                continue
            edges.append((name(cur), l, name(nxt)))
            if nxt not in seen:
                seen.add(nxt)
                frontier.append(nxt)
    states = frozenset(name(s) for s in seen)
    finals = frozenset(name(s) for s in seen if s & fa.finals)
    return FiniteAutomaton(states, tuple(edges), name(start), finals)


def cfgs_to_regctrl(g: StateGrammar) -> ControlledCFG:
    """Strip the states off the rules and push them into a control NFA."""
    if g.counters.count:
        raise ValueError("regular-control form is defined for counter-free grammars")
    state = fresh_name("s", set(g.nonterminals) | set(g.terminals))
    base_rules = tuple(
        Production(state, (), p.lhs, state, (), p.rhs) for p in g.productions
    )
    base = StateGrammar(
        nonterminals=g.nonterminals,
        terminals=g.terminals,
        productions=base_rules,
        axiom=g.axiom,
        states=frozenset({state}),
        initial_state=state,
        final_states=frozenset({state}),
    )
    labels = tuple(g.label(i) for i in range(len(g.productions)))
    edges = tuple(
        (p.from_state, labels[i], p.to_state) for i, p in enumerate(g.productions)
    )
    fa = FiniteAutomaton(g.states, edges, g.initial_state, g.final_states)
    return ControlledCFG(base, RegularControl(labels, fa))


def regctrl_to_cfgs(c: ControlledCFG) -> StateGrammar:
    """Thread a determinized control automaton through the grammar states."""
    dfa = c.control.fa if c.control.fa.deterministic() else determinize(c.control.fa)
    by_label: dict[str, list[tuple[str, str]]] = {}
    for s, l, d in dfa.edges:
        by_label.setdefault(l, []).append((s, d))
    rules = []
    base = c.base
    for i, p in enumerate(base.productions):
        for q, q2 in by_label.get(c.control.labels[i], ()):
            rules.append(Production(q, (), p.lhs, q2, (), p.rhs))
    return StateGrammar(
        nonterminals=base.nonterminals,
        terminals=base.terminals,
        productions=tuple(rules),
        axiom=base.axiom,
        states=dfa.states,
        initial_state=dfa.initial,
        final_states=dfa.finals,
    )


def controlled_language(
    c: ControlledCFG, max_steps: int, max_form_len: int, max_len: int | None = None
) -> frozenset[tuple[str, ...]]:
    """Reference interpreter: free derivations whose label word the NFA accepts.

    Deliberately independent of `regctrl_to_cfgs` so the two can be checked
    against each other.
    """
    base = c.base
    fa = c.control.fa
    labels = c.control.labels
    nts = base.nonterminals
    start = (frozenset({fa.initial}), (base.axiom,))
    frontier = deque([start])
    seen = {start}
    depth = {start: 0}
    words = set()
    while frontier:
        cur = frontier.popleft()
        fa_states, form = cur
        if all(s not in nts for s in form) and fa_states & fa.finals:
            if max_len is None or len(form) <= max_len:
                words.add(form)
        if depth[cur] >= max_steps:
            continue
        for pos, sym in enumerate(form):
            if sym not in nts:
                continue
            for i, p in enumerate(base.productions):
                if p.lhs != sym:
                    continue
                nxt_states = fa.move(fa_states, labels[i])
                if not nxt_states:
                    continue
                new_form = form[:pos] + p.rhs + form[pos + 1:]
                if len(new_form) > max_form_len:
                    continue
                nxt = (nxt_states, new_form)
                if nxt not in seen:
                    seen.add(nxt)
                    depth[nxt] = depth[cur] + 1
                    frontier.append(nxt)
    return frozenset(words)


# ---------------------------------------------------------------------------
# normal form: every counter makes exactly one reversal


def _expand_guard(gd: str) -> tuple[str, ...]:
    return (ZERO, POS) if gd == ANY else (gd,)


def _normalize_one_counter(g: StateGrammar, pos: int, suffix: str) -> StateGrammar:
    """Replace counter `pos` (bound r) by n = r//2 + 1 one-reversal counters.

    States are split into families tagging the counter's phase: `;z{i}`
    (zero, i reversals used so far), `;u{i}` / `;d{i}` (increasing or
    decreasing on the i-th one-reversal counter) and `;b{i}` (draining
    counter i-1 into counter i via the helper nonterminal X).
    """
    r = g.counters.bounds[pos]
    n = r // 2 + 1
    k = g.counters.count

    def st(q: str, fam: str, i: int) -> str:
        return f"{q};{fam}{i}{suffix}"

    used = set(g.nonterminals) | set(g.terminals) | set(g.states)
    helper = fresh_name(f"X{suffix}", used) if n > 1 else None

    def widen(vec, at_pos_values):
        """Replace index `pos` of a guard/update vector by an n-slot block."""
        return tuple(vec[:pos]) + tuple(at_pos_values) + tuple(vec[pos + 1:])

    zero_block = (ZERO,) * n
    nop_block = (0,) * n

    def block_guard(i: int, value: str, other: str = ZERO):
        b = [other] * n
        b[i] = value
        return tuple(b)

    def block_update(i: int, value: int):
        b = [0] * n
        b[i] = value
        return tuple(b)

    rules: list[Production] = []

    def emit(src, gblock, lhs, dst, ublock, rhs, rest_guard, rest_update):
        rules.append(
            Production(src, widen(rest_guard, gblock), lhs, dst, widen(rest_update, ublock), rhs)
        )

    for p in g.productions:
        rest_g, rest_u = p.guard, p.update
        for g0 in _expand_guard(p.guard[pos]):
            u0 = p.update[pos]
            if g0 == ZERO:
                if u0 == 0:
                    for i in range(n + 1):
                        emit(st(p.from_state, "z", i), zero_block, p.lhs,
                             st(p.to_state, "z", i), nop_block, p.rhs, rest_g, rest_u)
                    for i in range(1, n + 1):
                        emit(st(p.from_state, "d", i), zero_block, p.lhs,
                             st(p.to_state, "z", i), nop_block, p.rhs, rest_g, rest_u)
                elif u0 > 0:
                    for i in range(n):
                        emit(st(p.from_state, "z", i), zero_block, p.lhs,
                             st(p.to_state, "u", i + 1), block_update(i, 1), p.rhs,
                             rest_g, rest_u)
                    for i in range(1, n):
                        emit(st(p.from_state, "d", i), zero_block, p.lhs,
                             st(p.to_state, "u", i + 1), block_update(i, 1), p.rhs,
                             rest_g, rest_u)
                # u0 < 0 under a zero guard is invalid and never emitted
            else:  # positive guard
                if u0 >= 0:
                    for i in range(1, n + 1):
                        emit(st(p.from_state, "u", i), block_guard(i - 1, POS), p.lhs,
                             st(p.to_state, "u", i), block_update(i - 1, u0), p.rhs,
                             rest_g, rest_u)
                if u0 <= 0:
                    for i in range(1, n + 1):
                        emit(st(p.from_state, "d", i), block_guard(i - 1, POS), p.lhs,
                             st(p.to_state, "d", i), block_update(i - 1, u0), p.rhs,
                             rest_g, rest_u)
                if u0 < 0:
                    for i in range(1, n + 1):
                        emit(st(p.from_state, "u", i), block_guard(i - 1, POS), p.lhs,
                             st(p.to_state, "d", i), block_update(i - 1, -1), p.rhs,
                             rest_g, rest_u)
                if u0 > 0:
                    for i in range(1, n):
                        emit(st(p.from_state, "d", i), block_guard(i - 1, POS), p.lhs,
                             st(p.to_state, "b", i + 1), block_update(i, 1),
                             (helper,) + p.rhs, rest_g, rest_u)

    # helper rules: drain counter i-1 into counter i, then leave the bar family
    if helper is not None:
        rest_any = (ANY,) * k
        rest_nop = (0,) * k
        for q in sorted(g.states):
            for i in range(2, n + 1):
                gblock = [ZERO] * n
                gblock[i - 2] = POS
                gblock[i - 1] = ANY
                ublock = [0] * n
                ublock[i - 2] = -1
                ublock[i - 1] = 1
                emit(st(q, "b", i), tuple(gblock), helper,
                     st(q, "b", i), tuple(ublock), (helper,), rest_any, rest_nop)
                emit(st(q, "b", i), block_guard(i - 1, POS), helper,
                     st(q, "u", i), nop_block, (), rest_any, rest_nop)

    states = set()
    for q in g.states:
        for i in range(n + 1):
            states.add(st(q, "z", i))
        for i in range(1, n + 1):
            states.add(st(q, "u", i))
            states.add(st(q, "d", i))
        for i in range(2, n + 1):
            states.add(st(q, "b", i))
    finals = set()
    for q in g.final_states:
        for i in range(n + 1):
            finals.add(st(q, "z", i))
        for i in range(1, n + 1):
            finals.add(st(q, "u", i))
            finals.add(st(q, "d", i))

    bounds = g.counters.bounds[:pos] + (1,) * n + g.counters.bounds[pos + 1:]
    return StateGrammar(
        nonterminals=g.nonterminals | ({helper} if helper else set()),
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=g.axiom,
        states=frozenset(states),
        initial_state=st(g.initial_state, "z", 0),
        final_states=frozenset(finals),
        counters=CounterSpec(pos + n + (k - pos - 1), REVERSAL_BOUNDED, bounds),
        acceptance=g.acceptance,
    )


def _add_unique_final(g: StateGrammar, strict_zero: bool) -> StateGrammar:
    """Wrap the grammar with an end marker rewritten only in a fresh final
    state `f`, where every counter is drained to zero before accepting."""
    k = g.counters.count
    used = set(g.nonterminals) | set(g.terminals) | set(g.states)
    marker = fresh_name("W", used)
    axiom = fresh_name("S!", used)
    final = fresh_name("f!", set(g.states))
    any_g = (ANY,) * k
    zero_g = (ZERO,) * k
    nop = (0,) * k
    rules = [Production(g.initial_state, zero_g, axiom, g.initial_state, nop, (g.axiom, marker))]
    rules.extend(g.productions)
    switch_guard = zero_g if strict_zero else any_g
    for s in sorted(g.final_states):
        rules.append(Production(s, switch_guard, marker, final, nop, (marker,)))
    for j in range(k):
        gd = list(any_g)
        gd[j] = POS
        u = [0] * k
        u[j] = -1
        rules.append(Production(final, tuple(gd), marker, final, tuple(u), (marker,)))
    rules.append(Production(final, zero_g, marker, final, nop, ()))
    return StateGrammar(
        nonterminals=g.nonterminals | {marker, axiom},
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=axiom,
        states=g.states | {final},
        initial_state=g.initial_state,
        final_states=frozenset({final}),
        counters=g.counters,
        acceptance=FINAL_STATE_ZERO,
    )


def to_normal_form(g: StateGrammar) -> StateGrammar:
    """Make every counter 1-reversal with phases tracked in the states, and
    accept only in a unique final state with all counters zero."""
    if g.counters.discipline == NO_COUNTERS:
        return g
    if g.counters.discipline != REVERSAL_BOUNDED:
        raise ValueError("monotonic counters: convert with cfgmc_to_cfgsc first")
    if g.counters.generalized:
        raise ValueError("degeneralize the grammar first")
    strict = g.acceptance == FINAL_STATE_ZERO
    work = g
    pos = 0
    for step in range(g.counters.count):
        r = work.counters.bounds[pos]
        work = _normalize_one_counter(work, pos, f"!{step}")
        pos += r // 2 + 1
    return _add_unique_final(work, strict)


def is_normal_form(g: StateGrammar) -> bool:
    return (
        g.counters.discipline == NO_COUNTERS
        or (
            g.counters.discipline == REVERSAL_BOUNDED
            and not g.counters.generalized
            and all(b == 1 for b in g.counters.bounds)
            and g.acceptance == FINAL_STATE_ZERO
            and len(g.final_states) == 1
        )
    )


# ---------------------------------------------------------------------------
# counter stripping (counters traded for a Parikh filter)


@dataclass(frozen=True)
class BalancedFilter:
    """Keep words with |w|_{c_i} = |w|_{d_i} for every pair, then erase both."""

    pairs: tuple[tuple[str, str], ...]

    @property
    def marks(self) -> frozenset[str]:
        return frozenset(s for pair in self.pairs for s in pair)

    def keep(self, word: tuple[str, ...]) -> bool:
        for c, d in self.pairs:
            if sum(1 for s in word if s == c) != sum(1 for s in word if s == d):
                return False
        return True

    def erase(self, word: tuple[str, ...]) -> tuple[str, ...]:
        marks = self.marks
        return tuple(s for s in word if s not in marks)

    def apply(self, words) -> frozenset[tuple[str, ...]]:
        return frozenset(self.erase(w) for w in words if self.keep(w))


def strip_counters(g: StateGrammar) -> tuple[StateGrammar, BalancedFilter]:
    """Replace counter updates by emissions of fresh balance markers.

    Needs the normal form: the phase discipline baked into the states is
    what lets a plain Parikh filter (equally many c_i and d_i) stand in for
    the counter semantics.
    """
    k = g.counters.count
    if k == 0:
        return g, BalancedFilter(())
    if not is_normal_form(g):
        raise ValueError("strip_counters needs a grammar in normal form")
    used = set(g.nonterminals) | set(g.terminals) | set(g.states)
    pairs = tuple(
        (fresh_name(f"c{j + 1}", used), fresh_name(f"d{j + 1}", used)) for j in range(k)
    )
    rules = []
    for p in g.productions:
        emit = []
        for j, u in enumerate(p.update):
            if u > 0:
                emit.extend([pairs[j][0]] * u)
            elif u < 0:
                emit.extend([pairs[j][1]] * (-u))
        rules.append(Production(p.from_state, (), p.lhs, p.to_state, (), p.rhs + tuple(emit)))
    marks = frozenset(s for pair in pairs for s in pair)
    out = StateGrammar(
        nonterminals=g.nonterminals,
        terminals=g.terminals | marks,
        productions=tuple(rules),
        axiom=g.axiom,
        states=g.states,
        initial_state=g.initial_state,
        final_states=g.final_states,
        acceptance=FINAL_STATE,
    )
    return out, BalancedFilter(pairs)


# ---------------------------------------------------------------------------
# monotonic-counter grammars


def cfgmc_to_cfgsc(g: StateGrammar) -> StateGrammar:
    """Trade all-counters-equal acceptance for a lockstep drain to zero.

    A fresh end marker X floats in the sentential form; once the grammar
    guesses the counters are equal it drains them all simultaneously and
    erases X into a fresh final state.
    """
    if g.counters.discipline != MONOTONIC:
        raise ValueError("cfgmc_to_cfgsc expects monotonic counters")
    k = g.counters.count
    q = g.initial_state
    used = set(g.nonterminals) | set(g.terminals) | set(g.states)
    marker = fresh_name("X", used)
    axiom = fresh_name("S!", used)
    final = fresh_name("f", set(g.states))
    any_g = (ANY,) * k
    zero_g = (ZERO,) * k
    nop = (0,) * k
    rules = [Production(q, zero_g, axiom, q, nop, (g.axiom, marker))]
    for p in g.productions:
        rules.append(Production(q, any_g, p.lhs, q, p.update, p.rhs))
    if k:
        rules.append(Production(q, (POS,) * k, marker, q, (-1,) * k, (marker,)))
    rules.append(Production(q, zero_g, marker, final, nop, ()))
    return StateGrammar(
        nonterminals=g.nonterminals | {marker, axiom},
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=axiom,
        states=frozenset({q, final}),
        initial_state=q,
        final_states=frozenset({final}),
        counters=CounterSpec.reversal(k) if k else CounterSpec(),
        acceptance=FINAL_STATE_ZERO if k else FINAL_STATE,
    )


def cfgmc_to_ccfgs(g: StateGrammar) -> StateGrammar:
    """Counterless controlled form: increments become V2-symbol emissions,
    the final drain erases C_1..C_k blocks cyclically."""
    if g.counters.discipline != MONOTONIC:
        raise ValueError("cfgmc_to_ccfgs expects monotonic counters")
    k = g.counters.count
    if k < 1:
        raise ValueError("needs at least one counter")
    used = set(g.nonterminals) | set(g.terminals) | set(g.states)
    cs = [fresh_name(f"C{i + 1}", used) for i in range(k)]
    axiom = fresh_name("S!", used)
    used_states = set(g.states) | set(cs) | set(g.nonterminals) | set(g.terminals) | {axiom}
    ps = [fresh_name(f"p{i}", used_states) for i in range(k + 1)]
    pf = fresh_name("pf", used_states)

    rules = [Production(ps[0], (), axiom, ps[0], (), tuple(cs) + (g.axiom,))]
    for p in g.productions:
        emitted = tuple(cs[j] for j in range(k) if p.update[j])
        rules.append(Production(ps[0], (), p.lhs, ps[0], (), emitted + p.rhs))
        rules.append(Production(ps[0], (), p.lhs, ps[1], (), emitted + p.rhs))
    for i in range(1, k):
        rules.append(Production(ps[i], (), cs[i - 1], ps[i + 1], (), ()))
    rules.append(Production(ps[k], (), cs[k - 1], ps[1], (), ()))
    rules.append(Production(ps[k], (), cs[k - 1], pf, (), ()))

    return StateGrammar(
        nonterminals=g.nonterminals | set(cs) | {axiom},
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=axiom,
        states=frozenset(ps) | {pf},
        initial_state=ps[0],
        final_states=frozenset({pf}),
        control=(g.nonterminals | {axiom}, frozenset(cs)),
        control_variant=CLASSIC,
        acceptance=FINAL_STATE,
    )


# ---------------------------------------------------------------------------
# controlled grammars


def expand_ccfgs_states(g: StateGrammar) -> StateGrammar:
    """Make the erase-once condition structural: states become Q x {+,-}^k.

    A rule whose rhs mentions C_j only survives in states where C_j was not
    yet erased; erasing C_i flips its sign in the target state.
    """
    if g.control is None:
        raise ValueError("expand_ccfgs_states needs a controlled grammar")
    v1, v2 = g.control
    v2_sorted = sorted(v2)
    k = len(v2_sorted)
    index = {c: i for i, c in enumerate(v2_sorted)}

    def st(q: str, signs: tuple[bool, ...]) -> str:
        return f"{q}|{''.join('+' if s else '-' for s in signs)}"

    all_signs = list(itertools.product((True, False), repeat=k))
    rules = []
    for p in g.productions:
        rhs_flags = {index[s] for s in p.rhs if s in index}
        for signs in all_signs:
            if any(not signs[j] for j in rhs_flags):
                continue
            new = list(signs)
            if p.lhs in index and p.lhs not in p.rhs:
                new[index[p.lhs]] = False
            rules.append(
                Production(st(p.from_state, signs), (), p.lhs,
                           st(p.to_state, tuple(new)), (), p.rhs)
            )
    states = frozenset(st(q, s) for q in g.states for s in all_signs)
    finals = frozenset(st(q, s) for q in g.final_states for s in all_signs)
    return StateGrammar(
        nonterminals=g.nonterminals,
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=g.axiom,
        states=states,
        initial_state=st(g.initial_state, (True,) * k),
        final_states=finals,
        control=g.control,
        control_variant=g.control_variant,
        acceptance=g.acceptance,
    )


def make_finals_halting(g: StateGrammar) -> StateGrammar:
    """Ensure no rule leaves a final state by rerouting accepting entries
    into a fresh halting copy."""
    if not any(p.from_state in g.final_states for p in g.productions):
        return g
    halt = fresh_name("f$", set(g.states) | set(g.nonterminals) | set(g.terminals))
    rules = list(g.productions)
    for p in g.productions:
        if p.to_state in g.final_states:
            rules.append(Production(p.from_state, p.guard, p.lhs, halt, p.update, p.rhs))
    return StateGrammar(
        nonterminals=g.nonterminals,
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=g.axiom,
        states=g.states | {halt},
        initial_state=g.initial_state,
        final_states=frozenset({halt}),
        counters=g.counters,
        control=g.control,
        control_variant=g.control_variant,
        acceptance=g.acceptance,
    )


# ---------------------------------------------------------------------------
# degeneralization of binary-constant increments


def _gadget_plan(c: int) -> tuple[int, list[int]]:
    """Bits of c (LSB first) and the number of doubling levels needed."""
    bits = []
    while c:
        bits.append(c & 1)
        c >>= 1
    return len(bits) - 1, bits


def degeneralize(g: StateGrammar, max_uses: int = 1) -> StateGrammar:
    """Compile binary-constant increments to unit updates.

    Every increment +c with c >= 2 becomes a recursive-doubling gadget: put
    2 into a fresh one-reversal counter, repeatedly drain level l into
    level l+1 while doubling (siphoning +1 into the real counter whenever
    bit l of c is set), and finally drain the top level into the real
    counter.  All gadget rules keep a single nonterminal on the right-hand
    side, so the derivation index is unchanged.

    Auxiliary counters are private to one rule occurrence; `max_uses`
    widens their reversal bounds when a generalized rule may fire more
    than once in a single derivation.
    """
    if not g.counters.generalized:
        raise ValueError("degeneralize expects a generalized grammar")
    for i, p in enumerate(g.productions):
        if any(u < -1 for u in p.update):
            raise ValueError(f"production {i}: generalized decrements must be exactly 1")
    k = g.counters.count
    used = set(g.nonterminals) | set(g.terminals) | set(g.states)
    aux_bound = 2 * max_uses - 1

    rules: list[Production] = []
    n_aux = 0
    aux_of_rule: dict[int, int] = {}
    plans = []
    for t, p in enumerate(g.productions):
        big = [(j, p.update[j]) for j in range(k) if p.update[j] >= 2]
        levels = sum(_gadget_plan(c)[0] for _, c in big)
        aux_of_rule[t] = n_aux
        n_aux += levels
        plans.append(big)

    total = k + n_aux

    def widen_guard(vec):
        return tuple(vec) + (ANY,) * n_aux

    def widen_update(vec):
        return tuple(vec) + (0,) * n_aux

    for t, p in enumerate(g.productions):
        big = plans[t]
        if not big:
            rules.append(
                Production(p.from_state, widen_guard(p.guard), p.lhs,
                           p.to_state, widen_update(p.update), p.rhs)
            )
            continue
        # Guard status of each real counter while the gadget runs: untouched
        # counters keep the entry guard; the target counter is in flux until
        # its final drain certainly makes it positive.
        status = list(p.guard)
        base_update = [u if u in (-1, 0, 1) else 0 for u in p.update]
        for j, _ in big:
            base_update[j] = 0

        aux0 = k + aux_of_rule[t]
        seq = 0

        def nt() -> str:
            nonlocal seq
            seq += 1
            return fresh_name(f"X{seq}@r{t}", used)

        def vec(pairs):
            v = [0] * total
            for idx, u in pairs:
                v[idx] = u
            return tuple(v)

        def gvec(pairs):
            v = list(status) + [ANY] * n_aux
            for idx, gd in pairs:
                v[idx] = gd
            return tuple(v)

        cur_nt = p.lhs
        cur_state = p.from_state
        aux = aux0
        first = True
        for j, c in big:
            s, bits = _gadget_plan(c)
            # entry: bit 0 into the real counter, seed the first level with 1
            entry_updates = [(aux, 1)]
            if bits[0]:
                entry_updates.append((j, 1))
            extra = vec(entry_updates)
            if first:
                extra = tuple(e + b for e, b in zip(extra, widen_update(base_update)))
            entry_guard = gvec([])
            status[j] = ANY
            nxt = nt()
            rules.append(Production(cur_state, entry_guard, cur_nt, p.to_state, extra, (nxt,)))
            cur_state = p.to_state
            cur_nt = nxt
            first = False
            # second unit: the first level now holds 2
            nxt = nt()
            rules.append(Production(cur_state, gvec([(aux, POS)]), cur_nt,
                                    cur_state, vec([(aux, 1)]), (nxt,)))
            cur_nt = nxt
            # doubling levels: drain level aux into aux+1, two units per one,
            # siphoning a unit into the real counter when that bit of c is set
            for lvl in range(1, s):
                a, b_ = aux, aux + 1
                siphon = [(a, -1), (b_, 1)]
                if bits[lvl]:
                    siphon.append((j, 1))
                x_loop = cur_nt
                x_half = nt()
                rules.append(Production(cur_state, gvec([(a, POS)]), x_loop,
                                        cur_state, vec(siphon), (x_half,)))
                rules.append(Production(cur_state, gvec([(b_, POS)]), x_half,
                                        cur_state, vec([(b_, 1)]), (x_loop,)))
                nxt = nt()
                rules.append(Production(cur_state, gvec([(a, ZERO), (b_, POS)]), x_loop,
                                        cur_state, vec([]), (nxt,)))
                cur_nt = nxt
                aux += 1
            # top level drains into the real counter
            rules.append(Production(cur_state, gvec([(aux, POS)]), cur_nt,
                                    cur_state, vec([(aux, -1), (j, 1)]), (cur_nt,)))
            status[j] = POS
            nxt = nt()
            rules.append(Production(cur_state, gvec([(aux, ZERO)]), cur_nt,
                                    cur_state, vec([]), (nxt,)))
            cur_nt = nxt
            aux += 1
        rules.append(Production(cur_state, gvec([]), cur_nt, p.to_state, vec([]), p.rhs))

    new_nts = {p.lhs for p in rules} | {s for p in rules for s in p.rhs if s not in g.terminals}
    bounds = tuple(g.counters.bounds) + (aux_bound,) * n_aux
    return StateGrammar(
        nonterminals=g.nonterminals | new_nts,
        terminals=g.terminals,
        productions=tuple(rules),
        axiom=g.axiom,
        states=g.states,
        initial_state=g.initial_state,
        final_states=g.final_states,
        counters=CounterSpec(total, REVERSAL_BOUNDED, bounds),
        acceptance=g.acceptance,
    )
