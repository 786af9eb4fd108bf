"""One-way counter machines and the grammar-to-machine constructions.

A `CounterMachine` is a nondeterministic finite automaton with
reversal-bounded counters (NCM) and, optionally, a pushdown store (NPCM).
The leftmost stack symbol is the top.  Acceptance is by final state after
the whole input is consumed; counter guards let constructions demand
empty counters where needed.

Constructions provided:

* `cfgsc_lm_to_npcm`  -- predict/match simulation of leftmost derivations,
  threading grammar states and mirroring counters one for one,
* `rlgsc_to_ncm`      -- stackless simulation of right-linear grammars,
* `lgsc_to_npcm1`     -- linear grammars on a stack that makes at most one
  reversal (terminal prefixes are read directly, never pushed),
* `ccfgs_to_npcm`     -- controlled grammars with V1 on the stack and V2
  occurrence counts in 1-reversal counters.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import engine, transform
from .core import (
    ANY,
    CLASSIC,
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
    StateGrammar,
    classify,
)
from .core import fresh_name as _fresh_name
from .derive import Budget


@dataclass(frozen=True)
class Transition:
    """`(src, inp, guard, top) -> (dst, update, push)`; inp None reads nothing.

    `push` replaces the popped top symbol; `label` carries the provenance
    of transitions that simulate a grammar production.
    """

    src: str
    inp: str | None
    guard: tuple[str, ...]
    top: str | None
    dst: str
    update: tuple[int, ...]
    push: tuple[str, ...] = ()
    label: str = ""


@dataclass(frozen=True)
class CounterMachine:
    states: frozenset[str]
    input_alphabet: frozenset[str]
    counters: CounterSpec
    stack_alphabet: frozenset[str] | None
    bottom: str | None
    transitions: tuple[Transition, ...]
    initial_state: str
    final_states: frozenset[str]


@dataclass(frozen=True)
class MachineConfig:
    state: str
    consumed: int
    counters: tuple[int, ...]
    phases: tuple[int, ...]
    reversals: tuple[int, ...]
    stack: tuple[str, ...]


@dataclass(frozen=True)
class Run:
    """A replayable accepting run: transition indices plus the word read."""

    transitions: tuple[int, ...]
    word: tuple[str, ...]


@dataclass(frozen=True)
class EmptinessResult:
    nonempty: bool
    witness: tuple[str, ...] | None
    run: Run | None
    cap: int
    exhaustive: bool

    def __bool__(self) -> bool:
        return self.nonempty


def validate_machine(m: CounterMachine) -> list[str]:
    out: list[str] = []
    if m.initial_state not in m.states:
        out.append(f"initial state undeclared: {m.initial_state!r}")
    for f in m.final_states - m.states:
        out.append(f"final state undeclared: {f!r}")
    if m.counters.discipline not in (NO_COUNTERS, REVERSAL_BOUNDED):
        out.append("machine counters must be reversal-bounded or absent")
    if m.counters.discipline == REVERSAL_BOUNDED and len(m.counters.bounds) != m.counters.count:
        out.append("reversal bounds arity != counter count")
    has_stack = m.stack_alphabet is not None
    if has_stack and m.bottom not in m.stack_alphabet:
        out.append("bottom marker not in the stack alphabet")
    k = m.counters.count
    for i, t in enumerate(m.transitions):
        where = f"transition {i}"
        if t.src not in m.states or t.dst not in m.states:
            out.append(f"{where}: undeclared state")
        if t.inp is not None and t.inp not in m.input_alphabet:
            out.append(f"{where}: undeclared input symbol {t.inp!r}")
        if len(t.guard) != k or len(t.update) != k:
            out.append(f"{where}: guard/update arity != counter count {k}")
        if has_stack:
            if t.top is None or t.top not in m.stack_alphabet:
                out.append(f"{where}: missing or undeclared top symbol")
            for s in t.push:
                if s not in m.stack_alphabet:
                    out.append(f"{where}: undeclared push symbol {s!r}")
        elif t.top is not None or t.push:
            out.append(f"{where}: stack operation on a stackless machine")
    return out


def _decode_word(lm: dict, w) -> tuple[str, ...]:
    return tuple(lm["inputs"][s] for s in w)


def accepts(m: CounterMachine, word: tuple[str, ...], budget: Budget) -> Run | None:
    """Exact within-budget decision; the returned run replays to acceptance."""
    bad = [s for s in word if s not in m.input_alphabet]
    if bad:
        raise ValueError(f"word uses symbols outside the input alphabet: {bad}")
    lm = engine.lower_machine(m)
    inp_id = {s: i for i, s in enumerate(lm["inputs"])}
    res = engine.search_machine(
        lm, 0, tuple(inp_id[s] for s in word),
        budget.max_steps, budget.max_form_len,
        budget.max_counter if m.counters.count else 0,
    )
    if not res["found"]:
        return None
    return Run(tuple(res["witness"]), tuple(word))


def enumerate_words(m: CounterMachine, budget: Budget) -> frozenset[tuple[str, ...]]:
    lm = engine.lower_machine(m)
    res = engine.search_machine(
        lm, 1, None,
        budget.max_steps, budget.max_form_len,
        budget.max_counter if m.counters.count else 0,
        budget.max_words or 0,
        max_word_len=budget.max_word_len or 0,
    )
    return frozenset(_decode_word(lm, w) for w in res["words"])


def bounded_language(m: CounterMachine, max_len: int, max_rounds: int = 10) -> frozenset:
    """Accepted words of length <= max_len, growing the budget until stable."""
    budget = Budget(
        max_steps=max(32, 8 * max_len),
        max_form_len=max(8, max_len + 6),
        max_counter=max(2, 2 * max_len),
        max_word_len=max_len,
    )
    lm = engine.lower_machine(m)
    prev = None
    for _ in range(max_rounds):
        res = engine.search_machine(
            lm, 1, None, budget.max_steps, budget.max_form_len,
            budget.max_counter if m.counters.count else 0, 0,
            max_word_len=max_len,
        )
        cut = frozenset(
            _decode_word(lm, w) for w in res["words"] if len(w) <= max_len
        )
        done = not (
            res["hit_len_cap"] or res["hit_counter_cap"]
            or res["hit_step_cap"] or res["hit_config_cap"]
        )
        if done or cut == prev:
            return cut
        prev = cut
        budget = budget.grown()
    return prev if prev is not None else frozenset()


def ncm_empty_bounded(
    m: CounterMachine, cap: int, max_steps: int = engine.UNBOUNDED_STEPS
) -> EmptinessResult:
    """Configuration-graph emptiness search with counter values capped.

    A NonEmpty answer is always correct (the run replays); EmptyWithinBound
    is a true "empty" whenever the caller's cap soundly bounds reachable
    counter values, and unconditionally when no cap was hit.
    """
    if m.stack_alphabet is not None:
        raise ValueError("emptiness search needs a stackless machine; use accepts/enumerate")
    lm = engine.lower_machine(m)
    res = engine.search_machine(lm, 2, None, max_steps, 1, cap)
    if res["found"]:
        word = tuple(
            lm["inputs"][lm["t_inp"][t]] for t in res["witness"] if lm["t_inp"][t] >= 0
        )
        return EmptinessResult(True, word, Run(tuple(res["witness"]), word), cap, True)
    exhaustive = not (
        res["hit_counter_cap"] or res["hit_step_cap"] or res["hit_config_cap"]
    )
    return EmptinessResult(False, None, None, cap, exhaustive)


def replay_run(
    m: CounterMachine, run: Run, check_acceptance: bool = True
) -> list[MachineConfig]:
    """Replay a run transition by transition, verifying every side condition."""
    k = m.counters.count
    cfg = MachineConfig(
        m.initial_state, 0, (0,) * k, (0,) * k, (0,) * k,
        (m.bottom,) if m.stack_alphabet is not None else (),
    )
    out = [cfg]
    for ti in run.transitions:
        t = m.transitions[ti]
        if t.src != cfg.state:
            raise ValueError(f"transition {ti} not applicable: state {cfg.state}")
        consumed = cfg.consumed
        if t.inp is not None:
            if consumed >= len(run.word) or run.word[consumed] != t.inp:
                raise ValueError(f"transition {ti} input mismatch at {consumed}")
            consumed += 1
        stack = cfg.stack
        if m.stack_alphabet is not None:
            if not stack or stack[0] != t.top:
                raise ValueError(f"transition {ti} top mismatch")
            stack = t.push + stack[1:]
        counters = list(cfg.counters)
        phases = list(cfg.phases)
        revs = list(cfg.reversals)
        for j in range(k):
            gd = t.guard[j]
            if gd == ZERO and counters[j] != 0 or gd == POS and counters[j] == 0:
                raise ValueError(f"transition {ti} guard fails on counter {j}")
            counters[j] += t.update[j]
            if counters[j] < 0:
                raise ValueError(f"transition {ti} drives counter {j} negative")
            if t.update[j] > 0:
                if phases[j] == 2:
                    revs[j] += 1
                phases[j] = 1
            elif t.update[j] < 0:
                if phases[j] == 1:
                    revs[j] += 1
                phases[j] = 2
            if (
                m.counters.discipline == REVERSAL_BOUNDED
                and revs[j] > m.counters.bounds[j]
            ):
                raise ValueError(f"transition {ti} exceeds reversal bound on counter {j}")
        cfg = MachineConfig(
            t.dst, consumed, tuple(counters), tuple(phases), tuple(revs), stack
        )
        out.append(cfg)
    if check_acceptance:
        if cfg.state not in m.final_states:
            raise ValueError("run does not end in a final state")
        if cfg.consumed != len(run.word):
            raise ValueError("run does not consume the whole word")
    return out


_fresh = _fresh_name


class _Builder:
    """Accumulates transitions and mints fresh intermediate states."""

    def __init__(self, states: set[str], k: int):
        self.states = states
        self.k = k
        self.transitions: list[Transition] = []
        self.any = (ANY,) * k
        self.zero = (ZERO,) * k
        self.nop = (0,) * k

    def mid(self) -> str:
        return _fresh(f"m{len(self.transitions)}", self.states)

    def add(self, src, inp, guard, top, dst, update, push=(), label=""):
        self.transitions.append(
            Transition(src, inp, tuple(guard), top, dst, tuple(update), tuple(push), label)
        )

    def unit_updates(self, update):
        """Split a multi-counter update into unit steps: list of update vectors."""
        steps = []
        for j, u in enumerate(update):
            one = [0] * self.k
            one[j] = 1 if u > 0 else -1
            for _ in range(abs(u)):
                steps.append(tuple(one))
        return steps or [self.nop]


def _machine_counters(g: StateGrammar) -> CounterSpec:
    if g.counters.discipline == MONOTONIC:
        return CounterSpec.reversal(g.counters.count)
    return g.counters


def _acceptance_hops(b: _Builder, g: StateGrammar, hop_src: list[str], acc: str, top, push):
    """Wire grammar-final states to the machine's accepting state, honoring
    the grammar's acceptance condition (draining for all-counters-equal)."""
    k = b.k
    if g.acceptance == FINAL_STATE or k == 0:
        for f in hop_src:
            b.add(f, None, b.any, top, acc, b.nop, push)
    elif g.acceptance == FINAL_STATE_ZERO:
        for f in hop_src:
            b.add(f, None, b.zero, top, acc, b.nop, push)
    else:  # all counters equal: drain them in lockstep, then demand zero
        drain = _fresh("drain", b.states)
        allpos = (POS,) * k
        dec = (-1,) * k
        for f in hop_src + [drain]:
            b.add(f, None, allpos, top, drain, dec, push)
            b.add(f, None, b.zero, top, acc, b.nop, push)


def cfgsc_lm_to_npcm(g: StateGrammar) -> CounterMachine:
    """Pushdown simulation of leftmost derivations with mirrored counters."""
    if g.control is not None:
        raise ValueError("controlled grammars have their own construction (ccfgs_to_npcm)")
    if g.counters.generalized:
        raise ValueError("degeneralize the grammar first")
    used = set(g.states) | set(g.nonterminals) | set(g.terminals)
    start = _fresh("start", used)
    acc = _fresh("acc", used)
    bottom = _fresh("Z0", used)
    states = set(g.states) | {start, acc}
    b = _Builder(states, g.counters.count)

    b.add(start, None, b.any, bottom, g.initial_state, b.nop, (g.axiom, bottom))
    for i, p in enumerate(g.productions):
        b.add(p.from_state, None, p.guard or b.any, p.lhs, p.to_state,
              p.update or b.nop, p.rhs, label=g.label(i))
    for q in sorted(g.states):
        for a in sorted(g.terminals):
            b.add(q, a, b.any, a, q, b.nop, ())
    _acceptance_hops(b, g, sorted(g.final_states), acc, bottom, (bottom,))

    return CounterMachine(
        states=frozenset(b.states),
        input_alphabet=g.terminals,
        counters=_machine_counters(g),
        stack_alphabet=frozenset(g.nonterminals | g.terminals | {bottom}),
        bottom=bottom,
        transitions=tuple(b.transitions),
        initial_state=start,
        final_states=frozenset({acc}),
    )


def rlgsc_to_ncm(g: StateGrammar) -> CounterMachine:
    """Stackless simulation: machine states pair the grammar state with the
    pending nonterminal (or none once the spine has terminated)."""
    if classify(g).shape != RIGHT_LINEAR:
        raise ValueError("rlgsc_to_ncm needs a right-linear grammar")
    if g.counters.generalized:
        raise ValueError("degeneralize the grammar first")
    if g.control is not None:
        raise ValueError("controlled grammars have their own construction")

    def st(q: str, a: str | None) -> str:
        return f"({q}|{a})" if a is not None else f"({q}|#)"

    states: set[str] = set()
    b = _Builder(states, g.counters.count)
    for i, p in enumerate(g.productions):
        src = st(p.from_state, p.lhs)
        spine = p.rhs[-1] if p.rhs and p.rhs[-1] in g.nonterminals else None
        reads = p.rhs[:-1] if spine is not None else p.rhs
        dst = st(p.to_state, spine)
        states.update({src, dst})
        guard = p.guard or b.any
        update = p.update or b.nop
        if not reads:
            b.add(src, None, guard, None, dst, update, label=g.label(i))
            continue
        cur = src
        for j, a in enumerate(reads):
            nxt = dst if j == len(reads) - 1 else b.mid()
            states.add(nxt)
            b.add(cur, a, guard if j == 0 else b.any, None, nxt,
                  update if j == 0 else b.nop, label=g.label(i) if j == 0 else "")
            cur = nxt
    initial = st(g.initial_state, g.axiom)
    states.add(initial)
    acc = _fresh("acc", states)
    states.add(acc)
    done = [st(f, None) for f in sorted(g.final_states)]
    states.update(done)
    _acceptance_hops(b, g, done, acc, None, ())
    return CounterMachine(
        states=frozenset(states),
        input_alphabet=g.terminals,
        counters=_machine_counters(g),
        stack_alphabet=None,
        bottom=None,
        transitions=tuple(b.transitions),
        initial_state=initial,
        final_states=frozenset({acc}),
    )


def lgsc_to_npcm1(g: StateGrammar) -> CounterMachine:
    """Linear grammars on a one-reversal stack.

    Terminal prefixes are read from the input directly; only the pending
    nonterminal and the terminal suffixes sit on the stack, so the height
    never grows again after the spine terminates.
    """
    if classify(g).shape not in (RIGHT_LINEAR, LINEAR):
        raise ValueError("lgsc_to_npcm1 needs a linear grammar")
    if g.counters.generalized:
        raise ValueError("degeneralize the grammar first")
    if g.control is not None:
        raise ValueError("controlled grammars have their own construction")
    used = set(g.states) | set(g.nonterminals) | set(g.terminals)
    start = _fresh("start", used)
    acc = _fresh("acc", used)
    bottom = _fresh("Z0", used)
    states = set(g.states) | {start, acc}
    b = _Builder(states, g.counters.count)

    b.add(start, None, b.any, bottom, g.initial_state, b.nop, (g.axiom, bottom))
    for i, p in enumerate(g.productions):
        nt_pos = [j for j, s in enumerate(p.rhs) if s in g.nonterminals]
        guard = p.guard or b.any
        update = p.update or b.nop
        if nt_pos:
            pos = nt_pos[0]
            reads, spine, suffix = p.rhs[:pos], p.rhs[pos], p.rhs[pos + 1:]
        else:
            reads, spine, suffix = p.rhs, None, ()
        cur = p.from_state
        first = True
        for a in reads:
            nxt = b.mid()
            states.add(nxt)
            b.add(cur, a, guard if first else b.any, p.lhs, nxt,
                  update if first else b.nop, (p.lhs,),
                  label=g.label(i) if first else "")
            cur = nxt
            first = False
        final_push = (spine,) + suffix if spine is not None else ()
        b.add(cur, None, guard if first else b.any, p.lhs, p.to_state,
              update if first else b.nop, final_push,
              label=g.label(i) if first else "")
    for q in sorted(g.states):
        for a in sorted(g.terminals):
            b.add(q, a, b.any, a, q, b.nop, ())
    _acceptance_hops(b, g, sorted(g.final_states), acc, bottom, (bottom,))
    return CounterMachine(
        states=frozenset(states),
        input_alphabet=g.terminals,
        counters=_machine_counters(g),
        stack_alphabet=frozenset(g.nonterminals | g.terminals | {bottom}),
        bottom=bottom,
        transitions=tuple(b.transitions),
        initial_state=start,
        final_states=frozenset({acc}),
    )


def ccfgs_to_npcm(g: StateGrammar) -> CounterMachine:
    """Simulate a classic controlled grammar: V1 on the stack, V2 counted.

    Works on the state-expanded grammar so the erase-once discipline is
    structural.  The hop into the accepting state demands every counter
    zero: a positive counter means a V2 occurrence was never erased, so
    the simulated sentential form was not terminal.
    """
    if g.control is None:
        raise ValueError("ccfgs_to_npcm needs a controlled grammar")
    if g.control_variant != CLASSIC:
        raise ValueError("no construction is known for the generalized V2-rule variants")
    ge = transform.expand_ccfgs_states(transform.make_finals_halting(g))
    v1, v2 = ge.control
    v2_sorted = sorted(v2)
    c_index = {c: j for j, c in enumerate(v2_sorted)}
    k = len(v2_sorted)

    used = set(ge.states) | set(ge.nonterminals) | set(ge.terminals)
    start = _fresh("start", used)
    acc = _fresh("acc", used)
    bottom = _fresh("Z0", used)
    states = set(ge.states) | {start, acc}
    b = _Builder(states, k)
    stack_syms = sorted(v1 | ge.terminals | {bottom})

    b.add(start, None, b.any, bottom, ge.initial_state, b.nop, (ge.axiom, bottom))
    for i, p in enumerate(ge.productions):
        counts = [0] * k
        for s in p.rhs:
            if s in c_index:
                counts[c_index[s]] += 1
        if p.lhs in v1:
            y = tuple(s for s in p.rhs if s not in v2)
            guard = list(b.any)
            update = list(counts)
            tops = [p.lhs]
            final_push = {p.lhs: y}
        else:
            j = c_index[p.lhs]
            guard = list(b.any)
            guard[j] = POS
            update = list(counts)
            update[j] -= 1
            tops = stack_syms
            final_push = {x: (x,) for x in tops}
        # one unit counter move per step, then the stack rewrite
        steps = b.unit_updates(tuple(update))
        for top in tops:
            cur = p.from_state
            first = True
            for n, u in enumerate(steps):
                last = n == len(steps) - 1
                nxt = p.to_state if last else b.mid()
                states.add(nxt)
                b.add(cur, None, tuple(guard) if first else b.any, top, nxt, u,
                      final_push[top] if last else (top,),
                      label=ge.label(i) if first else "")
                cur = nxt
                first = False
    for q in sorted(ge.states):
        for a in sorted(ge.terminals):
            b.add(q, a, b.any, a, q, b.nop, ())
    for f in sorted(ge.final_states):
        b.add(f, None, b.zero, bottom, acc, b.nop, (bottom,))

    return CounterMachine(
        states=frozenset(states),
        input_alphabet=ge.terminals,
        counters=CounterSpec.reversal(k),
        stack_alphabet=frozenset(stack_syms),
        bottom=bottom,
        transitions=tuple(b.transitions),
        initial_state=start,
        final_states=frozenset({acc}),
    )
