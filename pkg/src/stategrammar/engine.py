"""Integer lowering of grammars and machines, and search-engine selection.

The bounded searches run on a lowered representation (symbols, states and
rules as small integers).  Two interchangeable engines consume it: the
compiled kernel built from `_kernel.pyx`, and the pure-Python fallback in
`_engine_py`.  The compiled one is picked at import time when available;
set STATEGRAMMAR_PURE=1 to force the fallback.
"""
from __future__ import annotations

import os
from functools import lru_cache

from . import _engine_py
from .core import (
    ANY,
    COUNTERS_EQUAL,
    FINAL_STATE_ZERO,
    MONOTONIC,
    NO_COUNTERS,
    POS,
    REVERSAL_BOUNDED,
    ZERO,
    StateGrammar,
)

MAX_CONFIGS = 4_000_000
UNBOUNDED_STEPS = 1 << 60

_GUARD_CODE = {ZERO: 0, POS: 1, ANY: 2}
_DISC_CODE = {NO_COUNTERS: 0, REVERSAL_BOUNDED: 1, MONOTONIC: 2}
_ACC_CODE = {"final_state": 0, FINAL_STATE_ZERO: 1, COUNTERS_EQUAL: 2}

MODE_CODE = {"free": 0, "leftmost": 1, "leftish": 2, "controlled": 3}


def _load_kernel():
    if os.environ.get("STATEGRAMMAR_PURE"):
        return None
    try:
        from . import _kernel  # compiled extension, optional

        return _kernel
    except ImportError:
        return None


KERNEL = _load_kernel()


def backend_name() -> str:
    return "compiled" if KERNEL is not None else "pure"


@lru_cache(maxsize=256)
def lower_grammar(g: StateGrammar) -> dict:
    symbols = sorted(g.nonterminals) + sorted(g.terminals)
    sym_id = {s: i for i, s in enumerate(symbols)}
    states = sorted(g.states)
    state_id = {s: i for i, s in enumerate(states)}
    n_symbols = len(symbols)
    n_states = len(states)
    is_nt = tuple(1 if s in g.nonterminals else 0 for s in symbols)

    if g.control is not None:
        v1, v2 = g.control
        v2_sorted = sorted(v2)
        flag_of = {c: i for i, c in enumerate(v2_sorted)}
        is_v1 = tuple(1 if s in v1 else 0 for s in symbols)
        n_flags = len(v2_sorted)
    else:
        flag_of = {}
        is_v1 = (0,) * n_symbols
        n_flags = 0

    buckets: list[list[int]] = [[] for _ in range(n_states * n_symbols)]
    rule_from, rule_lhs, rule_to = [], [], []
    rule_guard, rule_update, rule_rhs = [], [], []
    adds_mask, erase_mask = [], []
    for i, p in enumerate(g.productions):
        src = state_id[p.from_state]
        lhs = sym_id[p.lhs]
        rule_from.append(src)
        rule_lhs.append(lhs)
        rule_to.append(state_id[p.to_state])
        rule_guard.append(tuple(_GUARD_CODE[x] for x in p.guard))
        rule_update.append(tuple(p.update))
        rule_rhs.append(tuple(sym_id[s] for s in p.rhs))
        buckets[src * n_symbols + lhs].append(i)
        am = 0
        for s in p.rhs:
            if s in flag_of:
                am |= 1 << flag_of[s]
        adds_mask.append(am)
        em = 0
        if p.lhs in flag_of and p.lhs not in p.rhs:
            em |= 1 << flag_of[p.lhs]
        erase_mask.append(em)

    return {
        "k": g.counters.count,
        "discipline": _DISC_CODE[g.counters.discipline],
        "bounds": tuple(g.counters.bounds)
        if g.counters.discipline == REVERSAL_BOUNDED
        else (0,) * g.counters.count,
        "n_symbols": n_symbols,
        "n_states": n_states,
        "is_nt": is_nt,
        "axiom": sym_id[g.axiom],
        "initial_state": state_id[g.initial_state],
        "finals": frozenset(state_id[s] for s in g.final_states),
        "acceptance": _ACC_CODE[g.acceptance],
        "rule_from": tuple(rule_from),
        "rule_lhs": tuple(rule_lhs),
        "rule_to": tuple(rule_to),
        "rule_guard": tuple(rule_guard),
        "rule_update": tuple(rule_update),
        "rule_rhs": tuple(rule_rhs),
        "buckets": tuple(tuple(b) for b in buckets),
        "is_v1": is_v1,
        "n_flags": n_flags,
        "rule_adds_mask": tuple(adds_mask),
        "rule_erase_mask": tuple(erase_mask),
        "symbols": tuple(symbols),
        "state_names": tuple(states),
    }


def search_grammar(
    lg: dict,
    mode: int,
    max_steps: int,
    max_form_len: int,
    max_counter: int,
    max_words: int = 0,
    target: tuple[int, ...] | None = None,
    want_final_counters: bool = False,
    max_configs: int = MAX_CONFIGS,
    max_word_len: int = 0,
) -> dict:
    impl = KERNEL if KERNEL is not None else _engine_py
    return impl.grammar_search(
        lg, mode, max_steps, max_form_len, max_counter, max_words,
        target, want_final_counters, max_configs, max_word_len,
    )


def lower_machine(m) -> dict:
    """Lower a `machine.CounterMachine`; symbols are input ids, stack ids."""
    inputs = sorted(m.input_alphabet)
    inp_id = {s: i for i, s in enumerate(inputs)}
    states = sorted(m.states)
    state_id = {s: i for i, s in enumerate(states)}
    has_stack = m.stack_alphabet is not None
    if has_stack:
        stack_syms = sorted(m.stack_alphabet)
        stk_id = {s: i for i, s in enumerate(stack_syms)}
        bottom = stk_id[m.bottom]
    else:
        stack_syms = []
        stk_id = {}
        bottom = -1

    buckets: list[list[int]] = [[] for _ in states]
    t_src, t_inp, t_guard, t_top, t_dst, t_update, t_push = [], [], [], [], [], [], []
    for i, t in enumerate(m.transitions):
        src = state_id[t.src]
        buckets[src].append(i)
        t_src.append(src)
        t_inp.append(-1 if t.inp is None else inp_id[t.inp])
        t_guard.append(tuple(_GUARD_CODE[x] for x in t.guard))
        t_top.append(stk_id[t.top] if has_stack else -1)
        t_dst.append(state_id[t.dst])
        t_update.append(tuple(t.update))
        t_push.append(tuple(stk_id[s] for s in t.push) if has_stack else ())

    return {
        "k": m.counters.count,
        "discipline": _DISC_CODE[m.counters.discipline],
        "bounds": tuple(m.counters.bounds)
        if m.counters.discipline == REVERSAL_BOUNDED
        else (0,) * m.counters.count,
        "n_states": len(states),
        "initial": state_id[m.initial_state],
        "finals": frozenset(state_id[s] for s in m.final_states),
        "has_stack": 1 if has_stack else 0,
        "bottom": bottom,
        "n_inputs": len(inputs),
        "t_src": tuple(t_src),
        "t_inp": tuple(t_inp),
        "t_guard": tuple(t_guard),
        "t_top": tuple(t_top),
        "t_dst": tuple(t_dst),
        "t_update": tuple(t_update),
        "t_push": tuple(t_push),
        "buckets": tuple(tuple(b) for b in buckets),
        "inputs": tuple(inputs),
        "stack_symbols": tuple(stack_syms),
        "state_names": tuple(states),
    }


def search_machine(
    lm: dict,
    task: int,
    word: tuple[int, ...] | None,
    max_steps: int,
    max_len: int,
    max_counter: int,
    max_words: int = 0,
    max_configs: int = MAX_CONFIGS,
    max_word_len: int = 0,
) -> dict:
    impl = KERNEL if KERNEL is not None else _engine_py
    return impl.machine_search(
        lm, task, word, max_steps, max_len, max_counter, max_words, max_configs,
        max_word_len,
    )
