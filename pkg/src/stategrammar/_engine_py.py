"""Pure-Python search engine over lowered grammars and machines.

This is the fallback twin of the compiled kernel in `_kernel.pyx`: both
expose `grammar_search` and `machine_search` with identical semantics on
the integer-lowered representations built by `engine.lower_grammar` /
`engine.lower_machine`.  Keep the two in sync; the parity test suite
compares them on random inputs.

Configurations are explored breadth-first with a visited set, so the
result is the exact within-budget language: a word is reported iff some
accepting derivation stays inside every cap (steps, form length, counter
values, reversal bounds).
"""
from __future__ import annotations

from collections import deque

# mode codes
FREE, LEFTMOST, LEFTISH, CONTROLLED = 0, 1, 2, 3
# guard codes
G_ZERO, G_POS, G_ANY = 0, 1, 2
# acceptance codes
A_FINAL, A_FINAL_ZERO, A_EQUAL = 0, 1, 2
# counter discipline codes
D_NONE, D_REVERSAL, D_MONOTONIC = 0, 1, 2
# machine task codes
T_ACCEPTS, T_ENUM, T_EMPTY = 0, 1, 2


def _guard_ok(guard, counters):
    for g, c in zip(guard, counters):
        if g == G_ZERO and c != 0:
            return False
        if g == G_POS and c == 0:
            return False
    return True


def _counter_step(counters, phases, revs, update, discipline, bounds, max_counter):
    """Apply a counter update; return (counters, phases, revs) or None if the
    move is illegal (negative value, reversal bound exceeded) and a cap flag."""
    if not update:
        return counters, phases, revs, False
    new_c = []
    new_p = []
    new_r = []
    hit_cap = False
    for j, u in enumerate(update):
        c = counters[j] + u
        if c < 0:
            return None, None, None, False
        p = phases[j]
        r = revs[j]
        if u > 0:
            if p == 2:
                r += 1
                p = 1
            else:
                p = 1
        elif u < 0:
            if p == 1:
                r += 1
            p = 2
        if discipline == D_REVERSAL and r > bounds[j]:
            return None, None, None, False
        if c > max_counter:
            hit_cap = True
        new_c.append(c)
        new_p.append(p)
        new_r.append(r)
    if hit_cap:
        return None, None, None, True
    return tuple(new_c), tuple(new_p), tuple(new_r), False


def _positions(lg, mode, state, form):
    """Rewritable occurrence indices of `form` under the given mode."""
    is_nt = lg["is_nt"]
    if mode == FREE:
        return [i for i, s in enumerate(form) if is_nt[s]]
    if mode == LEFTMOST:
        for i, s in enumerate(form):
            if is_nt[s]:
                return [i]
        return []
    if mode == LEFTISH:
        buckets = lg["buckets"]
        n_symbols = lg["n_symbols"]
        for i, s in enumerate(form):
            if is_nt[s] and buckets[state * n_symbols + s]:
                return [i]
        return []
    # CONTROLLED: the leftmost V1 occurrence plus every V2 occurrence.
    is_v1 = lg["is_v1"]
    out = []
    seen_v1 = False
    for i, s in enumerate(form):
        if not is_nt[s]:
            continue
        if is_v1[s]:
            if not seen_v1:
                out.append(i)
                seen_v1 = True
        else:
            out.append(i)
    return out


def _accepting(lg, state, counters, form):
    is_nt = lg["is_nt"]
    for s in form:
        if is_nt[s]:
            return False
    if state not in lg["finals"]:
        return False
    acc = lg["acceptance"]
    if acc == A_FINAL_ZERO:
        return all(c == 0 for c in counters)
    if acc == A_EQUAL:
        return len(set(counters)) <= 1
    return True


def _target_feasible(form, target, is_nt):
    """Can a rewrite of `form` (nonterminals replaced by anything) equal `target`?

    Terminal runs of the form must embed into the target in order, with the
    leading run anchored at the start and the trailing run at the end.
    """
    runs = []
    cur = []
    all_terminal = True
    for s in form:
        if is_nt[s]:
            all_terminal = False
            runs.append(tuple(cur))
            cur = []
        else:
            cur.append(s)
    runs.append(tuple(cur))
    if all_terminal:
        return form == target
    pre, mids, suf = runs[0], runs[1:-1], runs[-1]
    n = len(target)
    if len(pre) + len(suf) > n:
        return False
    if target[: len(pre)] != pre or (suf and target[n - len(suf):] != suf):
        return False
    pos = len(pre)
    hi = n - len(suf)
    for block in mids:
        if not block:
            continue
        b = len(block)
        while pos + b <= hi and target[pos : pos + b] != block:
            pos += 1
        if pos + b > hi:
            return False
        pos += b
    return True


def grammar_search(
    lg,
    mode,
    max_steps,
    max_form_len,
    max_counter,
    max_words,
    target,
    want_final_counters,
    max_configs,
    max_word_len=0,
):
    """Bounded BFS over derivation configurations.

    Returns a dict with the accepted terminal words, an optional witness
    path to `target`, the counter vectors seen at accepting configurations,
    and flags telling which budget caps were actually hit.
    """
    k = lg["k"]
    discipline = lg["discipline"]
    bounds = lg["bounds"]
    buckets = lg["buckets"]
    n_symbols = lg["n_symbols"]
    is_nt = lg["is_nt"]
    rule_guard = lg["rule_guard"]
    rule_update = lg["rule_update"]
    rule_rhs = lg["rule_rhs"]
    rule_to = lg["rule_to"]
    adds_mask = lg["rule_adds_mask"]
    erase_mask = lg["rule_erase_mask"]

    zeros = (0,) * k
    start = (lg["initial_state"], zeros, zeros, zeros, 0, (lg["axiom"],))
    keys = [start]
    depth = [0]
    parent = [-1]
    via = [-1]
    visited = {start: 0}
    words = {}
    final_counters = set()
    witness_end = -1
    hit_form = hit_counter = hit_steps = hit_configs = hit_word = False

    head = 0
    while head < len(keys):
        state, counters, phases, revs, flags, form = keys[head]
        if _accepting(lg, state, counters, form):
            if want_final_counters:
                final_counters.add(counters)
            if target is not None:
                if form == target:
                    witness_end = head
                    break
            elif form not in words:
                words[form] = head
                if max_words and len(words) >= max_words:
                    break
        d = depth[head]
        if d >= max_steps:
            hit_steps = True
            head += 1
            continue
        for pos in _positions(lg, mode, state, form):
            sym = form[pos]
            for rule in buckets[state * n_symbols + sym]:
                if k:
                    if not _guard_ok(rule_guard[rule], counters):
                        continue
                    nc, np_, nr, capped = _counter_step(
                        counters, phases, revs, rule_update[rule], discipline, bounds, max_counter
                    )
                    if nc is None:
                        hit_counter = hit_counter or capped
                        continue
                else:
                    nc, np_, nr = counters, phases, revs
                if adds_mask[rule] & flags:
                    continue
                rhs = rule_rhs[rule]
                new_form = form[:pos] + rhs + form[pos + 1:]
                if len(new_form) > max_form_len:
                    hit_form = True
                    continue
                if max_word_len and sum(1 for s in new_form if not is_nt[s]) > max_word_len:
                    hit_word = True
                    continue
                if target is not None and not _target_feasible(new_form, target, is_nt):
                    continue
                cfg = (rule_to[rule], nc, np_, nr, flags | erase_mask[rule], new_form)
                if cfg in visited:
                    continue
                if len(keys) >= max_configs:
                    hit_configs = True
                    continue
                visited[cfg] = len(keys)
                keys.append(cfg)
                depth.append(d + 1)
                parent.append(head)
                via.append(rule)
        head += 1

    witness = None
    if witness_end >= 0:
        path = []
        i = witness_end
        while i >= 0:
            st, cs, ph, rv, fl, fm = keys[i]
            path.append((st, cs, ph, rv, fl, fm, via[i]))
            i = parent[i]
        witness = path[::-1]
    return {
        "words": list(words),
        "final_counters": sorted(final_counters),
        "witness": witness,
        "hit_form_cap": hit_form,
        "hit_counter_cap": hit_counter,
        "hit_step_cap": hit_steps,
        "hit_config_cap": hit_configs,
        "hit_word_cap": hit_word,
        "n_configs": len(keys),
    }


def grammar_successors(lg, mode, state, counters, phases, revs, flags, form):
    """One-step successors of a single configuration (no budget, no dedup).

    Used by the public `derive.step`; reversal bounds and nonnegativity are
    still enforced because illegal configurations are never produced.
    """
    k = lg["k"]
    out = []
    buckets = lg["buckets"]
    n_symbols = lg["n_symbols"]
    for pos in _positions(lg, mode, state, form):
        sym = form[pos]
        for rule in buckets[state * n_symbols + sym]:
            if k:
                if not _guard_ok(lg["rule_guard"][rule], counters):
                    continue
                nc, np_, nr, _ = _counter_step(
                    counters, phases, revs, lg["rule_update"][rule],
                    lg["discipline"], lg["bounds"], 1 << 62,
                )
                if nc is None:
                    continue
            else:
                nc, np_, nr = counters, phases, revs
            if lg["rule_adds_mask"][rule] & flags:
                continue
            rhs = lg["rule_rhs"][rule]
            new_form = form[:pos] + rhs + form[pos + 1:]
            out.append(
                (lg["rule_to"][rule], nc, np_, nr, flags | lg["rule_erase_mask"][rule], new_form, rule)
            )
    return out


def _trans_buckets(lm):
    return lm["buckets"]


def machine_search(
    lm,
    task,
    word,
    max_steps,
    max_len,
    max_counter,
    max_words,
    max_configs,
    max_word_len=0,
):
    """Bounded BFS over machine configurations.

    task 0: does the machine accept `word` (witness = transition indices)?
    task 1: enumerate accepted words, built left to right.
    task 2: emptiness search ignoring input symbols (cap on counters).

    `max_len` caps the stack; `max_word_len` caps enumerated words (falls
    back to `max_len` when 0).
    """
    if not max_word_len:
        max_word_len = max_len
    k = lm["k"]
    bounds = lm["bounds"]
    discipline = lm["discipline"]
    has_stack = lm["has_stack"]
    t_inp = lm["t_inp"]
    t_guard = lm["t_guard"]
    t_top = lm["t_top"]
    t_dst = lm["t_dst"]
    t_update = lm["t_update"]
    t_push = lm["t_push"]
    buckets = _trans_buckets(lm)
    finals = lm["finals"]

    zeros = (0,) * k
    stack0 = (lm["bottom"],) if has_stack else ()
    if task == T_ACCEPTS:
        start = (lm["initial"], 0, zeros, zeros, zeros, stack0)
    elif task == T_ENUM:
        start = (lm["initial"], (), zeros, zeros, zeros, stack0)
    else:
        start = (lm["initial"], None, zeros, zeros, zeros, stack0)

    keys = [start]
    depth = [0]
    parent = [-1]
    via = [-1]
    visited = {start: 0}
    words = {}
    witness_end = -1
    hit_len = hit_counter = hit_steps = hit_configs = hit_word = False

    head = 0
    while head < len(keys):
        state, prog, counters, phases, revs, stack = keys[head]
        if state in finals:
            if task == T_ACCEPTS:
                if prog == len(word):
                    witness_end = head
                    break
            elif task == T_ENUM:
                if prog not in words:
                    words[prog] = head
                    if max_words and len(words) >= max_words:
                        break
            else:
                witness_end = head
                break
        d = depth[head]
        if d >= max_steps:
            hit_steps = True
            head += 1
            continue
        for t in buckets[state]:
            inp = t_inp[t]
            if task == T_ACCEPTS:
                if inp >= 0:
                    if prog >= len(word) or word[prog] != inp:
                        continue
                    new_prog = prog + 1
                else:
                    new_prog = prog
            elif task == T_ENUM:
                if inp >= 0:
                    if len(prog) >= max_word_len:
                        hit_word = True
                        continue
                    new_prog = prog + (inp,)
                else:
                    new_prog = prog
            else:
                new_prog = None
            if has_stack:
                if not stack or stack[0] != t_top[t]:
                    continue
                new_stack = t_push[t] + stack[1:]
                if len(new_stack) > max_len:
                    hit_len = True
                    continue
            else:
                new_stack = stack
            if k:
                if not _guard_ok(t_guard[t], counters):
                    continue
                nc, np_, nr, capped = _counter_step(
                    counters, phases, revs, t_update[t], discipline, bounds, max_counter
                )
                if nc is None:
                    hit_counter = hit_counter or capped
                    continue
            else:
                nc, np_, nr = counters, phases, revs
            cfg = (t_dst[t], new_prog, nc, np_, nr, new_stack)
            if cfg in visited:
                continue
            if len(keys) >= max_configs:
                hit_configs = True
                continue
            visited[cfg] = len(keys)
            keys.append(cfg)
            depth.append(d + 1)
            parent.append(head)
            via.append(t)
        head += 1

    witness = None
    if witness_end >= 0:
        path = []
        i = witness_end
        while i > 0:
            path.append(via[i])
            i = parent[i]
        witness = path[::-1]
    return {
        "words": list(words),
        "witness": witness,
        "found": witness_end >= 0,
        "hit_len_cap": hit_len,
        "hit_counter_cap": hit_counter,
        "hit_step_cap": hit_steps,
        "hit_config_cap": hit_configs,
        "hit_word_cap": hit_word,
        "n_configs": len(keys),
    }
