# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled search kernel: the fast twin of `_engine_py`.

Implements `grammar_search` and `machine_search` over the lowered integer
representations with identical semantics and iteration order, so results
(word sets, witnesses, cap flags) match the pure engine.  Configurations
are packed into bytes objects for dedup; the per-config work runs on C
arrays.
"""
from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc
from libc.string cimport memcpy

import array

cdef int G_ZERO = 0, G_POS = 1, G_ANY = 2
cdef int A_FINAL = 0, A_FINAL_ZERO = 1, A_EQUAL = 2
cdef int D_NONE = 0, D_REVERSAL = 1, D_MONOTONIC = 2


cdef struct IntVec:
    int* data
    long long n


cdef IntVec _alloc(long long n):
    cdef IntVec v
    v.n = n
    v.data = <int*> malloc(max(n, 1) * sizeof(int))
    return v


cdef void _fill(IntVec v, seq):
    cdef long long i = 0
    for x in seq:
        v.data[i] = x
        i += 1


cdef IntVec _flatten(seqs, IntVec offs, IntVec lens):
    cdef long long total = 0, i = 0, j
    for s in seqs:
        offs.data[i] = total
        lens.data[i] = len(s)
        total += len(s)
        i += 1
    cdef IntVec flat = _alloc(total)
    j = 0
    for s in seqs:
        for x in s:
            flat.data[j] = x
            j += 1
    return flat


cdef inline bytes _pack(int state, long long flags, int k,
                        int* counters, char* phases, char* revs,
                        int flen, int* form, char* scratch):
    cdef long long pos = 0
    cdef int i
    (<int*> (scratch + pos))[0] = state
    pos += sizeof(int)
    (<long long*> (scratch + pos))[0] = flags
    pos += sizeof(long long)
    memcpy(scratch + pos, counters, k * sizeof(int))
    pos += k * sizeof(int)
    memcpy(scratch + pos, phases, k)
    pos += k
    memcpy(scratch + pos, revs, k)
    pos += k
    (<int*> (scratch + pos))[0] = flen
    pos += sizeof(int)
    memcpy(scratch + pos, form, flen * sizeof(int))
    pos += flen * sizeof(int)
    return PyBytes_FromStringAndSize(scratch, pos)


cdef inline void _unpack(bytes key, int k, int* state, long long* flags,
                         int* counters, char* phases, char* revs,
                         int* flen, int* form):
    cdef const char* p = key
    cdef long long pos = 0
    state[0] = (<const int*> (p + pos))[0]
    pos += sizeof(int)
    flags[0] = (<const long long*> (p + pos))[0]
    pos += sizeof(long long)
    memcpy(counters, p + pos, k * sizeof(int))
    pos += k * sizeof(int)
    memcpy(phases, p + pos, k)
    pos += k
    memcpy(revs, p + pos, k)
    pos += k
    flen[0] = (<const int*> (p + pos))[0]
    pos += sizeof(int)
    memcpy(form, p + pos, flen[0] * sizeof(int))


cdef inline int _counter_step(int k, int discipline, int* bounds,
                              const int* counters, const char* phases, const char* revs,
                              const int* update,
                              int* nc, char* np, char* nr,
                              long long max_counter, bint* hit_cap):
    """Apply an update; returns 0 when illegal (negative / reversal bound)."""
    cdef int j, u, c, p, r
    cdef bint capped = False
    for j in range(k):
        u = update[j]
        c = counters[j] + u
        if c < 0:
            return 0
        p = phases[j]
        r = revs[j]
        if u > 0:
            if p == 2:
                r += 1
            p = 1
        elif u < 0:
            if p == 1:
                r += 1
            p = 2
        if discipline == D_REVERSAL and r > bounds[j]:
            return 0
        if c > max_counter:
            capped = True
        nc[j] = c
        np[j] = <char> p
        nr[j] = <char> r
    if capped:
        hit_cap[0] = True
        return 0
    return 1


cdef bint _target_feasible(int flen, int* form, tuple target, char* is_nt):
    """Terminal runs of the form must embed into the target in order."""
    cdef int n = len(target)
    cdef int i, j, b, pos, hi, i2
    cdef bint all_terminal = True
    for i in range(flen):
        if is_nt[form[i]]:
            all_terminal = False
            break
    if all_terminal:
        if flen != n:
            return False
        for i in range(flen):
            if form[i] != <int> target[i]:
                return False
        return True
    # leading run anchored at 0
    i = 0
    while i < flen and not is_nt[form[i]]:
        if i >= n or form[i] != <int> target[i]:
            return False
        i += 1
    pos = i
    # trailing run anchored at the end
    j = flen
    while j > i and not is_nt[form[j - 1]]:
        j -= 1
    cdef int suf = flen - j
    if pos + suf > n:
        return False
    for b in range(suf):
        if form[j + b] != <int> target[n - suf + b]:
            return False
    hi = n - suf
    # middle runs placed greedily left to right
    cdef int run_start, run_len, t, ok
    i2 = i
    while i2 < j:
        if is_nt[form[i2]]:
            i2 += 1
            continue
        run_start = i2
        while i2 < j and not is_nt[form[i2]]:
            i2 += 1
        run_len = i2 - run_start
        while True:
            if pos + run_len > hi:
                return False
            ok = 1
            for t in range(run_len):
                if <int> target[pos + t] != form[run_start + t]:
                    ok = 0
                    break
            if ok:
                pos += run_len
                break
            pos += 1
    return True


def grammar_search(lg, int mode, long long max_steps, int max_form_len,
                   long long max_counter, long long max_words, target,
                   bint want_final_counters, long long max_configs,
                   int max_word_len=0):
    cdef int k = lg["k"]
    cdef int discipline = lg["discipline"]
    cdef int n_symbols = lg["n_symbols"]
    cdef int n_states = lg["n_states"]
    cdef int acceptance = lg["acceptance"]
    cdef int n_rules = len(lg["rule_from"])
    cdef int axiom = lg["axiom"]
    cdef int initial_state = lg["initial_state"]

    cdef IntVec bounds = _alloc(k)
    _fill(bounds, lg["bounds"])
    cdef IntVec is_nt_v = _alloc(n_symbols)
    _fill(is_nt_v, lg["is_nt"])
    cdef char* is_nt = <char*> malloc(max(n_symbols, 1))
    cdef int i
    for i in range(n_symbols):
        is_nt[i] = <char> is_nt_v.data[i]
    cdef IntVec is_v1_v = _alloc(n_symbols)
    _fill(is_v1_v, lg["is_v1"])

    cdef char* finals = <char*> malloc(max(n_states, 1))
    for i in range(n_states):
        finals[i] = 0
    for s in lg["finals"]:
        finals[<int> s] = 1

    cdef IntVec rule_to = _alloc(n_rules)
    _fill(rule_to, lg["rule_to"])
    cdef IntVec guard_flat = _alloc(n_rules * k)
    cdef IntVec upd_flat = _alloc(n_rules * k)
    cdef long long fi = 0
    for g in lg["rule_guard"]:
        for x in g:
            guard_flat.data[fi] = x
            fi += 1
    fi = 0
    for u in lg["rule_update"]:
        for x in u:
            upd_flat.data[fi] = x
            fi += 1
    cdef IntVec rhs_off = _alloc(n_rules)
    cdef IntVec rhs_len = _alloc(n_rules)
    cdef IntVec rhs_flat = _flatten(lg["rule_rhs"], rhs_off, rhs_len)

    cdef long long nb = n_states * n_symbols
    cdef IntVec bucket_off = _alloc(nb)
    cdef IntVec bucket_len = _alloc(nb)
    cdef IntVec bucket_flat = _flatten(lg["buckets"], bucket_off, bucket_len)

    adds_list = lg["rule_adds_mask"]
    erase_list = lg["rule_erase_mask"]
    cdef long long* adds_mask = <long long*> malloc(max(n_rules, 1) * sizeof(long long))
    cdef long long* erase_mask = <long long*> malloc(max(n_rules, 1) * sizeof(long long))
    for i in range(n_rules):
        adds_mask[i] = adds_list[i]
        erase_mask[i] = erase_list[i]

    # scratch buffers
    cdef int cap_form = max_form_len + 2
    cdef int* counters = <int*> malloc(max(k, 1) * sizeof(int))
    cdef char* phases = <char*> malloc(max(k, 1))
    cdef char* revs = <char*> malloc(max(k, 1))
    cdef int* form = <int*> malloc(cap_form * sizeof(int))
    cdef int* nc = <int*> malloc(max(k, 1) * sizeof(int))
    cdef char* np_ = <char*> malloc(max(k, 1))
    cdef char* nr = <char*> malloc(max(k, 1))
    cdef int* new_form = <int*> malloc(cap_form * sizeof(int))
    cdef long long scratch_sz = sizeof(int) + sizeof(long long) + k * sizeof(int) + 2 * k + sizeof(int) + cap_form * sizeof(int)
    cdef char* scratch = <char*> malloc(scratch_sz)

    cdef int state, flen, pos, sym, r, j, t, nlen, term_count
    cdef long long flags, nflags
    cdef bint hit_form = False, hit_counter = False, hit_steps = False
    cdef bint hit_configs = False, hit_word = False
    cdef bint accepting, equal_ok, is_target

    for j in range(k):
        counters[j] = 0
        phases[j] = 0
        revs[j] = 0
    form[0] = axiom
    cdef bytes start = _pack(initial_state, 0, k, counters, phases, revs, 1, form, scratch)

    keys = [start]
    visited = {start: 0}
    depth = array.array("q", [0])
    parent = array.array("q", [-1])
    via = array.array("i", [-1])
    words = {}
    final_counters = set()
    cdef long long head = 0, witness_end = -1, d
    cdef tuple tgt = target if target is not None else None
    cdef bint has_target = target is not None

    cdef long long bi, b0, bl
    cdef int first_v1, p2

    while head < len(keys):
        key = <bytes> keys[head]
        _unpack(key, k, &state, &flags, counters, phases, revs, &flen, form)

        # acceptance
        accepting = True
        for i in range(flen):
            if is_nt[form[i]]:
                accepting = False
                break
        if accepting and not finals[state]:
            accepting = False
        if accepting and acceptance == A_FINAL_ZERO:
            for j in range(k):
                if counters[j] != 0:
                    accepting = False
                    break
        if accepting and acceptance == A_EQUAL:
            for j in range(1, k):
                if counters[j] != counters[0]:
                    accepting = False
                    break
        if accepting:
            if want_final_counters:
                final_counters.add(tuple([counters[j] for j in range(k)]))
            if has_target:
                is_target = flen == len(tgt)
                if is_target:
                    for i in range(flen):
                        if form[i] != <int> tgt[i]:
                            is_target = False
                            break
                if is_target:
                    witness_end = head
                    break
            else:
                w = tuple([form[i] for i in range(flen)])
                if w not in words:
                    words[w] = head
                    if max_words and len(words) >= max_words:
                        break

        d = depth[head]
        if d >= max_steps:
            hit_steps = True
            head += 1
            continue

        # candidate positions under the mode
        for pos in range(flen):
            sym = form[pos]
            if not is_nt[sym]:
                continue
            if mode == 1:  # leftmost: only the first nonterminal
                pass
            elif mode == 2:  # leftish: first with a nonempty bucket
                if bucket_len.data[state * n_symbols + sym] == 0:
                    continue
            elif mode == 3:  # controlled: leftmost V1 plus every V2
                if is_v1_v.data[sym]:
                    first_v1 = -1
                    for p2 in range(pos):
                        if is_nt[form[p2]] and is_v1_v.data[form[p2]]:
                            first_v1 = p2
                            break
                    if first_v1 >= 0:
                        continue
            bi = state * n_symbols + sym
            b0 = bucket_off.data[bi]
            bl = bucket_len.data[bi]
            for t in range(bl):
                r = bucket_flat.data[b0 + t]
                if k:
                    ok = True
                    for j in range(k):
                        gd = guard_flat.data[r * k + j]
                        if gd == G_ZERO and counters[j] != 0:
                            ok = False
                            break
                        if gd == G_POS and counters[j] == 0:
                            ok = False
                            break
                    if not ok:
                        continue
                    if not _counter_step(k, discipline, bounds.data, counters,
                                         phases, revs, &upd_flat.data[r * k],
                                         nc, np_, nr, max_counter, &hit_counter):
                        continue
                else:
                    pass
                if adds_mask[r] & flags:
                    continue
                nlen = flen - 1 + rhs_len.data[r]
                if nlen > max_form_len:
                    hit_form = True
                    continue
                for i in range(pos):
                    new_form[i] = form[i]
                for i in range(rhs_len.data[r]):
                    new_form[pos + i] = rhs_flat.data[rhs_off.data[r] + i]
                for i in range(pos + 1, flen):
                    new_form[i - 1 + rhs_len.data[r]] = form[i]
                if max_word_len:
                    term_count = 0
                    for i in range(nlen):
                        if not is_nt[new_form[i]]:
                            term_count += 1
                    if term_count > max_word_len:
                        hit_word = True
                        continue
                if has_target and not _target_feasible(nlen, new_form, tgt, is_nt):
                    continue
                nflags = flags | erase_mask[r]
                if k:
                    cfg = _pack(rule_to.data[r], nflags, k, nc, np_, nr, nlen, new_form, scratch)
                else:
                    cfg = _pack(rule_to.data[r], nflags, k, counters, phases, revs, nlen, new_form, scratch)
                if cfg in visited:
                    continue
                if len(keys) >= max_configs:
                    hit_configs = True
                    continue
                visited[cfg] = len(keys)
                keys.append(cfg)
                depth.append(d + 1)
                parent.append(head)
                via.append(r)
            if mode == 1:
                break  # only the leftmost nonterminal
            if mode == 2:
                break  # only the leftmost applicable nonterminal
        head += 1

    witness = None
    cdef long long wi
    if witness_end >= 0:
        path = []
        wi = witness_end
        while wi >= 0:
            key = <bytes> keys[wi]
            _unpack(key, k, &state, &flags, counters, phases, revs, &flen, form)
            path.append((
                state,
                tuple([counters[j] for j in range(k)]),
                tuple([phases[j] for j in range(k)]),
                tuple([revs[j] for j in range(k)]),
                flags,
                tuple([form[i] for i in range(flen)]),
                via[wi],
            ))
            wi = parent[wi]
        path.reverse()
        witness = path

    result = {
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
    free(bounds.data); free(is_nt_v.data); free(is_nt); free(is_v1_v.data)
    free(finals); free(rule_to.data); free(guard_flat.data); free(upd_flat.data)
    free(rhs_off.data); free(rhs_len.data); free(rhs_flat.data)
    free(bucket_off.data); free(bucket_len.data); free(bucket_flat.data)
    free(adds_mask); free(erase_mask)
    free(counters); free(phases); free(revs); free(form)
    free(nc); free(np_); free(nr); free(new_form); free(scratch)
    return result


cdef inline bytes _mpack(int state, int prog_kind, int prog, int wlen, int* word,
                         int k, int* counters, char* phases, char* revs,
                         int slen, int* stack, char* scratch):
    cdef long long pos = 0
    (<int*> (scratch + pos))[0] = state
    pos += sizeof(int)
    (<int*> (scratch + pos))[0] = prog if prog_kind == 0 else wlen
    pos += sizeof(int)
    if prog_kind == 1:
        memcpy(scratch + pos, word, wlen * sizeof(int))
        pos += wlen * sizeof(int)
    memcpy(scratch + pos, counters, k * sizeof(int))
    pos += k * sizeof(int)
    memcpy(scratch + pos, phases, k)
    pos += k
    memcpy(scratch + pos, revs, k)
    pos += k
    (<int*> (scratch + pos))[0] = slen
    pos += sizeof(int)
    memcpy(scratch + pos, stack, slen * sizeof(int))
    pos += slen * sizeof(int)
    return PyBytes_FromStringAndSize(scratch, pos)


cdef inline void _munpack(bytes key, int prog_kind, int k,
                          int* state, int* prog, int* wlen, int* word,
                          int* counters, char* phases, char* revs,
                          int* slen, int* stack):
    cdef const char* p = key
    cdef long long pos = 0
    state[0] = (<const int*> (p + pos))[0]
    pos += sizeof(int)
    if prog_kind == 0:
        prog[0] = (<const int*> (p + pos))[0]
        wlen[0] = 0
        pos += sizeof(int)
    else:
        wlen[0] = (<const int*> (p + pos))[0]
        pos += sizeof(int)
        memcpy(word, p + pos, wlen[0] * sizeof(int))
        pos += wlen[0] * sizeof(int)
    memcpy(counters, p + pos, k * sizeof(int))
    pos += k * sizeof(int)
    memcpy(phases, p + pos, k)
    pos += k
    memcpy(revs, p + pos, k)
    pos += k
    slen[0] = (<const int*> (p + pos))[0]
    pos += sizeof(int)
    memcpy(stack, p + pos, slen[0] * sizeof(int))


def machine_search(lm, int task, word, long long max_steps, int max_len,
                   long long max_counter, long long max_words,
                   long long max_configs, int max_word_len=0):
    if not max_word_len:
        max_word_len = max_len
    cdef int k = lm["k"]
    cdef int discipline = lm["discipline"]
    cdef int n_states = lm["n_states"]
    cdef int has_stack = lm["has_stack"]
    cdef int bottom = lm["bottom"]
    cdef int initial = lm["initial"]
    cdef int n_trans = len(lm["t_src"])

    cdef IntVec bounds = _alloc(k)
    _fill(bounds, lm["bounds"])
    cdef char* finals = <char*> malloc(max(n_states, 1))
    cdef int i
    for i in range(n_states):
        finals[i] = 0
    for s in lm["finals"]:
        finals[<int> s] = 1
    cdef IntVec t_inp = _alloc(n_trans)
    _fill(t_inp, lm["t_inp"])
    cdef IntVec t_top = _alloc(n_trans)
    _fill(t_top, lm["t_top"])
    cdef IntVec t_dst = _alloc(n_trans)
    _fill(t_dst, lm["t_dst"])
    cdef IntVec guard_flat = _alloc(n_trans * k)
    cdef IntVec upd_flat = _alloc(n_trans * k)
    cdef long long fi = 0
    for g in lm["t_guard"]:
        for x in g:
            guard_flat.data[fi] = x
            fi += 1
    fi = 0
    for u in lm["t_update"]:
        for x in u:
            upd_flat.data[fi] = x
            fi += 1
    cdef IntVec push_off = _alloc(n_trans)
    cdef IntVec push_len = _alloc(n_trans)
    cdef IntVec push_flat = _flatten(lm["t_push"], push_off, push_len)
    cdef IntVec bucket_off = _alloc(n_states)
    cdef IntVec bucket_len = _alloc(n_states)
    cdef IntVec bucket_flat = _flatten(lm["buckets"], bucket_off, bucket_len)

    cdef int prog_kind = 1 if task == 1 else 0  # enum carries the emitted word
    cdef int in_len = len(word) if word is not None else 0
    cdef int* in_arr = <int*> malloc(max(in_len, 1) * sizeof(int))
    if word is not None:
        for i in range(in_len):
            in_arr[i] = word[i]

    cdef int cap_w = max_word_len + 2
    cdef int cap_s = max_len + 2
    cdef int* wbuf = <int*> malloc(cap_w * sizeof(int))
    cdef int* nwbuf = <int*> malloc(cap_w * sizeof(int))
    cdef int* sbuf = <int*> malloc(cap_s * sizeof(int))
    cdef int* nsbuf = <int*> malloc(cap_s * sizeof(int))
    cdef int* counters = <int*> malloc(max(k, 1) * sizeof(int))
    cdef char* phases = <char*> malloc(max(k, 1))
    cdef char* revs = <char*> malloc(max(k, 1))
    cdef int* nc = <int*> malloc(max(k, 1) * sizeof(int))
    cdef char* np_ = <char*> malloc(max(k, 1))
    cdef char* nr = <char*> malloc(max(k, 1))
    cdef long long scratch_sz = 2 * sizeof(int) + cap_w * sizeof(int) + k * sizeof(int) + 2 * k + sizeof(int) + cap_s * sizeof(int)
    cdef char* scratch = <char*> malloc(scratch_sz)

    cdef int state, prog, wlen, slen, new_prog, new_wlen, new_slen, inp, t, ti, j
    cdef bint hit_len = False, hit_counter = False, hit_steps = False
    cdef bint hit_configs = False, hit_word = False
    cdef bint ok

    for j in range(k):
        counters[j] = 0
        phases[j] = 0
        revs[j] = 0
    slen = 1 if has_stack else 0
    if has_stack:
        sbuf[0] = bottom
    cdef bytes start = _mpack(initial, prog_kind, 0, 0, wbuf, k, counters,
                              phases, revs, slen, sbuf, scratch)
    keys = [start]
    visited = {start: 0}
    depth = array.array("q", [0])
    parent = array.array("q", [-1])
    via = array.array("i", [-1])
    words = {}
    cdef long long head = 0, witness_end = -1, d
    cdef long long b0, bl

    while head < len(keys):
        key = <bytes> keys[head]
        _munpack(key, prog_kind, k, &state, &prog, &wlen, wbuf,
                 counters, phases, revs, &slen, sbuf)
        if finals[state]:
            if task == 0:
                if prog == in_len:
                    witness_end = head
                    break
            elif task == 1:
                w = tuple([wbuf[i] for i in range(wlen)])
                if w not in words:
                    words[w] = head
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
        b0 = bucket_off.data[state]
        bl = bucket_len.data[state]
        for ti in range(bl):
            t = bucket_flat.data[b0 + ti]
            inp = t_inp.data[t]
            new_prog = prog
            new_wlen = wlen
            if task == 0:
                if inp >= 0:
                    if prog >= in_len or in_arr[prog] != inp:
                        continue
                    new_prog = prog + 1
            elif task == 1:
                if inp >= 0:
                    if wlen >= max_word_len:
                        hit_word = True
                        continue
                    new_wlen = wlen + 1
            if has_stack:
                if slen == 0 or sbuf[0] != t_top.data[t]:
                    continue
                new_slen = slen - 1 + push_len.data[t]
                if new_slen > max_len:
                    hit_len = True
                    continue
            else:
                new_slen = slen
            if k:
                ok = True
                for j in range(k):
                    gd = guard_flat.data[t * k + j]
                    if gd == G_ZERO and counters[j] != 0:
                        ok = False
                        break
                    if gd == G_POS and counters[j] == 0:
                        ok = False
                        break
                if not ok:
                    continue
                if not _counter_step(k, discipline, bounds.data, counters,
                                     phases, revs, &upd_flat.data[t * k],
                                     nc, np_, nr, max_counter, &hit_counter):
                    continue
            if task == 1 and inp >= 0:
                for i in range(wlen):
                    nwbuf[i] = wbuf[i]
                nwbuf[wlen] = inp
            elif task == 1:
                for i in range(wlen):
                    nwbuf[i] = wbuf[i]
            if has_stack:
                for i in range(push_len.data[t]):
                    nsbuf[i] = push_flat.data[push_off.data[t] + i]
                for i in range(1, slen):
                    nsbuf[push_len.data[t] + i - 1] = sbuf[i]
            cfg = _mpack(t_dst.data[t], prog_kind, new_prog, new_wlen,
                         nwbuf if task == 1 else wbuf,
                         k, nc if k else counters,
                         np_ if k else phases, nr if k else revs,
                         new_slen, nsbuf if has_stack else sbuf, scratch)
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
    cdef long long wi
    if witness_end >= 0:
        path = []
        wi = witness_end
        while wi > 0:
            path.append(via[wi])
            wi = parent[wi]
        path.reverse()
        witness = path

    result = {
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
    free(bounds.data); free(finals); free(t_inp.data); free(t_top.data)
    free(t_dst.data); free(guard_flat.data); free(upd_flat.data)
    free(push_off.data); free(push_len.data); free(push_flat.data)
    free(bucket_off.data); free(bucket_len.data); free(bucket_flat.data)
    free(wbuf); free(nwbuf); free(sbuf); free(nsbuf); free(in_arr)
    free(counters); free(phases); free(revs); free(nc); free(np_); free(nr)
    free(scratch)
    return result
