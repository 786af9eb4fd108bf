"""Derivation relations and bounded language exploration.

Five ways of rewriting a sentential form are supported:

* free         -- any nonterminal occurrence with a matching rule,
* leftmost     -- only the occurrence with an all-terminal prefix,
* leftish      -- the leftmost occurrence whose nonterminal has any rule
                  from the current state (counter-free grammars only),
* circular     -- one atomic sweep rewrites every occurrence left to
                  right, chaining states (counter-free only),
* controlled   -- leftmost-in-V1 plus free V2 rewriting with the
                  erase-once rule for V2 symbols.

`enumerate_words` and `member` perform breadth-first search over
configurations and return the exact within-budget language slice; budgets
cap derivation steps, sentential-form length and counter values
conjunctively.  Counter reversal bounds and nonnegativity are enforced on
every step, so illegal configurations are never produced.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import _engine_py, engine
from .core import MONOTONIC, NO_COUNTERS, StateGrammar

FREE = "free"
LEFTMOST = "leftmost"
LEFTISH = "leftish"
CIRCULAR = "circular"
CONTROLLED = "controlled"
MODES = (FREE, LEFTMOST, LEFTISH, CIRCULAR, CONTROLLED)

NOT_STARTED, INCREASING, DECREASING = 0, 1, 2


@dataclass(frozen=True)
class Budget:
    """Conjunctive caps for the bounded searches.

    `max_words`, when set, stops the search after that many distinct words
    (a deliberate under-approximation; all other caps stay exact).
    `max_word_len` prunes configurations holding more terminals than that:
    they can never derive a shorter word, so length-bounded slices are
    unaffected while the search space shrinks drastically.
    """

    max_steps: int
    max_form_len: int
    max_counter: int = 0
    max_words: int | None = None
    max_word_len: int | None = None

    def __post_init__(self):
        if self.max_steps < 1 or self.max_form_len < 1:
            raise ValueError("step and form-length caps must be >= 1")
        if self.max_counter < 0:
            raise ValueError("counter cap must be >= 0")

    def grown(self) -> "Budget":
        return Budget(
            self.max_steps * 2,
            self.max_form_len + 6,
            max(self.max_counter * 2, 1),
            self.max_words,
            self.max_word_len,
        )


@dataclass(frozen=True)
class Config:
    """A sentential form plus the full counter state.

    `erased` carries the erase-once history flags for controlled grammars,
    indexed by the sorted V2 alphabet; it stays empty elsewhere.
    """

    state: str
    counters: tuple[int, ...]
    phases: tuple[int, ...]
    reversals: tuple[int, ...]
    form: tuple[str, ...]
    erased: tuple[bool, ...] = ()


@dataclass(frozen=True)
class Derivation:
    """A replayable derivation: configs chained by the applied rule indices.

    `rules[i]` holds the production indices applied between `configs[i]`
    and `configs[i+1]` (a single index normally, the whole chain for one
    circular sweep).
    """

    configs: tuple[Config, ...]
    rules: tuple[tuple[int, ...], ...]

    def index(self, g: StateGrammar) -> int:
        nts = g.nonterminals
        return max(sum(1 for s in c.form if s in nts) for c in self.configs)

    def words_applied(self) -> list[int]:
        return [r for step in self.rules for r in step]

    def replay_ok(self, g: StateGrammar, mode: str) -> bool:
        for i, applied in enumerate(self.rules):
            if mode == CIRCULAR:
                nxt = sweep_circular(g, self.configs[i])
                if (self.configs[i + 1], applied) not in nxt:
                    return False
            else:
                nxt = step(g, mode, self.configs[i])
                if (self.configs[i + 1], applied[0]) not in nxt:
                    return False
        return True

    def format(self, g: StateGrammar) -> str:
        lines = [_format_config(self.configs[0])]
        for applied, cfg in zip(self.rules, self.configs[1:]):
            names = ",".join(g.label(r) for r in applied)
            lines.append(f"  --{names}--> {_format_config(cfg)}")
        return "\n".join(lines)


def _format_config(c: Config) -> str:
    form = " ".join(c.form) if c.form else "eps"
    if c.counters:
        return f"({c.state}, [{','.join(map(str, c.counters))}], {form})"
    return f"({c.state}, {form})"


@dataclass(frozen=True)
class ExploreResult:
    words: frozenset[tuple[str, ...]]
    witness: Derivation | None
    final_counters: frozenset[tuple[int, ...]]
    hit_form_cap: bool
    hit_counter_cap: bool
    hit_step_cap: bool
    hit_config_cap: bool
    hit_word_cap: bool
    n_configs: int

    @property
    def exhaustive(self) -> bool:
        """True when no budget cap pruned anything: the result is the whole language."""
        return not (
            self.hit_form_cap
            or self.hit_counter_cap
            or self.hit_step_cap
            or self.hit_config_cap
            or self.hit_word_cap
        )

    @property
    def slice_exhaustive(self) -> bool:
        """Like `exhaustive`, but tolerating the word-length prune: the words
        not longer than the prune are all present."""
        return not (
            self.hit_form_cap or self.hit_counter_cap or self.hit_step_cap or self.hit_config_cap
        )


def check_mode(g: StateGrammar, mode: str) -> None:
    if mode not in MODES:
        raise ValueError(f"unknown derivation mode {mode!r}")
    if mode in (LEFTISH, CIRCULAR) and g.counters.discipline != NO_COUNTERS:
        raise ValueError(f"{mode} derivations are undefined for grammars with counters")
    if mode == CONTROLLED and g.control is None:
        raise ValueError("controlled derivations need a V1/V2 split")


def initial_config(g: StateGrammar) -> Config:
    k = g.counters.count
    zeros = (0,) * k
    flags = (False,) * len(g.control[1]) if g.control is not None else ()
    return Config(g.initial_state, zeros, zeros, zeros, (g.axiom,), flags)


def _config_to_ids(g: StateGrammar, lg: dict, c: Config):
    sym_id = {s: i for i, s in enumerate(lg["symbols"])}
    state_id = {s: i for i, s in enumerate(lg["state_names"])}
    flags = 0
    for i, b in enumerate(c.erased):
        if b:
            flags |= 1 << i
    return (
        state_id[c.state],
        c.counters,
        c.phases,
        c.reversals,
        flags,
        tuple(sym_id[s] for s in c.form),
    )


def _config_from_ids(g: StateGrammar, lg: dict, state, counters, phases, revs, flags, form) -> Config:
    n_flags = lg["n_flags"]
    erased = tuple(bool(flags >> i & 1) for i in range(n_flags))
    return Config(
        lg["state_names"][state],
        tuple(counters),
        tuple(phases),
        tuple(revs),
        tuple(lg["symbols"][s] for s in form),
        erased,
    )


def step(g: StateGrammar, mode: str, c: Config) -> list[tuple[Config, int]]:
    """Exact successor set of one configuration under the mode's relation."""
    check_mode(g, mode)
    if mode == CIRCULAR:
        raise ValueError("circular derivations step by whole sweeps; use sweep_circular")
    lg = engine.lower_grammar(g)
    ids = _config_to_ids(g, lg, c)
    out = []
    for state, nc, np_, nr, flags, form, rule in _engine_py.grammar_successors(
        lg, engine.MODE_CODE[mode], *ids
    ):
        out.append((_config_from_ids(g, lg, state, nc, np_, nr, flags, form), rule))
    return out


def sweep_circular(g: StateGrammar, c: Config) -> list[tuple[Config, tuple[int, ...]]]:
    """All results of one full left-to-right sweep rewriting every occurrence.

    The sweep rewrites exactly the occurrences present when it starts;
    symbols introduced mid-sweep wait for the next sweep.  An occurrence
    with no applicable rule at its turn kills that branch.
    """
    if g.counters.discipline != NO_COUNTERS:
        raise ValueError("circular derivations are undefined for grammars with counters")
    positions = [i for i, s in enumerate(c.form) if s in g.nonterminals]
    if not positions:
        raise ValueError("a circular sweep needs at least one nonterminal occurrence")
    by_state_lhs: dict[tuple[str, str], list[int]] = {}
    for i, p in enumerate(g.productions):
        by_state_lhs.setdefault((p.from_state, p.lhs), []).append(i)

    out: list[tuple[Config, tuple[int, ...]]] = []

    def rec(form: tuple[str, ...], state: str, idx: int, offset: int, labels: tuple[int, ...]):
        if idx == len(positions):
            out.append((Config(state, (), (), (), form), labels))
            return
        pos = positions[idx] + offset
        sym = form[pos]
        for r in by_state_lhs.get((state, sym), ()):
            rhs = g.productions[r].rhs
            rec(
                form[:pos] + rhs + form[pos + 1:],
                g.productions[r].to_state,
                idx + 1,
                offset + len(rhs) - 1,
                labels + (r,),
            )

    rec(c.form, c.state, 0, 0, ())
    return out


def _explore_circular(g: StateGrammar, budget: Budget, target) -> ExploreResult:
    start = initial_config(g)
    keys = [start]
    parent = [-1]
    via: list[tuple[int, ...]] = [()]
    depth = [0]
    seen = {start: 0}
    words: dict[tuple[str, ...], int] = {}
    witness_end = -1
    hit_form = hit_steps = False
    nts = g.nonterminals

    head = 0
    while head < len(keys):
        cfg = keys[head]
        if all(s not in nts for s in cfg.form) and cfg.state in g.final_states:
            if target is not None:
                if cfg.form == target:
                    witness_end = head
                    break
            elif cfg.form not in words:
                words[cfg.form] = head
                if budget.max_words and len(words) >= budget.max_words:
                    break
        if depth[head] >= budget.max_steps:
            hit_steps = True
            head += 1
            continue
        if any(s in nts for s in cfg.form):
            for nxt, labels in sweep_circular(g, cfg):
                if len(nxt.form) > budget.max_form_len:
                    hit_form = True
                    continue
                if nxt in seen:
                    continue
                seen[nxt] = len(keys)
                keys.append(nxt)
                parent.append(head)
                via.append(labels)
                depth.append(depth[head] + 1)
        head += 1

    witness = None
    if witness_end >= 0:
        chain = []
        i = witness_end
        while i >= 0:
            chain.append(i)
            i = parent[i]
        chain.reverse()
        witness = Derivation(
            tuple(keys[i] for i in chain), tuple(via[i] for i in chain[1:])
        )
    return ExploreResult(
        frozenset(words),
        witness,
        frozenset(),
        hit_form,
        False,
        hit_steps,
        False,
        False,
        len(keys),
    )


def explore(
    g: StateGrammar,
    mode: str,
    budget: Budget,
    target: tuple[str, ...] | None = None,
    want_final_counters: bool = False,
) -> ExploreResult:
    """Run the bounded search; `target` switches to membership mode."""
    check_mode(g, mode)
    if mode == CIRCULAR:
        return _explore_circular(g, budget, target)
    lg = engine.lower_grammar(g)
    sym_id = {s: i for i, s in enumerate(lg["symbols"])}
    target_ids = None
    if target is not None:
        target_ids = tuple(sym_id[s] for s in target)
    res = engine.search_grammar(
        lg,
        engine.MODE_CODE[mode],
        budget.max_steps,
        budget.max_form_len,
        budget.max_counter if g.counters.count else 0,
        budget.max_words or 0,
        target_ids,
        want_final_counters,
        max_word_len=budget.max_word_len or 0,
    )
    words = frozenset(
        tuple(lg["symbols"][s] for s in w) for w in res["words"]
    )
    witness = None
    if res["witness"] is not None:
        configs = []
        rules = []
        for state, cs, ph, rv, fl, fm, rule in res["witness"]:
            configs.append(_config_from_ids(g, lg, state, cs, ph, rv, fl, fm))
            if rule >= 0:
                rules.append((rule,))
        witness = Derivation(tuple(configs), tuple(rules))
    return ExploreResult(
        words,
        witness,
        frozenset(tuple(c) for c in res["final_counters"]),
        res["hit_form_cap"],
        res["hit_counter_cap"],
        res["hit_step_cap"],
        res["hit_config_cap"],
        res["hit_word_cap"],
        res["n_configs"],
    )


def enumerate_words(g: StateGrammar, mode: str, budget: Budget) -> frozenset[tuple[str, ...]]:
    """Exactly the terminal words with an accepting derivation within budget."""
    return explore(g, mode, budget).words


def member(
    g: StateGrammar, mode: str, word: tuple[str, ...], budget: Budget
) -> Derivation | None:
    """Search for an accepting derivation of `word`; None means not within budget."""
    bad = [s for s in word if s not in g.terminals]
    if bad:
        raise ValueError(f"word uses symbols outside the terminal alphabet: {bad}")
    return explore(g, mode, budget, target=tuple(word)).witness


def bounded_language(
    g: StateGrammar,
    mode: str,
    max_len: int,
    start: Budget | None = None,
    max_doublings: int = 10,
) -> frozenset[tuple[str, ...]]:
    """Words of length <= max_len, with the budget doubled until stable.

    Stops immediately when a search exhausts the whole (finite) language,
    otherwise when the length-bounded slice survives one doubling.
    """
    budget = start or Budget(
        max_steps=max(16, 4 * max_len),
        max_form_len=max(8, max_len + 6),
        max_counter=max(2, max_len),
        max_word_len=max_len,
    )
    prev: frozenset | None = None
    for _ in range(max_doublings):
        res = explore(g, mode, budget)
        cut = frozenset(w for w in res.words if len(w) <= max_len)
        if res.slice_exhaustive or cut == prev:
            return cut
        prev = cut
        budget = budget.grown()
    return prev if prev is not None else frozenset()
