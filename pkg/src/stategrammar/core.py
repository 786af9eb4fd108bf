"""Data model for state grammars, with or without counter stores.

A state grammar is a context-free grammar whose productions carry a
(state, next-state) pair: a rule can only rewrite a nonterminal when its
state matches the state of the sentential form.  On top of plain state
grammars (CFG-S) this module represents several enriched classes with one
unified record:

* CFGSC -- state grammars whose productions additionally guard and update
  a vector of reversal-bounded counters,
* CFGMC -- stateless grammars with monotonic (increment-only) counters
  that accept when all counters end equal,
* CCFGS -- controlled grammars whose nonterminals split into V1/V2 with
  a leftmost-in-V1 rewriting discipline and an erase-once rule for V2.

Grammar values are immutable after construction and safe to share across
threads; `validate` reports every invariant violation as data rather than
raising.
"""
from __future__ import annotations

from dataclasses import dataclass, field

# Counter guard symbols: a production applies only if each counter matches
# its guard ("z" = zero, "p" = positive, "*" = either).
ZERO = "z"
POS = "p"
ANY = "*"
GUARDS = (ZERO, POS, ANY)

# Counter disciplines.
NO_COUNTERS = "none"
REVERSAL_BOUNDED = "reversal_bounded"
MONOTONIC = "monotonic"

# Acceptance conditions for a terminal sentential form.
FINAL_STATE = "final_state"
FINAL_STATE_ZERO = "final_state_zero"
COUNTERS_EQUAL = "counters_equal"

# Right-hand-side conventions for the V2 rules of controlled grammars.
# "classic" requires rhs in V2*; the two generalized variants allow
# terminals (rhs in (V2|Sigma)*) or V1 symbols (rhs in (V1|V2)*).
CLASSIC = "classic"
TERMINAL_RHS = "terminal_rhs"
V1_RHS = "v1_rhs"
CONTROL_VARIANTS = (CLASSIC, TERMINAL_RHS, V1_RHS)

RIGHT_LINEAR = "right_linear"
LINEAR = "linear"
CONTEXT_FREE = "context_free"


@dataclass(frozen=True)
class CounterSpec:
    """Number and discipline of the counters attached to a grammar.

    `bounds` gives the declared reversal bound per counter (reversal
    discipline only).  `generalized` marks grammars whose increments are
    arbitrary nonnegative constants while decrements stay exactly 1.
    """

    count: int = 0
    discipline: str = NO_COUNTERS
    bounds: tuple[int, ...] = ()
    generalized: bool = False

    @staticmethod
    def reversal(count: int, bound: int = 1, generalized: bool = False) -> "CounterSpec":
        return CounterSpec(count, REVERSAL_BOUNDED, (bound,) * count, generalized)

    @staticmethod
    def monotonic(count: int) -> "CounterSpec":
        return CounterSpec(count, MONOTONIC, ())


@dataclass(frozen=True)
class Production:
    """One guarded, state-changing rewrite rule `(q, g, A) -> (p, u, rhs)`."""

    from_state: str
    guard: tuple[str, ...]
    lhs: str
    to_state: str
    update: tuple[int, ...]
    rhs: tuple[str, ...]


@dataclass(frozen=True)
class StateGrammar:
    """A state grammar over disjoint alphabets V (nonterminals), Sigma
    (terminals) and Q (states), with optional counters and control split.
    """

    nonterminals: frozenset[str]
    terminals: frozenset[str]
    productions: tuple[Production, ...]
    axiom: str
    states: frozenset[str]
    initial_state: str
    final_states: frozenset[str]
    counters: CounterSpec = field(default_factory=CounterSpec)
    control: tuple[frozenset[str], frozenset[str]] | None = None
    control_variant: str = CLASSIC
    acceptance: str = FINAL_STATE

    def kind_of(self, symbol: str) -> str | None:
        if symbol in self.nonterminals:
            return "nonterminal"
        if symbol in self.terminals:
            return "terminal"
        if symbol in self.states:
            return "state"
        return None

    def label(self, rule_index: int) -> str:
        """Stable name for a production, usable as a control-word letter."""
        return f"r{rule_index}"

    def rule_indices_from(self, state: str, lhs: str) -> list[int]:
        return [
            i
            for i, p in enumerate(self.productions)
            if p.from_state == state and p.lhs == lhs
        ]

    def describe_rule(self, rule_index: int) -> str:
        p = self.productions[rule_index]
        k = self.counters.count
        guard = "[" + ",".join(p.guard) + "] " if k else ""
        upd = "[" + ",".join(format_update(u) for u in p.update) + "] " if k else ""
        rhs = " ".join(p.rhs) if p.rhs else "eps"
        return f"{self.label(rule_index)}: {p.from_state} {guard}{p.lhs} -> {p.to_state} {upd}{rhs}"


@dataclass(frozen=True)
class GrammarClass:
    shape: str
    lambda_free: bool


def format_update(u: int) -> str:
    return f"+{u}" if u > 0 else str(u)


def fresh_name(base: str, used: set[str]) -> str:
    """Pick an unused name derived from `base` and record it in `used`."""
    name = base
    n = 0
    while name in used:
        n += 1
        name = f"{base}{n}"
    used.add(name)
    return name


def _check_production(g: StateGrammar, i: int, p: Production, out: list[str]) -> None:
    k = g.counters.count
    where = f"production {i}"
    if p.from_state not in g.states:
        out.append(f"{where}: undeclared source state {p.from_state!r}")
    if p.to_state not in g.states:
        out.append(f"{where}: undeclared target state {p.to_state!r}")
    if p.lhs not in g.nonterminals:
        out.append(f"{where}: lhs {p.lhs!r} is not a declared nonterminal")
    for s in p.rhs:
        if s not in g.nonterminals and s not in g.terminals:
            out.append(f"{where}: undeclared rhs symbol {s!r}")
    if len(p.guard) != k:
        out.append(f"{where}: guard arity {len(p.guard)} != counter count {k}")
        return
    if len(p.update) != k:
        out.append(f"{where}: update arity {len(p.update)} != counter count {k}")
        return
    for j, gd in enumerate(p.guard):
        if gd not in GUARDS:
            out.append(f"{where}: bad guard value {gd!r} on counter {j}")
    for j, u in enumerate(p.update):
        if g.counters.discipline == MONOTONIC:
            if u < 0:
                out.append(f"{where}: negative update in monotonic grammar (counter {j})")
            elif u > 1:
                out.append(f"{where}: monotonic update must be 0 or +1 (counter {j})")
        elif g.counters.generalized:
            if u < -1:
                out.append(f"{where}: generalized decrement must be exactly 1 (counter {j})")
        elif u not in (-1, 0, 1):
            out.append(f"{where}: unit update out of range on counter {j}: {u}")
        if u == -1 and len(p.guard) == k and p.guard[j] == ZERO:
            out.append(f"{where}: decrement under zero guard on counter {j}")
    if g.counters.discipline == MONOTONIC and any(gd != ANY for gd in p.guard):
        out.append(f"{where}: monotonic rules cannot test counters")


def validate(g: StateGrammar) -> list[str]:
    """Return every invariant violation; an empty list means the grammar is valid."""
    out: list[str] = []
    if g.axiom not in g.nonterminals:
        out.append(f"axiom undeclared: {g.axiom!r} not in nonterminals")
    if g.initial_state not in g.states:
        out.append(f"initial state undeclared: {g.initial_state!r}")
    for f in g.final_states - g.states:
        out.append(f"final state undeclared: {f!r}")
    for a, b, name in (
        (g.nonterminals, g.terminals, "nonterminals/terminals"),
        (g.nonterminals, g.states, "nonterminals/states"),
        (g.terminals, g.states, "terminals/states"),
    ):
        common = a & b
        if common:
            out.append(f"{name} not disjoint: {sorted(common)}")

    c = g.counters
    if c.count < 0:
        out.append("counter count is negative")
    if c.discipline == NO_COUNTERS and c.count != 0:
        out.append("counters declared but discipline is none")
    if c.discipline == REVERSAL_BOUNDED:
        if len(c.bounds) != c.count:
            out.append("reversal bounds arity != counter count")
        elif any(b < 1 for b in c.bounds):
            out.append("reversal bounds must be >= 1")
    if c.generalized and c.discipline != REVERSAL_BOUNDED:
        out.append("generalized updates require reversal-bounded counters")
    if c.discipline == MONOTONIC:
        if len(g.states) != 1 or g.final_states != g.states:
            out.append("monotonic grammar must have a single state that is final")
        if g.acceptance != COUNTERS_EQUAL:
            out.append("monotonic grammar must accept with all counters equal")
    elif g.acceptance == COUNTERS_EQUAL:
        out.append("counters_equal acceptance requires monotonic counters")

    if g.control is not None:
        v1, v2 = g.control
        if v1 & v2:
            out.append(f"control split overlaps: {sorted(v1 & v2)}")
        if (v1 | v2) != g.nonterminals:
            out.append("control split does not cover the nonterminals")
        if g.axiom not in v1:
            out.append("axiom must belong to V1")
        if c.count != 0:
            out.append("controlled grammars carry no counters")
        if g.control_variant not in CONTROL_VARIANTS:
            out.append(f"unknown control variant {g.control_variant!r}")
        else:
            allowed = {
                CLASSIC: v2,
                TERMINAL_RHS: v2 | g.terminals,
                V1_RHS: v1 | v2,
            }[g.control_variant]
            for i, p in enumerate(g.productions):
                if p.lhs in v2 and not set(p.rhs) <= allowed:
                    out.append(
                        f"production {i}: rhs of V2 rule leaves the {g.control_variant} fragment"
                    )

    for i, p in enumerate(g.productions):
        _check_production(g, i, p, out)
    return out


def classify(g: StateGrammar) -> GrammarClass:
    """Tightest shape of the rewrite rules plus lambda-freeness.

    right_linear (rhs in Sigma*(V|eps)) implies linear (rhs in
    Sigma*(V|eps)Sigma*) implies context_free.
    """
    shape = RIGHT_LINEAR
    lambda_free = True
    for p in g.productions:
        if not p.rhs:
            lambda_free = False
        nt_positions = [i for i, s in enumerate(p.rhs) if s in g.nonterminals]
        if len(nt_positions) > 1:
            shape = CONTEXT_FREE
        elif len(nt_positions) == 1 and shape != CONTEXT_FREE:
            if nt_positions[0] != len(p.rhs) - 1:
                shape = LINEAR
    return GrammarClass(shape, lambda_free)
