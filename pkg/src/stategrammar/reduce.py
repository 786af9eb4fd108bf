"""Subset-sum solved through grammar emptiness.

`binary_gadget` builds, for a binary number x, a one-counter monotonic
grammar generating only the empty word with its counter ending at exactly
the value of x; grammar size is quadratic in the bit length and some
derivation keeps at most bits+1 nonterminals alive.

Two reductions embed those gadgets:

* `subset_sum_to_cfgsc`: one 1-reversal counter; optional gadget splices
  add chosen values, then the target gadget's increments replay as
  decrements, and the terminal `a` appears iff the counter drains to zero.
* `subset_sum_to_rlgsc`: a right-linear grammar with two 1-reversal
  counters whose increments are binary constants (degeneralize before
  running machines on it).

`solve_subset_sum` runs either reduction through its decision pipeline
and reads the chosen subset back out of the witness.
"""
from __future__ import annotations

from dataclasses import dataclass

from . import decide, derive, machine, transform
from .core import (
    ANY,
    COUNTERS_EQUAL,
    FINAL_STATE,
    POS,
    ZERO,
    CounterSpec,
    Production,
    StateGrammar,
)


@dataclass(frozen=True)
class SubsetSumInstance:
    """Positive integers and a target; the question is whether some subset
    of `values` sums to `target`."""

    values: tuple[int, ...]
    target: int

    def __post_init__(self):
        if len(self.values) < 1:
            raise ValueError("need at least one value")
        if any(v < 1 for v in self.values) or self.target < 1:
            raise ValueError("values and target must be positive")


def to_bits(x: int) -> str:
    """Binary digits of x, least significant first."""
    if x < 0:
        raise ValueError("nonnegative numbers only")
    return bin(x)[2:][::-1]


def encoded_value(bits: str) -> int:
    return sum(1 << i for i, b in enumerate(bits) if b == "1")


def binary_gadget(bits: str, prefix: str = "") -> StateGrammar:
    """Monotonic one-counter grammar generating the empty word with the
    counter ending at the number the bits encode (LSB first)."""
    if not bits or any(b not in "01" for b in bits):
        raise ValueError("bits must be a nonempty string over 0/1")
    k = len(bits)

    def d(i: int, b: int) -> str:
        return f"{prefix}D{i}_{b}"

    s = f"{prefix}S"
    rules = [
        Production("q", (ANY,), s, "q", (0,),
                   tuple(d(i + 1, int(bits[i])) for i in range(k))),
    ]
    for i in range(1, k + 1):
        rules.append(Production("q", (ANY,), d(i, 0), "q", (0,), ()))
    for i in range(2, k + 1):
        rules.append(
            Production("q", (ANY,), d(i, 1), "q", (1,),
                       tuple(d(j, 1) for j in range(1, i)) + (d(i, 0),))
        )
    rules.append(Production("q", (ANY,), d(1, 1), "q", (1,), (d(1, 0),)))
    nts = {s} | {d(i, b) for i in range(1, k + 1) for b in (0, 1)}
    return StateGrammar(
        nonterminals=frozenset(nts),
        terminals=frozenset(),
        productions=tuple(rules),
        axiom=s,
        states=frozenset({"q"}),
        initial_state="q",
        final_states=frozenset({"q"}),
        counters=CounterSpec.monotonic(1),
        acceptance=COUNTERS_EQUAL,
    )


def _chain_names(k: int) -> list[str]:
    return [f"A{i}" for i in range(1, k + 2)]


def subset_sum_to_cfgsc(inst: SubsetSumInstance) -> tuple[StateGrammar, int, int]:
    """One 1-reversal counter; language is {a} iff the instance is solvable.

    Returns the grammar with a recommended derivation-index bound and a
    sound counter cap (partial sums never exceed the sum of the values).
    """
    values = list(inst.values) + [inst.target]
    k = len(inst.values)
    chain = _chain_names(k)
    gadgets = [binary_gadget(to_bits(v), prefix=f"g{i + 1}.") for i, v in enumerate(values)]

    rules: list[Production] = []
    for i in range(k):
        rules.append(Production("q0", (ANY,), chain[i], "q0", (0,),
                                (gadgets[i].axiom, chain[i + 1])))
        rules.append(Production("q0", (ANY,), chain[i], "q0", (0,), (chain[i + 1],)))
    for i in range(k):
        for p in gadgets[i].productions:
            rules.append(Production("q0", (ANY,), p.lhs, "q0", p.update, p.rhs))
    rules.append(Production("q0", (ANY,), chain[k], "q1", (0,),
                            (gadgets[k].axiom, "Z")))
    for p in gadgets[k].productions:
        if p.update[0] == 0:
            rules.append(Production("q1", (ANY,), p.lhs, "q1", (0,), p.rhs))
        else:
            rules.append(Production("q1", (POS,), p.lhs, "q1", (-1,), p.rhs))
    rules.append(Production("q1", (ZERO,), "Z", "qf", (0,), ("a",)))

    nts = set(chain) | {"Z"}
    for gg in gadgets:
        nts |= gg.nonterminals
    g = StateGrammar(
        nonterminals=frozenset(nts),
        terminals=frozenset({"a"}),
        productions=tuple(rules),
        axiom=chain[0],
        states=frozenset({"q0", "q1", "qf"}),
        initial_state="q0",
        final_states=frozenset({"qf"}),
        counters=CounterSpec.reversal(1),
        acceptance=FINAL_STATE,
    )
    max_bits = max(len(to_bits(v)) for v in values)
    recommended_m = max_bits + 2
    cap = max(sum(inst.values), inst.target)
    return g, recommended_m, cap


def subset_sum_to_rlgsc(inst: SubsetSumInstance) -> StateGrammar:
    """Right-linear, two 1-reversal counters, binary-constant increments."""
    k = len(inst.values)
    chain = _chain_names(k)
    rules: list[Production] = []
    for i, v in enumerate(inst.values):
        rules.append(Production("q0", (ANY, ZERO), chain[i], "q0", (v, 0), (chain[i + 1],)))
        rules.append(Production("q0", (ANY, ZERO), chain[i], "q0", (0, 0), (chain[i + 1],)))
    rules.append(Production("q0", (ANY, ZERO), chain[k], "q1", (0, inst.target), ("Z",)))
    rules.append(Production("q1", (POS, POS), "Z", "q1", (-1, -1), ("Z",)))
    rules.append(Production("q1", (ZERO, ZERO), "Z", "qf", (0, 0), ("a",)))
    return StateGrammar(
        nonterminals=frozenset(chain) | {"Z"},
        terminals=frozenset({"a"}),
        productions=tuple(rules),
        axiom=chain[0],
        states=frozenset({"q0", "q1", "qf"}),
        initial_state="q0",
        final_states=frozenset({"qf"}),
        counters=CounterSpec.reversal(2, generalized=True),
        acceptance=FINAL_STATE,
    )


@dataclass(frozen=True)
class SolveResult:
    solvable: bool
    chosen: tuple[int, ...] | None
    instance: SubsetSumInstance

    @property
    def chosen_values(self) -> tuple[int, ...] | None:
        if self.chosen is None:
            return None
        return tuple(self.instance.values[i] for i in self.chosen)


def _chosen_from_rules(productions, applied, k: int) -> tuple[int, ...]:
    chain = set(_chain_names(k)[:-1])
    chosen = []
    for r in applied:
        p = productions[r]
        if p.lhs in chain:
            i = int(p.lhs[1:]) - 1
            skip = all(u == 0 for u in p.update) and p.rhs == (f"A{i + 2}",)
            if not skip:
                chosen.append(i)
    return tuple(sorted(set(chosen)))


def solve_subset_sum(inst: SubsetSumInstance, route: str = "cfgsc") -> SolveResult:
    """Decide the instance through the chosen reduction and decision
    pipeline, recovering the subset from the witness when solvable."""
    k = len(inst.values)
    if route == "cfgsc":
        g, m, cap = subset_sum_to_cfgsc(inst)
        # the reduction's witnesses are leftmost-realizable, which keeps the
        # index-bounded search linear-ish in the instance size
        dec = decide.cfgsc_index_emptiness(g, m, cap, mode=derive.LEFTMOST)
        if not dec.nonempty:
            return SolveResult(False, None, inst)
        applied = [r for step in dec.witness.rules for r in step]
        chosen = _chosen_from_rules(dec.searched.productions, applied, k)
        return SolveResult(True, chosen, inst)
    if route == "rlgsc":
        g = subset_sum_to_rlgsc(inst)
        gu = transform.degeneralize(g)
        m = machine.rlgsc_to_ncm(gu)
        cap = sum(inst.values) + inst.target
        res = machine.ncm_empty_bounded(m, cap)
        if not res.nonempty:
            return SolveResult(False, None, inst)
        applied = []
        for t in res.run.transitions:
            label = m.transitions[t].label
            if label.startswith("r"):
                applied.append(int(label[1:]))
        chosen = _chosen_from_rules(gu.productions, applied, k)
        return SolveResult(True, chosen, inst)
    raise ValueError(f"unknown route {route!r} (use 'cfgsc' or 'rlgsc')")
