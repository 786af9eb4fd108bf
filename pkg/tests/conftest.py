"""Shared fixtures and independent oracles for the test suite."""
import itertools

import pytest

from stategrammar.core import Production, StateGrammar
from stategrammar.corpus import corpus


@pytest.fixture(scope="session")
def grammars():
    return corpus()


def plain_cfg(rules, axiom="S", terminals=None):
    """Single-state counter-free grammar from {lhs: [rhs-string, ...]}."""
    nts = frozenset(rules)
    symbols = {s for alts in rules.values() for alt in alts for s in alt.split()}
    terms = frozenset(terminals) if terminals is not None else frozenset(symbols - nts)
    prods = tuple(
        Production("s", (), lhs, "s", (), tuple(alt.split()) if alt else ())
        for lhs, alts in rules.items()
        for alt in alts
    )
    return StateGrammar(
        nonterminals=nts,
        terminals=terms,
        productions=prods,
        axiom=axiom,
        states=frozenset({"s"}),
        initial_state="s",
        final_states=frozenset({"s"}),
    )


def words_upto(alphabet, n):
    """All words over the alphabet of length <= n."""
    out = [()]
    for length in range(1, n + 1):
        out.extend(itertools.product(alphabet, repeat=length))
    return out


def dyck_ok(word, pairs):
    """Bracket-matching oracle: `pairs` maps opener -> closer."""
    closers = {v: k for k, v in pairs.items()}
    stack = []
    for s in word:
        if s in pairs:
            stack.append(s)
        elif s in closers:
            if not stack or stack[-1] != closers[s]:
                return False
            stack.pop()
        else:
            return False
    return not stack


def count(word, sym):
    return sum(1 for s in word if s == sym)


def subset_sum_brute(values, target):
    return any(
        sum(c) == target
        for r in range(len(values) + 1)
        for c in itertools.combinations(values, r)
    )


def join(words):
    return sorted("".join(w) for w in words)
