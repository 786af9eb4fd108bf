"""State grammars with counter stores: derivation engines for the free,
leftmost, leftish, circular and controlled rewriting modes, constructive
transformations between the grammar classes and reversal-bounded counter
machines, a finite-index emptiness decider, and subset-sum reductions.
"""
from .core import (
    CounterSpec,
    GrammarClass,
    Production,
    StateGrammar,
    classify,
    validate,
)
from .corpus import corpus
from .derive import Budget, Config, Derivation, bounded_language, enumerate_words, member, step, sweep_circular
from .engine import backend_name

__version__ = "0.1.0"

__all__ = [
    "Budget",
    "Config",
    "CounterSpec",
    "Derivation",
    "GrammarClass",
    "Production",
    "StateGrammar",
    "backend_name",
    "bounded_language",
    "classify",
    "corpus",
    "enumerate_words",
    "member",
    "step",
    "sweep_circular",
    "validate",
    "__version__",
]
