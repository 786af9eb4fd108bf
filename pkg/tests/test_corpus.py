import importlib.resources

from stategrammar.core import COUNTERS_EQUAL, MONOTONIC, validate
from stategrammar.corpus import CORPUS_INFO, corpus
from stategrammar.fileformat import parse_grammar_file, print_grammar


def test_example1_k2_states_and_finals(grammars):
    g = grammars["example1_k2"]
    assert g.states == {"q0", "q1"}
    assert g.final_states == {"q0"}


def test_example2_counters_and_acceptance(grammars):
    g = grammars["example2_wdollarw"]
    assert g.counters.count == 2
    assert g.acceptance == "final_state"


def test_dyck_is_monotonic(grammars):
    g = grammars["dyck_equal"]
    assert g.counters.count == 2
    assert g.counters.discipline == MONOTONIC
    assert g.acceptance == COUNTERS_EQUAL


def test_corpus_info_covers_corpus(grammars):
    assert set(CORPUS_INFO) == set(grammars)


def test_shipped_files_reproduce_corpus(grammars):
    data = importlib.resources.files("stategrammar") / "data"
    for name, g in grammars.items():
        text = (data / f"{name}.sg").read_text()
        assert parse_grammar_file(text) == g, name


def test_print_parse_round_trip(grammars):
    for name, g in grammars.items():
        assert parse_grammar_file(print_grammar(g)) == g, name


def test_corpus_grammars_validate(grammars):
    for name, g in grammars.items():
        assert validate(g) == [], name
