"""Line-oriented text formats for grammars, machines and controlled CFGs.

Grammar files consist of header directives followed by rule lines::

    kind cfgsc
    counters 2 reversal 1
    states q0 qa qb q1 qf
    start_state q0
    final qf
    nonterminals S A1 A2
    terminals a b $
    axiom S
    rule q0 [z,z] S -> q0 [0,0] A1 A2
    rule q1 [p,p] A1 -> q1 [-1,-1] A1

Guard entries are z (zero), p (positive) or * (either); updates are -1, 0,
+1 or +<decimal> for generalized grammars.  Guard and update brackets are
omitted for counter-free kinds, and `rule A -> [+1,0] rhs` is the
stateless form used by `kind cfgmc`.  `eps` stands for the empty word; a
symbol that could be mistaken for syntax is written in double quotes.
`#` starts a comment.  `parse_grammar_file(print_grammar(g))` returns a
structurally equal grammar.
"""
from __future__ import annotations

from .core import (
    ANY,
    CLASSIC,
    COUNTERS_EQUAL,
    FINAL_STATE,
    FINAL_STATE_ZERO,
    GUARDS,
    LINEAR,
    MONOTONIC,
    NO_COUNTERS,
    REVERSAL_BOUNDED,
    RIGHT_LINEAR,
    CounterSpec,
    Production,
    StateGrammar,
    classify,
    format_update,
    validate,
)
from .machine import CounterMachine, Transition
from .transform import ControlledCFG, FiniteAutomaton, RegularControl

KINDS = ("cfgs", "lgs", "rlgs", "cfgsc", "cfgmc", "ccfgs")
_ACCEPTANCE_NAMES = {
    FINAL_STATE: "final_state",
    FINAL_STATE_ZERO: "final_state_zero",
    COUNTERS_EQUAL: "counters_equal",
}
_ACCEPTANCE_BY_NAME = {v: k for k, v in _ACCEPTANCE_NAMES.items()}


class ParseError(ValueError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


def _quote(tok: str) -> str:
    if not tok or tok == "eps" or tok == "->" or tok[0] in "[\"'#" or any(
        c.isspace() for c in tok
    ):
        return f'"{tok}"'
    return tok


def _unquote(tok: str) -> str:
    if len(tok) >= 2 and tok[0] == '"' and tok[-1] == '"':
        return tok[1:-1]
    return tok


def _tokens(line: str) -> list[str]:
    out = []
    for tok in line.split():
        if tok.startswith("#") and not (tok.startswith('"') and tok.endswith('"')):
            break
        out.append(tok)
    return out


def format_word(w: tuple[str, ...]) -> str:
    return "".join(w) if w else "<eps>"


def parse_word(text: str, terminals: frozenset[str]) -> tuple[str, ...]:
    """Greedy longest-match tokenization of a concatenated word; spaces, if
    present, separate symbols explicitly."""
    if text in ("<eps>", "eps", ""):
        return ()
    if " " in text:
        parts = tuple(text.split())
        bad = [s for s in parts if s not in terminals]
        if bad:
            raise ValueError(f"unknown terminal {bad[0]!r}")
        return parts
    out = []
    i = 0
    by_len = sorted(terminals, key=len, reverse=True)
    while i < len(text):
        for t in by_len:
            if text.startswith(t, i):
                out.append(t)
                i += len(t)
                break
        else:
            raise ValueError(f"cannot tokenize {text!r} at offset {i}")
    return tuple(out)


def _guard_text(guard: tuple[str, ...]) -> str:
    return "[" + ",".join(guard) + "]"


def _update_text(update: tuple[int, ...]) -> str:
    return "[" + ",".join(format_update(u) for u in update) + "]"


def _parse_guard(tok: str, k: int, line: int) -> tuple[str, ...]:
    if not (tok.startswith("[") and tok.endswith("]")):
        raise ParseError(line, f"expected a [..] guard, got {tok!r}")
    parts = tok[1:-1].split(",") if tok != "[]" else []
    if len(parts) != k:
        raise ParseError(line, f"guard arity {len(parts)} != counter count {k}")
    for p in parts:
        if p not in GUARDS:
            raise ParseError(line, f"bad guard entry {p!r}")
    return tuple(parts)


def _parse_update(tok: str, k: int, line: int) -> tuple[int, ...]:
    if not (tok.startswith("[") and tok.endswith("]")):
        raise ParseError(line, f"expected a [..] update, got {tok!r}")
    parts = tok[1:-1].split(",") if tok != "[]" else []
    if len(parts) != k:
        raise ParseError(line, f"update arity {len(parts)} != counter count {k}")
    out = []
    for p in parts:
        try:
            out.append(int(p))
        except ValueError:
            raise ParseError(line, f"bad update entry {p!r}") from None
    return tuple(out)


def grammar_kind(g: StateGrammar) -> str:
    if g.control is not None:
        return "ccfgs"
    if g.counters.discipline == MONOTONIC:
        return "cfgmc"
    if g.counters.count or g.counters.discipline == REVERSAL_BOUNDED:
        return "cfgsc"
    shape = classify(g).shape
    if shape == RIGHT_LINEAR:
        return "rlgs"
    if shape == LINEAR:
        return "lgs"
    return "cfgs"


def print_grammar(g: StateGrammar) -> str:
    kind = grammar_kind(g)
    k = g.counters.count
    lines = [f"kind {kind}"]
    if g.counters.discipline == REVERSAL_BOUNDED:
        gen = " generalized" if g.counters.generalized else ""
        bounds = set(g.counters.bounds)
        if len(bounds) == 1:
            lines.append(f"counters {k} reversal {g.counters.bounds[0]}{gen}")
        else:
            lines.append(
                f"counters {k} reversal {','.join(map(str, g.counters.bounds))}{gen}"
            )
    elif g.counters.discipline == MONOTONIC:
        lines.append(f"counters {k} monotonic")
    if kind != "cfgmc":
        lines.append("states " + " ".join(_quote(s) for s in sorted(g.states)))
        lines.append(f"start_state {_quote(g.initial_state)}")
        lines.append("final " + " ".join(_quote(s) for s in sorted(g.final_states)))
    lines.append("nonterminals " + " ".join(_quote(s) for s in sorted(g.nonterminals)))
    lines.append("terminals " + " ".join(_quote(s) for s in sorted(g.terminals)))
    lines.append(f"axiom {_quote(g.axiom)}")
    if g.control is not None:
        lines.append("v2 " + " ".join(_quote(s) for s in sorted(g.control[1])))
        if g.control_variant != CLASSIC:
            lines.append(f"variant {g.control_variant}")
    default_acc = COUNTERS_EQUAL if kind == "cfgmc" else FINAL_STATE
    if g.acceptance != default_acc:
        lines.append(f"acceptance {_ACCEPTANCE_NAMES[g.acceptance]}")
    for p in g.productions:
        rhs = " ".join(_quote(s) for s in p.rhs) if p.rhs else "eps"
        if kind == "cfgmc":
            lines.append(f"rule {_quote(p.lhs)} -> {_update_text(p.update)} {rhs}")
        elif k:
            lines.append(
                f"rule {_quote(p.from_state)} {_guard_text(p.guard)} {_quote(p.lhs)}"
                f" -> {_quote(p.to_state)} {_update_text(p.update)} {rhs}"
            )
        else:
            lines.append(
                f"rule {_quote(p.from_state)} {_quote(p.lhs)} -> {_quote(p.to_state)} {rhs}"
            )
    return "\n".join(lines) + "\n"


def parse_grammar_file(text: str) -> StateGrammar:
    kind = None
    counters = CounterSpec()
    states: list[str] = []
    start_state = None
    finals: list[str] = []
    nonterminals: list[str] = []
    terminals: list[str] = []
    axiom = None
    v2: list[str] = []
    variant = CLASSIC
    acceptance = None
    rules: list[Production] = []
    kind_line = 1

    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, rest = toks[0], toks[1:]
        if head == "kind":
            if len(rest) != 1 or rest[0] not in KINDS:
                raise ParseError(ln, f"kind must be one of {'|'.join(KINDS)}")
            kind = rest[0]
            kind_line = ln
        elif head == "counters":
            if not rest:
                raise ParseError(ln, "counters needs a count")
            try:
                k = int(rest[0])
            except ValueError:
                raise ParseError(ln, f"bad counter count {rest[0]!r}") from None
            spec = rest[1:]
            if spec and spec[0] == "monotonic":
                counters = CounterSpec.monotonic(k)
            elif spec and spec[0] == "reversal":
                if len(spec) < 2:
                    raise ParseError(ln, "reversal needs a bound")
                gen = len(spec) > 2 and spec[2] == "generalized"
                if "," in spec[1]:
                    bounds = tuple(int(x) for x in spec[1].split(","))
                    if len(bounds) != k:
                        raise ParseError(ln, "reversal bounds arity != counter count")
                    counters = CounterSpec(k, REVERSAL_BOUNDED, bounds, gen)
                else:
                    counters = CounterSpec.reversal(k, int(spec[1]), gen)
            else:
                raise ParseError(ln, "counters needs 'reversal <r>' or 'monotonic'")
        elif head == "states":
            states = [_unquote(t) for t in rest]
        elif head == "start_state":
            if len(rest) != 1:
                raise ParseError(ln, "start_state needs exactly one state")
            start_state = _unquote(rest[0])
        elif head == "final":
            finals = [_unquote(t) for t in rest]
        elif head == "nonterminals":
            nonterminals = [_unquote(t) for t in rest]
        elif head == "terminals":
            terminals = [_unquote(t) for t in rest]
        elif head == "axiom":
            if len(rest) != 1:
                raise ParseError(ln, "axiom needs exactly one symbol")
            axiom = _unquote(rest[0])
        elif head == "v2":
            v2 = [_unquote(t) for t in rest]
        elif head == "variant":
            if len(rest) != 1 or rest[0] not in (CLASSIC, "terminal_rhs", "v1_rhs"):
                raise ParseError(ln, "variant must be classic|terminal_rhs|v1_rhs")
            variant = rest[0]
        elif head == "acceptance":
            if len(rest) != 1 or rest[0] not in _ACCEPTANCE_BY_NAME:
                raise ParseError(ln, "unknown acceptance condition")
            acceptance = _ACCEPTANCE_BY_NAME[rest[0]]
        elif head == "rule":
            if kind is None:
                raise ParseError(ln, "kind must come before the rules")
            k = counters.count
            if kind == "cfgmc":
                # rule <A> -> [u,..] <rhs>
                if len(rest) < 3 or rest[1] != "->":
                    raise ParseError(ln, "monotonic rule: rule <A> -> [u..] <rhs>")
                lhs = _unquote(rest[0])
                update = _parse_update(rest[2], k, ln)
                rhs_toks = rest[3:]
                rules.append(
                    Production("q", (ANY,) * k, lhs, "q", update, _rhs(rhs_toks, ln))
                )
            elif k:
                if len(rest) < 6 or rest[3] != "->":
                    raise ParseError(
                        ln, "rule <q> [g..] <A> -> <p> [u..] <rhs> expected"
                    )
                guard = _parse_guard(rest[1], k, ln)
                update = _parse_update(rest[5], k, ln)
                rules.append(
                    Production(
                        _unquote(rest[0]), guard, _unquote(rest[2]),
                        _unquote(rest[4]), update, _rhs(rest[6:], ln),
                    )
                )
            else:
                if len(rest) < 4 or rest[2] != "->":
                    raise ParseError(ln, "rule <q> <A> -> <p> <rhs> expected")
                rules.append(
                    Production(
                        _unquote(rest[0]), (), _unquote(rest[1]),
                        _unquote(rest[3]), (), _rhs(rest[4:], ln),
                    )
                )
        else:
            raise ParseError(ln, f"unknown directive {head!r}")

    if kind is None:
        raise ParseError(1, "missing kind directive")
    if axiom is None:
        raise ParseError(kind_line, "missing axiom")
    if kind == "cfgmc":
        states, start_state, finals = ["q"], "q", ["q"]
        if acceptance is None:
            acceptance = COUNTERS_EQUAL
    if acceptance is None:
        acceptance = FINAL_STATE
    if start_state is None:
        raise ParseError(kind_line, "missing start_state")
    control = None
    if kind == "ccfgs":
        if not v2:
            raise ParseError(kind_line, "ccfgs needs a v2 directive")
        control = (frozenset(nonterminals) - frozenset(v2), frozenset(v2))
    g = StateGrammar(
        nonterminals=frozenset(nonterminals),
        terminals=frozenset(terminals),
        productions=tuple(rules),
        axiom=axiom,
        states=frozenset(states),
        initial_state=start_state,
        final_states=frozenset(finals),
        counters=counters,
        control=control,
        control_variant=variant,
        acceptance=acceptance,
    )
    problems = validate(g)
    if problems:
        raise ParseError(kind_line, f"grammar invalid: {problems[0]}")
    shape = classify(g).shape
    if kind == "rlgs" and shape != RIGHT_LINEAR:
        raise ParseError(kind_line, "kind rlgs but the rules are not right-linear")
    if kind == "lgs" and shape not in (LINEAR, RIGHT_LINEAR):
        raise ParseError(kind_line, "kind lgs but the rules are not linear")
    return g


def _rhs(toks: list[str], ln: int) -> tuple[str, ...]:
    if not toks:
        raise ParseError(ln, "missing right-hand side (use eps for the empty word)")
    if toks == ["eps"]:
        return ()
    return tuple(_unquote(t) for t in toks)


# ---------------------------------------------------------------------------
# machines


def print_machine(m: CounterMachine) -> str:
    kind = "npcm" if m.stack_alphabet is not None else "ncm"
    k = m.counters.count
    lines = [f"machine {kind}"]
    if k:
        bounds = set(m.counters.bounds)
        if len(bounds) == 1:
            lines.append(f"counters {k} reversal {m.counters.bounds[0]}")
        else:
            lines.append(f"counters {k} reversal {','.join(map(str, m.counters.bounds))}")
    lines.append("states " + " ".join(_quote(s) for s in sorted(m.states)))
    lines.append(f"initial {_quote(m.initial_state)}")
    lines.append("final " + " ".join(_quote(s) for s in sorted(m.final_states)))
    lines.append("input " + " ".join(_quote(s) for s in sorted(m.input_alphabet)))
    if m.stack_alphabet is not None:
        rest = sorted(m.stack_alphabet - {m.bottom})
        lines.append("stack " + " ".join(_quote(s) for s in [m.bottom] + rest))
    for t in m.transitions:
        inp = _quote(t.inp) if t.inp is not None else "eps"
        parts = [f"trans {_quote(t.src)} {inp}"]
        if k:
            parts.append(_guard_text(t.guard))
        if m.stack_alphabet is not None:
            parts.append(_quote(t.top))
        parts.append("->")
        parts.append(_quote(t.dst))
        if k:
            parts.append(_update_text(t.update))
        if m.stack_alphabet is not None:
            parts.append(" ".join(_quote(s) for s in t.push) if t.push else "eps")
        lines.append(" ".join(parts))
    return "\n".join(lines) + "\n"


def parse_machine_file(text: str) -> CounterMachine:
    kind = None
    counters = CounterSpec()
    states: list[str] = []
    initial = None
    finals: list[str] = []
    inputs: list[str] = []
    stack: list[str] | None = None
    transitions: list[Transition] = []
    kind_line = 1

    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head, rest = toks[0], toks[1:]
        if head == "machine":
            if len(rest) != 1 or rest[0] not in ("ncm", "npcm"):
                raise ParseError(ln, "machine must be ncm or npcm")
            kind = rest[0]
            kind_line = ln
        elif head == "counters":
            try:
                k = int(rest[0])
            except (IndexError, ValueError):
                raise ParseError(ln, "bad counters directive") from None
            if len(rest) >= 3 and rest[1] == "reversal":
                if "," in rest[2]:
                    bounds = tuple(int(x) for x in rest[2].split(","))
                    counters = CounterSpec(k, REVERSAL_BOUNDED, bounds)
                else:
                    counters = CounterSpec.reversal(k, int(rest[2]))
            else:
                raise ParseError(ln, "machine counters need 'reversal <r>'")
        elif head == "states":
            states = [_unquote(t) for t in rest]
        elif head == "initial":
            initial = _unquote(rest[0])
        elif head == "final":
            finals = [_unquote(t) for t in rest]
        elif head == "input":
            inputs = [_unquote(t) for t in rest]
        elif head == "stack":
            stack = [_unquote(t) for t in rest]
        elif head == "trans":
            if kind is None:
                raise ParseError(ln, "machine kind must come before transitions")
            k = counters.count
            has_stack = kind == "npcm"
            arrow = 2 + (1 if k else 0) + (1 if has_stack else 0)
            need = arrow + 2 + (1 if k else 0) + (1 if has_stack else 0)
            if len(rest) < need or rest[arrow] != "->":
                raise ParseError(ln, "malformed transition")
            src = _unquote(rest[0])
            inp = None if rest[1] == "eps" else _unquote(rest[1])
            idx = 2
            guard: tuple[str, ...] = ()
            if k:
                guard = _parse_guard(rest[idx], k, ln)
                idx += 1
            top = None
            if has_stack:
                top = _unquote(rest[idx])
                idx += 1
            idx += 1  # '->'
            dst = _unquote(rest[idx])
            idx += 1
            update: tuple[int, ...] = ()
            if k:
                update = _parse_update(rest[idx], k, ln)
                idx += 1
            push: tuple[str, ...] = ()
            if has_stack:
                push_toks = rest[idx:]
                if not push_toks:
                    raise ParseError(ln, "missing push word (use eps to pop)")
                push = () if push_toks == ["eps"] else tuple(_unquote(t) for t in push_toks)
            transitions.append(Transition(src, inp, guard, top, dst, update, push))
        else:
            raise ParseError(ln, f"unknown directive {head!r}")

    if kind is None:
        raise ParseError(1, "missing machine directive")
    if initial is None:
        raise ParseError(kind_line, "missing initial state")
    if kind == "npcm" and not stack:
        raise ParseError(kind_line, "npcm needs a stack directive (bottom marker first)")
    m = CounterMachine(
        states=frozenset(states),
        input_alphabet=frozenset(inputs),
        counters=counters,
        stack_alphabet=frozenset(stack) if kind == "npcm" else None,
        bottom=stack[0] if kind == "npcm" else None,
        transitions=tuple(transitions),
        initial_state=initial,
        final_states=frozenset(finals),
    )
    from .machine import validate_machine

    problems = validate_machine(m)
    if problems:
        raise ParseError(kind_line, f"machine invalid: {problems[0]}")
    return m


# ---------------------------------------------------------------------------
# controlled CFGs (grammar file plus control-automaton directives)


def print_controlled(c: ControlledCFG) -> str:
    lines = [print_grammar(c.base).rstrip("\n")]
    lines.append("control_labels " + " ".join(_quote(l) for l in c.control.labels))
    fa = c.control.fa
    lines.append("control_states " + " ".join(_quote(s) for s in sorted(fa.states)))
    lines.append(f"control_initial {_quote(fa.initial)}")
    lines.append("control_final " + " ".join(_quote(s) for s in sorted(fa.finals)))
    for s, l, d in fa.edges:
        lines.append(f"ctrl {_quote(s)} {_quote(l)} {_quote(d)}")
    return "\n".join(lines) + "\n"


def parse_controlled_file(text: str) -> ControlledCFG:
    grammar_lines = []
    labels: list[str] = []
    cstates: list[str] = []
    cinitial = None
    cfinals: list[str] = []
    edges: list[tuple[str, str, str]] = []
    for ln, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head = toks[0]
        if head == "control_labels":
            labels = [_unquote(t) for t in toks[1:]]
        elif head == "control_states":
            cstates = [_unquote(t) for t in toks[1:]]
        elif head == "control_initial":
            cinitial = _unquote(toks[1])
        elif head == "control_final":
            cfinals = [_unquote(t) for t in toks[1:]]
        elif head == "ctrl":
            if len(toks) != 4:
                raise ParseError(ln, "ctrl <q> <label> <q'> expected")
            edges.append((_unquote(toks[1]), _unquote(toks[2]), _unquote(toks[3])))
        else:
            grammar_lines.append(raw)
    base = parse_grammar_file("\n".join(grammar_lines))
    if cinitial is None:
        raise ParseError(1, "missing control_initial")
    if len(labels) != len(base.productions):
        raise ParseError(1, "control labels must match the production count")
    fa = FiniteAutomaton(frozenset(cstates), tuple(edges), cinitial, frozenset(cfinals))
    return ControlledCFG(base, RegularControl(tuple(labels), fa))
