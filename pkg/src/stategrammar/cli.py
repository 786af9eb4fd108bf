"""Command-line front end.

Every command reads the text formats from `fileformat`, prints a
deterministic report (word sets sorted lexicographically, one per line,
the empty word shown as <eps>) and exits 0 on success, 1 on a negative
decision (non-member, empty language, unsolvable instance) and 2 on
usage or input errors.
"""
from __future__ import annotations

import argparse
import sys

from . import decide, derive, machine, reduce, transform
from .core import classify, validate
from .fileformat import (
    ParseError,
    format_word,
    parse_controlled_file,
    parse_grammar_file,
    parse_machine_file,
    parse_word,
    print_controlled,
    print_grammar,
    print_machine,
)

TRANSFORM_PASSES = (
    "lgs-to-lg",
    "to-regctrl",
    "from-regctrl",
    "normal-form",
    "strip-counters",
    "cfgmc-to-cfgsc",
    "cfgmc-to-ccfgs",
    "expand-ccfgs",
    "degeneralize",
)
MACHINE_TARGETS = ("npcm-lm", "ccfgs-npcm", "ncm", "npcm1")


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _write(path: str, text: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _budget(args, g=None) -> derive.Budget:
    max_len = args.max_len
    steps = args.max_steps if args.max_steps else 10 * max_len + 20
    counter = args.max_counter if args.max_counter is not None else 2 * max_len + 2
    return derive.Budget(
        max_steps=steps,
        max_form_len=max_len + 8,
        max_counter=counter,
        max_word_len=max_len,
    )


def _add_budget_flags(p: argparse.ArgumentParser):
    p.add_argument("--max-len", type=int, default=10, help="word length bound")
    p.add_argument("--max-steps", type=int, default=0, help="derivation step cap")
    p.add_argument(
        "--max-counter", type=int, default=None, help="counter value cap"
    )


def _parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="stategrammar",
        description="State grammars with counters: derivation, transformation, "
        "machine simulation, emptiness and subset-sum reductions.",
    )
    sub = ap.add_subparsers(dest="cmd", required=True)

    p = sub.add_parser("validate", help="report grammar well-formedness violations")
    p.add_argument("file")

    p = sub.add_parser("classify", help="shape (right_linear/linear/context_free) and lambda-freeness")
    p.add_argument("file")

    p = sub.add_parser("enumerate", help="words derivable within the budget")
    p.add_argument("file")
    p.add_argument("--mode", default="free", choices=derive.MODES)
    _add_budget_flags(p)

    p = sub.add_parser("member", help="search a derivation of WORD")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("--mode", default="free", choices=derive.MODES)
    p.add_argument("--trace", action="store_true", help="print the derivation")
    _add_budget_flags(p)

    p = sub.add_parser("transform", help="apply a grammar transformation")
    p.add_argument("file")
    p.add_argument("--pass", dest="pass_name", required=True, choices=TRANSFORM_PASSES)
    p.add_argument("-o", "--output", required=True)

    p = sub.add_parser("to-machine", help="build a counter machine from the grammar")
    p.add_argument("file")
    p.add_argument("--target", required=True, choices=MACHINE_TARGETS)
    p.add_argument("-o", "--output", required=True)

    pm = sub.add_parser("machine", help="run, enumerate or test machines")
    msub = pm.add_subparsers(dest="mcmd", required=True)
    p = msub.add_parser("run", help="does the machine accept WORD?")
    p.add_argument("file")
    p.add_argument("word")
    p.add_argument("--trace", action="store_true")
    _add_budget_flags(p)
    p = msub.add_parser("enumerate", help="accepted words within the budget")
    p.add_argument("file")
    _add_budget_flags(p)
    p = msub.add_parser("empty", help="bounded-witness emptiness (stackless machines)")
    p.add_argument("file")
    p.add_argument("--cap", type=int, required=True, help="counter value cap")

    p = sub.add_parser("empty", help="finite-index emptiness of a grammar")
    p.add_argument("file")
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--cap", type=int, required=True)
    p.add_argument("--mode", default="free", choices=(derive.FREE, derive.LEFTMOST))
    p.add_argument("--via-machine", action="store_true")

    p = sub.add_parser("subset-sum", help="solve subset-sum through a reduction")
    p.add_argument("--xs", required=True, help="comma-separated positive integers")
    p.add_argument("--target", type=int, required=True)
    p.add_argument("--route", default="cfgsc", choices=("cfgsc", "rlgsc"))

    p = sub.add_parser("gadget", help="binary-number grammar gadget")
    p.add_argument("--binary", required=True, help="bits, least significant first")
    p.add_argument("-o", "--output", required=True)
    return ap


def _words_report(words, max_len: int) -> str:
    chosen = sorted(format_word(w) for w in words if len(w) <= max_len)
    return "\n".join(chosen)


def _cmd_enumerate(args) -> tuple[int, str]:
    g = parse_grammar_file(_read(args.file))
    words = derive.enumerate_words(g, args.mode, _budget(args))
    return 0, _words_report(words, args.max_len)


def _cmd_member(args) -> tuple[int, str]:
    g = parse_grammar_file(_read(args.file))
    word = parse_word(args.word, g.terminals)
    d = derive.member(g, args.mode, word, _budget(args))
    if d is None:
        return 1, f"NOT A MEMBER within budget: {format_word(word)}"
    out = f"MEMBER: {format_word(word)} ({len(d.rules)} steps, index {d.index(g)})"
    if args.trace:
        out += "\n" + d.format(g)
    return 0, out


def _cmd_transform(args) -> tuple[int, str]:
    name = args.pass_name
    if name == "from-regctrl":
        c = parse_controlled_file(_read(args.file))
        out_g = transform.regctrl_to_cfgs(c)
        _write(args.output, print_grammar(out_g))
        return 0, f"wrote {args.output}"
    g = parse_grammar_file(_read(args.file))
    if name == "lgs-to-lg":
        _write(args.output, print_grammar(transform.lgs_to_lg(g)))
    elif name == "to-regctrl":
        _write(args.output, print_controlled(transform.cfgs_to_regctrl(g)))
    elif name == "normal-form":
        _write(args.output, print_grammar(transform.to_normal_form(g)))
    elif name == "strip-counters":
        out_g, filt = transform.strip_counters(transform.to_normal_form(g))
        text = print_grammar(out_g)
        for c, d in filt.pairs:
            text += f"# balance {c} {d}\n"
        _write(args.output, text)
    elif name == "cfgmc-to-cfgsc":
        _write(args.output, print_grammar(transform.cfgmc_to_cfgsc(g)))
    elif name == "cfgmc-to-ccfgs":
        _write(args.output, print_grammar(transform.cfgmc_to_ccfgs(g)))
    elif name == "expand-ccfgs":
        _write(args.output, print_grammar(transform.expand_ccfgs_states(g)))
    elif name == "degeneralize":
        _write(args.output, print_grammar(transform.degeneralize(g)))
    return 0, f"wrote {args.output}"


def _cmd_to_machine(args) -> tuple[int, str]:
    g = parse_grammar_file(_read(args.file))
    build = {
        "npcm-lm": machine.cfgsc_lm_to_npcm,
        "ccfgs-npcm": machine.ccfgs_to_npcm,
        "ncm": machine.rlgsc_to_ncm,
        "npcm1": machine.lgsc_to_npcm1,
    }[args.target]
    _write(args.output, print_machine(build(g)))
    return 0, f"wrote {args.output}"


def _cmd_machine(args) -> tuple[int, str]:
    m = parse_machine_file(_read(args.file))
    if args.mcmd == "run":
        word = parse_word(args.word, m.input_alphabet)
        run = machine.accepts(m, word, _budget(args))
        if run is None:
            return 1, f"REJECTED within budget: {format_word(word)}"
        out = f"ACCEPTED: {format_word(word)} ({len(run.transitions)} moves)"
        if args.trace:
            cfgs = machine.replay_run(m, run)
            out += "\n" + "\n".join(
                f"  ({c.state}, read {c.consumed}, [{','.join(map(str, c.counters))}],"
                f" stack {' '.join(c.stack) if c.stack else '-'})"
                for c in cfgs
            )
        return 0, out
    if args.mcmd == "enumerate":
        words = machine.enumerate_words(m, _budget(args))
        return 0, _words_report(words, args.max_len)
    res = machine.ncm_empty_bounded(m, args.cap)
    if res.nonempty:
        return 0, f"NONEMPTY: witness {format_word(res.witness)}"
    qual = "" if res.exhaustive else " (within cap)"
    return 1, f"EMPTY{qual} at cap {args.cap}"


def _cmd_empty(args) -> tuple[int, str]:
    g = parse_grammar_file(_read(args.file))
    dec = decide.cfgsc_index_emptiness(
        g, args.index, args.cap, via_machine=args.via_machine, mode=args.mode
    )
    return (0 if dec.nonempty else 1), dec.describe()


def _cmd_subset_sum(args) -> tuple[int, str]:
    try:
        values = tuple(int(x) for x in args.xs.split(","))
    except ValueError:
        return 2, "values must be comma-separated integers"
    inst = reduce.SubsetSumInstance(values, args.target)
    res = reduce.solve_subset_sum(inst, args.route)
    if res.solvable:
        chosen = ",".join(str(v) for v in res.chosen_values)
        return 0, f"SOLVABLE: subset {{{chosen}}} sums to {args.target}"
    return 1, f"EMPTY (no subset sums to {args.target})"


def _cmd_gadget(args) -> tuple[int, str]:
    g = reduce.binary_gadget(args.binary)
    _write(args.output, print_grammar(g))
    value = reduce.encoded_value(args.binary)
    return 0, f"wrote {args.output} (counter value {value})"


def run_command(argv: list[str]) -> tuple[int, str]:
    """Dispatch a command line; returns (exit status, report text)."""
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return (0 if e.code in (0, None) else 2), ""
    try:
        if args.cmd == "validate":
            g = parse_grammar_file(_read(args.file))
            problems = validate(g)
            if problems:
                return 1, "\n".join(problems)
            return 0, "valid"
        if args.cmd == "classify":
            g = parse_grammar_file(_read(args.file))
            c = classify(g)
            return 0, f"shape {c.shape}, lambda_free {str(c.lambda_free).lower()}"
        if args.cmd == "enumerate":
            return _cmd_enumerate(args)
        if args.cmd == "member":
            return _cmd_member(args)
        if args.cmd == "transform":
            return _cmd_transform(args)
        if args.cmd == "to-machine":
            return _cmd_to_machine(args)
        if args.cmd == "machine":
            return _cmd_machine(args)
        if args.cmd == "empty":
            return _cmd_empty(args)
        if args.cmd == "subset-sum":
            return _cmd_subset_sum(args)
        if args.cmd == "gadget":
            return _cmd_gadget(args)
        return 2, f"unknown command {args.cmd!r}"
    except (ParseError, ValueError, OSError) as e:
        return 2, f"error: {e}"


def main() -> None:
    status, report = run_command(sys.argv[1:])
    if report:
        print(report)
    sys.exit(status)


if __name__ == "__main__":
    main()
