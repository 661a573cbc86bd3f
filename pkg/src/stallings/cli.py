"""Command-line front end.

Exit status is 0 on success, 1 for malformed input or failed validation and
2 when a query needs a hypothesis the section does not provide.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import formats
from .alphabet import InvolutiveAlphabet
from .automaton import Automaton
from .errors import HypothesisRefused, StallingsError
from .pda import Outcome, emit_pda, pda_run, pda_to_text
from .pipeline import SubgroupInput, build_stallings, finite_index, member, recognize
from .rational import benois_reduce, reduce_word
from .sections import StallingsSection, validate_section


def _emit(text: str, out) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _write_automaton(a: Automaton, out) -> None:
    if out and str(out).endswith(".bin"):
        formats.save(a, out)
    else:
        _emit(formats.automaton_to_text(a), out)


def _section(path) -> StallingsSection:
    return formats.load_section(path)


def _bool(v: bool) -> str:
    return "true" if v else "false"


# -- subcommands -------------------------------------------------------------------------


def cmd_section_build(args) -> int:
    sec = formats.section_for(formats.load_group_document(args.group))
    formats.save(sec, args.output)
    print(f"alphabet {' '.join(sec.alphabet.names)}")
    print(f"states {sec.s_auto.n}")
    print(f"extendable {_bool(sec.extendable)}")
    return 0


def cmd_section_validate(args) -> int:
    sec = _section(args.section)
    report = validate_section(sec, budget=args.budget, seed=args.seed)
    print("\n".join(report.lines(sec.alphabet)))
    return 0 if report.ok else 1


def cmd_reduce(args) -> int:
    tokens = args.word.split()
    names = sorted({t[:-3] if t.endswith("^-1") else t for t in tokens} - {"1"})
    alphabet = InvolutiveAlphabet(names)
    print(alphabet.format(reduce_word(alphabet.parse(args.word))))
    return 0


def cmd_benois(args) -> int:
    _write_automaton(benois_reduce(formats.load_automaton(args.automaton)), args.output)
    return 0


def cmd_wp(args) -> int:
    sec = _section(args.section)
    print(_bool(sec.word_problem(sec.parse(args.word))))
    return 0


def cmd_stallings(args) -> int:
    sec = _section(args.section)
    trace = build_stallings(SubgroupInput(sec, [sec.parse(g) for g in args.generator]))
    if args.trace_dir:
        d = Path(args.trace_dir)
        d.mkdir(parents=True, exist_ok=True)
        for name, a in trace.stages():
            (d / f"{name}.txt").write_text(formats.automaton_to_text(a))
            (d / f"{name}.dot").write_text(formats.automaton_to_dot(a, name))
        info = {"generators": [sec.alphabet.format(g) for g in trace.generators],
                "j_pairs": [list(p) for p in trace.j_pairs], "rounds": trace.rounds,
                "stats": trace.stats}
        (d / "trace.json").write_text(json.dumps(info, indent=2, sort_keys=True) + "\n")
    _write_automaton(trace.core, args.output)
    return 0


def cmd_member(args) -> int:
    sec = _section(args.section)
    core = formats.load_automaton(args.core)
    print(_bool(member(sec, core, sec.parse(args.word))))
    return 0


def cmd_index(args) -> int:
    sec = _section(args.section)
    reps = finite_index(sec, formats.load_automaton(args.core))
    if reps is None:
        print("infinite")
    else:
        print(len(reps))
        for r in reps:
            print(sec.alphabet.format(r))
    return 0


def cmd_recognize(args) -> int:
    sec = _section(args.section)
    gens = recognize(sec, formats.load_automaton(args.automaton))
    if gens is None:
        print("false")
    else:
        print("true")
        for g in gens:
            print(sec.alphabet.format(g))
    return 0


def cmd_emit_pda(args) -> int:
    p = emit_pda(_section(args.section))
    if args.output and str(args.output).endswith(".bin"):
        formats.save(p, args.output)
    else:
        _emit(pda_to_text(p), args.output)
    return 0


def cmd_pda_run(args) -> int:
    p = formats.load_pda(args.pda)
    run = pda_run(p, p.alphabet.parse(args.word), args.cutoff, args.budget)
    print({Outcome.ACCEPT: "true", Outcome.REJECT: "false", Outcome.CUTOFF: "cutoff"}[run.outcome])
    return 0


def cmd_export_dot(args) -> int:
    _emit(formats.automaton_to_dot(formats.load_automaton(args.automaton)), args.output)
    return 0


# -- parser -------------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="stallings",
                                 description="Stallings sections and subgroup automata for virtually free groups.")
    sub = ap.add_subparsers(dest="command", required=True)

    sec = sub.add_parser("section", help="build or validate a section")
    secsub = sec.add_subparsers(dest="action", required=True)
    p = secsub.add_parser("build", help="build a section from a group document")
    p.add_argument("group")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_section_build)
    p = secsub.add_parser("validate", help="sampled check of the section axioms")
    p.add_argument("section")
    p.add_argument("--budget", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_section_validate)

    p = sub.add_parser("reduce", help="freely reduce a word")
    p.add_argument("word")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("benois", help="automaton of the reduced forms of a language")
    p.add_argument("automaton")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_benois)

    p = sub.add_parser("wp", help="does a word name the identity")
    p.add_argument("section")
    p.add_argument("word")
    p.set_defaults(func=cmd_wp)

    p = sub.add_parser("stallings", help="core automaton of a finitely generated subgroup")
    p.add_argument("section")
    p.add_argument("-g", "--generator", action="append", default=[])
    p.add_argument("--trace-dir")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_stallings)

    p = sub.add_parser("member", help="subgroup membership")
    p.add_argument("section")
    p.add_argument("core")
    p.add_argument("word")
    p.set_defaults(func=cmd_member)

    p = sub.add_parser("index", help="finite index test with coset representatives")
    p.add_argument("section")
    p.add_argument("core")
    p.set_defaults(func=cmd_index)

    p = sub.add_parser("recognize", help="is an automaton the core automaton of some subgroup")
    p.add_argument("section")
    p.add_argument("automaton")
    p.set_defaults(func=cmd_recognize)

    p = sub.add_parser("emit-pda", help="pushdown automaton for the word problem")
    p.add_argument("section")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_emit_pda)

    p = sub.add_parser("pda-run", help="bounded run of a pushdown automaton on a word")
    p.add_argument("pda")
    p.add_argument("word")
    p.add_argument("--cutoff", type=int, default=12)
    p.add_argument("--budget", type=int, default=None, help="maximum number of configurations")
    p.set_defaults(func=cmd_pda_run)

    p = sub.add_parser("export-dot", help="Graphviz rendering of an automaton")
    p.add_argument("automaton")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export_dot)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except HypothesisRefused as exc:
        print(f"refused: {exc}", file=sys.stderr)
        return 2
    except (StallingsError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
