"""Command-line interface.

Results go to stdout as JSON, diagnostics to stderr. Exit status: 0 on
success, 1 for a negative answer (constraint violated, rule set
incompatible, no outcome), 2 for usage or input errors, 3 when the
evaluation budget ran out.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import conditions as cd
from . import io
from . import programs as pg
from .graph import Morphism, validate
from .repair import V1, V2, NotProperError, preservation_report, repair_program
from .rulebased import IncompatibleRuleSet, check_compatibility, rule_based_repair

OK, NEGATIVE, USAGE, EXHAUSTED = 0, 1, 2, 3


class _Usage(Exception):
    pass


def _emit(obj) -> None:
    sys.stdout.write(io.dumps(obj) + "\n")


def _warn(msg: str) -> None:
    sys.stderr.write(f"grapair: {msg}\n")


def _graph(path):
    return io.graph_from_json(io.load_json(path))


def _condition(path):
    return io.condition_from_json(io.load_json(path))


def _constraint(path):
    c = _condition(path)
    if c.context.size:
        raise _Usage(f"{path}: expected a constraint (condition over the empty graph)")
    return c


def _budget(args) -> pg.Budget:
    base = pg.Budget.from_env()
    if not getattr(args, "budget", None):
        return base
    text = args.budget
    if text.isdigit():
        text = f"steps={text}"
    try:
        return pg.Budget.parse(text, base)
    except ValueError as exc:
        raise _Usage(f"--budget: {exc}") from None


# -- verbs ------------------------------------------------------------------------


def cmd_validate(args) -> int:
    obj = io.load_json(args.file)
    if not isinstance(obj, dict):
        raise _Usage(f"{args.file}: expected a graph object")
    try:
        bad = validate(obj)
    except (KeyError, TypeError) as exc:
        raise _Usage(f"{args.file}: malformed record ({exc})") from None
    if bad is None:
        _emit({"valid": True})
        return OK
    _emit({"valid": False, "violation": {"reason": bad.reason, "id": bad.ident}})
    return NEGATIVE


def cmd_check(args) -> int:
    G = _graph(args.graph)
    c = _constraint(args.constraint)
    ok = cd.graph_satisfies(G, c)
    _emit({"satisfied": ok, "constraint": cd.pretty(c)})
    return OK if ok else NEGATIVE


def cmd_anf(args) -> int:
    c = _condition(args.condition)
    try:
        a = cd.to_anf(c)
    except cd.NonLinearError:
        _warn("condition is not linear; no normal form is computed")
        _emit({"error": "non-linear"})
        return NEGATIVE
    k = cd.classify(a)
    _emit({"condition": io.condition_to_json(a), "pretty": cd.pretty(a),
           "class": {"linear": k.linear, "anf": k.anf, "proper": k.proper, "basic": k.basic}})
    return OK


def cmd_shift(args) -> int:
    b = io.morphism_from_json(io.load_json(args.morphism))
    c = _condition(args.condition)
    if c.context != b.dom:
        raise _Usage("the condition must be over the domain of the morphism")
    s = cd.shift(b, c)
    _emit({"condition": io.condition_to_json(s), "pretty": cd.pretty(s)})
    return OK


def cmd_synthesize(args) -> int:
    d = _constraint(args.constraint)
    try:
        p = repair_program(d, args.variant)
    except NotProperError as exc:
        _warn(str(exc))
        _emit({"error": "not-proper", "pretty": cd.pretty(d)})
        return NEGATIVE
    _emit({"program": io.program_to_json(p), "listing": pg.pretty(p)})
    return OK


def _outcomes(p, G, args):
    budget = _budget(args)
    start = Morphism.empty(G)
    if pg.left(p).size:
        raise _Usage("the program's left interface must be empty to run on a graph")
    if args.one:
        r = pg.run_one(p, start, args.seed, budget)
        return ([r.outcome] if r.outcome else []), r.exhausted
    run = pg.run_all(p, start, budget)
    return run.outcomes, run.exhausted


def _exports(outcomes, args, report: dict) -> None:
    if args.dot:
        files = []
        for k, o in enumerate(outcomes, 1):
            files += [str(f) for f in io.write_trace_dot(o, Path(args.dot) / f"outcome{k}")]
        report["dot"] = files
    if args.figures:
        from . import plotting

        d = Path(args.figures)
        figs = []
        for k, o in enumerate(outcomes, 1):
            figs.append(str(plotting.save_trace(o, d / f"outcome{k}_trace.png", f"outcome {k}")))
            figs.append(str(plotting.save_graph(o.result, d / f"outcome{k}_result.png", f"result {k}")))
        report["figures"] = figs


def _status(outcomes, exhausted, ok=True) -> int:
    if exhausted:
        _warn("budget exhausted; outcomes are incomplete")
        return EXHAUSTED
    if not outcomes:
        _warn("the program has no outcome on this graph")
        return NEGATIVE
    return OK if ok else NEGATIVE


def cmd_apply(args) -> int:
    p = io.program_from_json(io.load_json(args.program))
    G = _graph(args.graph)
    outs, exhausted = _outcomes(p, G, args)
    report = {
        "exhausted": exhausted,
        "outcomes": [
            {"graph": io.graph_to_json(o.result), "preserved": o.preserved(),
             "trace": [t.rule.name for t in o.trace]}
            for o in outs
        ],
    }
    _exports(outs, args, report)
    _emit(report)
    return _status(outs, exhausted)


def _table(rows) -> str:
    lines = [f"{'set':<8} {'rule':<10} {'status':<10} detail"]
    for r in rows:
        detail = " ".join(r.get("via", [])) or "; ".join(" ".join(g) for g in r.get("label_gap", []))
        if r["status"] == "not-found":
            detail = f"none within depth {r['depth']}"
        lines.append(f"{r['set'] or '-':<8} {r['rule']:<10} {r['status']:<10} {detail}")
    return "\n".join(lines)


def cmd_compat(args) -> int:
    rs = io.ruleset_from_json(io.load_json(args.rules))
    d = _constraint(args.constraint)
    try:
        ev = check_compatibility(rs, d, args.variant, args.depth)
    except NotProperError as exc:
        _warn(str(exc))
        return NEGATIVE
    sys.stderr.write(_table(ev.rows()) + "\n")
    _emit({"compatible": ev.compatible, "summary": ev.summary(), "rules": ev.rows()})
    return OK if ev.compatible else NEGATIVE


def cmd_repair(args) -> int:
    d = _constraint(args.constraint)
    G = _graph(args.graph)
    try:
        if args.rules:
            rs = io.ruleset_from_json(io.load_json(args.rules))
            p = rule_based_repair(rs, d, args.variant, args.depth)
        else:
            p = repair_program(d, args.variant)
    except NotProperError as exc:
        _warn(str(exc))
        _emit({"error": "not-proper"})
        return NEGATIVE
    except IncompatibleRuleSet as exc:
        _warn(str(exc))
        sys.stderr.write(_table(exc.evidence.rows()) + "\n")
        _emit({"error": "incompatible", "rules": exc.evidence.rows()})
        return NEGATIVE
    outs, exhausted = _outcomes(p, G, args)
    rows = []
    all_ok = True
    for o in outs:
        ok = cd.graph_satisfies(o.result, d)
        all_ok &= ok
        rows.append({"graph": io.graph_to_json(o.result), "satisfies": ok,
                     "preservation": preservation_report(o, d).as_dict()})
    report = {"listing": pg.pretty(p), "exhausted": exhausted, "outcomes": rows}
    _exports(outs, args, report)
    _emit(report)
    return _status(outs, exhausted, all_ok)


# -- parser ---------------------------------------------------------------------------


def _run_flags(sp):
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--one", action="store_true", help="sample one outcome (seeded)")
    g.add_argument("--all", action="store_true", help="enumerate all outcomes (default)")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", help="steps=N,outcomes=N,size=N or a step count")
    sp.add_argument("--dot", metavar="DIR", help="write per-step DOT files")
    sp.add_argument("--figures", metavar="DIR", help="write PNG renderings of the traces")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="grapair", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="verb", required=True)

    sp = sub.add_parser("validate", help="check a graph file for well-formedness")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("check", help="does a graph satisfy a constraint")
    sp.add_argument("--graph", required=True)
    sp.add_argument("--constraint", required=True)
    sp.set_defaults(fn=cmd_check)

    sp = sub.add_parser("anf", help="normal form and classification of a linear condition")
    sp.add_argument("--condition", required=True)
    sp.set_defaults(fn=cmd_anf)

    sp = sub.add_parser("shift", help="shift a condition along a morphism")
    sp.add_argument("--morphism", required=True)
    sp.add_argument("--condition", required=True)
    sp.set_defaults(fn=cmd_shift)

    sp = sub.add_parser("synthesize", help="repair program for a proper constraint")
    sp.add_argument("--constraint", required=True)
    sp.add_argument("--variant", choices=[V1, V2], default=V2)
    sp.set_defaults(fn=cmd_synthesize)

    sp = sub.add_parser("apply", help="run a program on a graph")
    sp.add_argument("--program", required=True)
    sp.add_argument("--graph", required=True)
    _run_flags(sp)
    sp.set_defaults(fn=cmd_apply)

    sp = sub.add_parser("compat", help="is a rule set compatible with a constraint")
    sp.add_argument("--rules", required=True)
    sp.add_argument("--constraint", required=True)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--variant", choices=[V1, V2], default=V2)
    sp.set_defaults(fn=cmd_compat)

    sp = sub.add_parser("repair", help="synthesize and run a repair program")
    sp.add_argument("--constraint", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--rules", help="build the program from this rule set only")
    sp.add_argument("--variant", choices=[V1, V2], default=V2)
    sp.add_argument("--depth", type=int, default=3)
    _run_flags(sp)
    sp.set_defaults(fn=cmd_repair)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code else OK
    try:
        return args.fn(args)
    except (_Usage, io.FormatError, pg.ProgramError) as exc:
        _warn(str(exc))
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
