"""Command-line interface.

Every subcommand accepts ``--json`` and ``--evars single|multi``.  Exit
status is 0 for a positive answer, 1 for a negative or undetermined one
(and for corpus cases that miss their expected verdict), 2 for usage and
parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__, config
from .errors import EvsemError, ParseError, ValidationError


def _emit(args, payload, text):
    if args.json:
        print(json.dumps(payload, sort_keys=True, ensure_ascii=False))
    else:
        print(text)


# ---------------------------------------------------------------------------
# handlers

def cmd_parse(args):
    from . import syntax
    kinds = {
        "term": (syntax.parse_term, syntax.print_term),
        "type": (syntax.parse_type, syntax.print_type),
        "env": (syntax.parse_env, syntax.print_env),
        "judgment": (syntax.parse_judgment, syntax.print_judgment),
    }
    parse, show = kinds[args.kind]
    v = parse(args.text)
    out = show(v)
    _emit(args, {"kind": args.kind, "canonical": out}, out)
    return 0


def _term_or_type(args):
    from .syntax import parse_term, parse_type
    return parse_type(args.text) if args.type else parse_term(args.text)


def cmd_degree(args):
    v = _term_or_type(args)
    d = v.degree
    _emit(args, {"degree": d}, str(d))
    return 0


def cmd_good(args):
    v = _term_or_type(args)
    g = v.good
    _emit(args, {"good": g}, "good" if g else "not good")
    return 0 if g else 1


def cmd_reduce(args):
    from .reduction import Strategy, redexes, reduce
    from .syntax import parse_term, print_term
    m = parse_term(args.term)
    tr = reduce(m, args.fuel, Strategy(args.strategy))
    steps = [{"site": s.site.path_str(), "before": print_term(s.before),
              "after": print_term(s.after)} for s in tr.steps]
    sites = [{"site": r.path_str(), "fires": r.fires} for r in redexes(m)]
    payload = {"strategy": tr.strategy.value, "redexes": sites, "steps": steps,
               "complete": tr.complete}
    lines = [f"blocked redex at {r['site']}" for r in sites if not r["fires"]]
    lines += [f"{s['before']}  --[{s['site']}]-->  {s['after']}" for s in steps]
    if tr.strategy is Strategy.LEFTMOST:
        payload["result"] = print_term(tr.result)
        lines.append(("normal form: " if tr.complete else "fuel exhausted at: ")
                     + payload["result"])
    else:
        payload["reducts"] = [print_term(t) for t in tr.reducts]
        payload["normal_forms"] = [print_term(t) for t in tr.normal_forms()]
        lines.append(f"{len(tr.reducts)} reducts, normal forms: "
                     + (", ".join(payload["normal_forms"]) or "none")
                     + ("" if tr.complete else " (fuel exhausted)"))
    _emit(args, payload, "\n".join(lines))
    return 0 if tr.complete else 1


def cmd_check_deriv(args):
    from .derivations import check_derivation
    from .errors import RuleMismatch
    from .syntax import parse_derivation
    with open(args.file, encoding="utf-8") as fh:
        d = parse_derivation(fh.read())
    try:
        j = check_derivation(d)
    except RuleMismatch as exc:
        _emit(args, {"valid": False, "path": list(exc.path), "reason": exc.reason},
              f"invalid: {exc}")
        return 1
    _emit(args, {"valid": True, "conclusion": str(j)}, f"valid: {j}")
    return 0


def cmd_subtype(args):
    from .derivations import subproof_to_json
    from .subtyping import check_subtype_algorithmic, check_subtype_declarative, prove_goal
    from .syntax import parse_subtype_goal
    g = parse_subtype_goal(args.goal)
    if args.declarative:
        r = check_subtype_declarative(g)
        ok = r.derivable
        payload = {"holds": ok, "method": "declarative", "rounds": r.rounds,
                   "universe": r.universe_size}
        proof = r.proof
    else:
        ok = check_subtype_algorithmic(g)
        payload = {"holds": ok, "method": "algorithmic"}
        proof = prove_goal(g) if ok else None
    if proof is not None and args.proof:
        payload["proof"] = subproof_to_json(proof)
    text = "holds" if ok else "does not hold"
    if "proof" in payload:
        text += "\n" + json.dumps(payload["proof"], indent=1, ensure_ascii=False)
    _emit(args, payload, text)
    return 0 if ok else 1


def _bounds(args):
    from .search import Bounds
    return Bounds(args.type_size, args.depth, args.node_budget)


def cmd_search(args):
    from .derivations import System, derivation_to_json
    from .search import search_typing
    from .syntax import parse_term, parse_typing
    m = parse_term(args.term)
    system = args.system
    goal = None
    if args.goal:
        g, sysm, u = parse_typing(args.goal)
        system = sysm
        goal = (g, u)
    r = search_typing(m, System(system), _bounds(args), goal=goal)
    payload = {"verdict": r.verdict.value, "nodes": r.nodes}
    text = str(r.verdict)
    if r.derivation is not None:
        payload["derivation"] = derivation_to_json(r.derivation)
        text += f": {r.derivation.conclusion}"
        if args.tree:
            text += "\n" + json.dumps(payload["derivation"], indent=1, ensure_ascii=False)
    elif r.verdict.value == "no-within-fuel":
        text = f"absent within type size {args.type_size} and depth {args.depth}"
    _emit(args, payload, text)
    return 0 if r.derivable else 1


def _family(args):
    from .search import Bounds
    from .semantics import load_family
    text = None
    if args.family:
        with open(args.family, encoding="utf-8") as fh:
            text = fh.read()
    fam = load_family(text)
    out = []
    for I in fam:
        kw = {}
        if args.fuel is not None:
            kw["fuel"] = args.fuel
        if args.probe is not None:
            kw["probe_budget"] = args.probe
        if args.type_size is not None:
            kw["bounds"] = Bounds(args.type_size, I.bounds.depth)
        out.append(replace(I, **kw) if kw else I)
    return out


def cmd_member(args):
    from .search import Bounds
    from .semantics import MeaningMode, meaning_member
    from .syntax import parse_term, parse_type
    m, u = parse_term(args.term), parse_type(args.type)
    bounds = Bounds(args.type_size or 8, args.depth)
    r = meaning_member(m, u, MeaningMode(args.mode), bounds, _family(args))
    _emit(args, r.to_json(), r.describe())
    return 0 if r.verdict.value == "in" or r.survived else 1


def cmd_interp_show(args):
    fam = _family(args)
    data = [I.describe() for I in fam]
    lines = []
    for d in data:
        lines.append(f"[{d['name']}] kind={d['kind']} fuel={d['fuel']} probe={d['probe']}")
        for a, gs in d["atoms"].items():
            lines.append(f"  {a}: " + " ; ".join(gs))
    _emit(args, {"interpretations": data}, "\n".join(lines))
    return 0


def cmd_corpus(args):
    from .corpus import format_report, load_cases, run_corpus
    text = None
    if args.cases:
        with open(args.cases, encoding="utf-8") as fh:
            text = fh.read()
    status, results = run_corpus(load_cases(text), args.filter)
    sys.stdout.write(format_report(results, args.json))
    return status


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS keeps a subcommand's default from hiding a global flag
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                        help="machine-readable output")
    common.add_argument("--evars", choices=(config.SINGLE, config.MULTI), default=argparse.SUPPRESS,
                        help="expansion-variable mode (default: $EVSEM_EVARS or single)")

    p = argparse.ArgumentParser(prog="evsem", parents=[common],
                                description="Degree-indexed lambda terms and expansion-variable typing.")
    p.add_argument("--version", action="version", version=f"evsem {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", parents=[common], help="parse and print canonically")
    s.add_argument("kind", choices=("term", "type", "env", "judgment"))
    s.add_argument("text")
    s.set_defaults(func=cmd_parse)

    for name, fn, hlp in (("degree", cmd_degree, "degree of a term or type"),
                          ("good", cmd_good, "is the term or type good")):
        s = sub.add_parser(name, parents=[common], help=hlp)
        s.add_argument("text")
        s.add_argument("--type", action="store_true", help="read TEXT as a type")
        s.set_defaults(func=fn)

    s = sub.add_parser("reduce", parents=[common], help="reduce a term within fuel")
    s.add_argument("term")
    s.add_argument("--fuel", type=int, default=20)
    s.add_argument("--strategy", choices=("leftmost", "all"), default="leftmost")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("check-deriv", parents=[common], help="check a JSON derivation file")
    s.add_argument("file")
    s.set_defaults(func=cmd_check_deriv)

    s = sub.add_parser("subtype", parents=[common], help='decide "U <= V" (also envs and typings)')
    s.add_argument("goal")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--algorithmic", action="store_true", help="default")
    g.add_argument("--declarative", action="store_true")
    s.add_argument("--proof", action="store_true", help="print the subtyping proof")
    s.set_defaults(func=cmd_subtype)

    s = sub.add_parser("search", parents=[common], help="bounded search for a derivation")
    s.add_argument("term")
    s.add_argument("--system", type=int, choices=(1, 2), default=2)
    s.add_argument("--goal", help="typing such as '<x^0: a |-2 a>'")
    s.add_argument("--type-size", type=int, default=6)
    s.add_argument("--depth", type=int, default=8)
    s.add_argument("--node-budget", type=int, default=200_000)
    s.add_argument("--tree", action="store_true", help="print the derivation tree")
    s.set_defaults(func=cmd_search)

    fam = argparse.ArgumentParser(add_help=False)
    fam.add_argument("--family", help="INI file describing the sample interpretations")
    fam.add_argument("--fuel", type=int)
    fam.add_argument("--probe", type=int, help="size of enumerated probe terms")
    fam.add_argument("--type-size", type=int)

    s = sub.add_parser("member", parents=[common, fam], help="semantic membership of a closed term")
    s.add_argument("term")
    s.add_argument("--type", required=True)
    s.add_argument("--mode", choices=("theorem", "sampling"), default="theorem")
    s.add_argument("--depth", type=int, default=8)
    s.set_defaults(func=cmd_member)

    s = sub.add_parser("interp-show", parents=[common, fam], help="list the sample interpretations")
    s.set_defaults(func=cmd_interp_show)

    s = sub.add_parser("corpus", parents=[common], help="replay the case file")
    s.add_argument("--filter", help="glob on case ids")
    s.add_argument("--cases", help="alternative case file")
    s.set_defaults(func=cmd_corpus)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    args.json = getattr(args, "json", False)
    args.evars = getattr(args, "evars", None)
    try:
        if args.evars:
            with config.using_evars(args.evars):
                return args.func(args)
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (ValidationError, EvsemError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
