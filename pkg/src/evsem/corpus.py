"""Replayable case file of worked examples, counterexamples and properties.

A case is a JSON object::

    {"id": "...", "kind": "...", "anchor": "...", "evars": "single",
     "payload": {...}, "expected": ...}

Every bound a case depends on lives in its payload; nothing is defaulted for
bounded non-existence claims.  Reports are sorted by id and contain no
timings, so two runs with the same inputs are byte-identical.
"""
from __future__ import annotations

import fnmatch
import json
from dataclasses import dataclass
from importlib import resources

from . import config
from .derivations import System, check_derivation, derivation_from_json
from .errors import EvsemError
from .reduction import redexes, reduces_to
from .search import Bounds, check_judgment
from .syntax import parse_judgment, parse_subtype_goal, parse_term, parse_type

KINDS = ("Derivable", "NotDerivableBounded", "Reduction", "NonReduction",
         "MeaningIn", "MeaningDisagreement", "Property")


@dataclass(frozen=True)
class CorpusCase:
    id: str
    kind: str
    anchor: str
    payload: dict
    expected: object
    evars: str = config.SINGLE

    @classmethod
    def from_json(cls, data: dict) -> "CorpusCase":
        kind = data["kind"]
        if kind not in KINDS:
            raise ValueError(f"case {data.get('id')!r}: unknown kind {kind!r}")
        return cls(data["id"], kind, data.get("anchor", ""), data.get("payload", {}),
                   data["expected"], data.get("evars", config.SINGLE))

    def to_json(self) -> dict:
        return {"id": self.id, "kind": self.kind, "anchor": self.anchor,
                "evars": self.evars, "payload": self.payload, "expected": self.expected}


@dataclass(frozen=True)
class CaseResult:
    case: CorpusCase
    observed: object
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.observed == self.case.expected

    def to_json(self) -> dict:
        return {"id": self.case.id, "kind": self.case.kind, "anchor": self.case.anchor,
                "expected": self.case.expected, "observed": self.observed,
                "pass": self.passed}

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        return (f"{flag} {self.case.id}: expected {json.dumps(self.case.expected)}, "
                f"observed {json.dumps(self.observed)} [{self.case.anchor}]")


def load_cases(text: str | None = None) -> list:
    if text is None:
        text = resources.files("evsem").joinpath("data/corpus.json").read_text("utf-8")
    return [CorpusCase.from_json(c) for c in json.loads(text)["cases"]]


def _bounds(p) -> Bounds:
    b = p["bounds"]
    return Bounds(b["type_size"], b["depth"], b.get("node_budget", 200_000),
                  b.get("universe_size"))


# ---------------------------------------------------------------------------
# properties

def _prop_redex_sites(p):
    return [s.fires for s in redexes(parse_term(p["term"]))]


def _prop_reduct_typing(p):
    """Count one-step reducts of a derivation's subject that lose its typing."""
    from .derivations import Judgment
    from .reduction import one_step_reducts
    d = derivation_from_json(p["derivation"])
    j = check_derivation(d)
    lost = 0
    for _, n in one_step_reducts(j.subject):
        r = check_judgment(Judgment(n, j.env.restrict(n.fv), j.system, j.result), _bounds(p))
        lost += r.verdict.value == "no-within-fuel"
    return lost


def _prop_subject_reduction(p):
    from .harness import sr_harness
    from .terms import Var
    free = tuple(Var(n, d) for n, d in p.get("free", ()))
    r = sr_harness(p["term_size"], p["type_size"], p["fuel"], free=free)
    return len(r.violations)


def _prop_subject_expansion(p):
    from .harness import expansion_harness
    r = expansion_harness(p["term_size"], p["type_size"], p["expansion_size"], p["fuel"])
    return len(r.violations)


def _prop_typable(p):
    from .harness import derivable_judgments, typable_properties
    from .search import Searcher
    s = Searcher(System.S2, Bounds(12, 8, universe_size=7))
    ds = [s.check(m, g, u).derivation
          for m, g, u in derivable_judgments(p["term_size"], p["type_size"])]
    return len(typable_properties(ds).failures)


def _prop_injective(p):
    from .harness import lowering_injectivity
    r = lowering_injectivity(p["type_size"], evars=tuple(p.get("evars", ("e",))))
    return {"reexpansion_failures": len(r.reexpansion_failures),
            "collisions": len(r.collisions)}


def _prop_soundness(p):
    from .semantics import load_family, soundness_probe
    d = derivation_from_json(p["derivation"])
    outs = 0
    for interp in load_family():
        if interp.kind == "special":
            continue
        outs += len(soundness_probe(d, interp).outs)
    return outs


def _prop_completeness(p):
    from .semantics import completeness_probe
    r = completeness_probe(parse_type(p["type"]), p["term_size"], _bounds(p))
    return {"mismatches": len(r.mismatches), "stability_failures": len(r.stability_failures),
            "unknown": r.unknown}


def _prop_identity_meaning(p):
    """Closed terms outside the sampled meaning of a type are exactly those
    that do not reduce to the target."""
    from .semantics import Verdict, load_family, sampled_member
    from .terms import enumerate_good_terms
    u = parse_type(p["type"])
    target = parse_term(p["target"])
    fam = [I for I in load_family() if I.kind != "special"]
    bad = 0
    for m in enumerate_good_terms(p["term_size"], 0, closed=True):
        inside = sampled_member(m, u, fam).verdict is not Verdict.OUT
        reaches = reduces_to(m, target, p["fuel"]).value == "yes"
        bad += inside != reaches
    return bad


def _prop_subtype(p):
    from .subtyping import check_subtype_algorithmic, check_subtype_declarative
    g = parse_subtype_goal(p["goal"])
    alg = check_subtype_algorithmic(g)
    dec = check_subtype_declarative(g).derivable
    return {"algorithmic": alg, "declarative": dec}


PROPERTIES = {
    "redex-sites": _prop_redex_sites,
    "reduct-typing": _prop_reduct_typing,
    "subject-reduction": _prop_subject_reduction,
    "subject-expansion": _prop_subject_expansion,
    "typable-properties": _prop_typable,
    "lowering-injective": _prop_injective,
    "soundness": _prop_soundness,
    "completeness": _prop_completeness,
    "identity-meaning": _prop_identity_meaning,
    "subtype": _prop_subtype,
}


# ---------------------------------------------------------------------------
# runner

def run_case(case: CorpusCase) -> CaseResult:
    from .semantics import MeaningMode, Verdict, load_family, meaning_member, sampled_member
    p = case.payload
    with config.using_evars(case.evars):
        try:
            k = case.kind
            if k == "Derivable":
                if "derivation" in p:
                    check_derivation(derivation_from_json(p["derivation"]))
                    return CaseResult(case, "accepted")
                r = check_judgment(parse_judgment(p["judgment"]), _bounds(p))
                return CaseResult(case, r.verdict.value)
            if k == "NotDerivableBounded":
                r = check_judgment(parse_judgment(p["judgment"]), _bounds(p))
                return CaseResult(case, r.verdict.value)
            if k in ("Reduction", "NonReduction"):
                r = reduces_to(parse_term(p["term"]), parse_term(p["target"]), p["fuel"])
                return CaseResult(case, r.value)
            if k == "MeaningIn":
                m, u = parse_term(p["term"]), parse_type(p["type"])
                r = meaning_member(m, u, MeaningMode(p["mode"]), _bounds(p))
                return CaseResult(case, "survived" if r.survived else r.verdict.value)
            if k == "MeaningDisagreement":
                m, u = parse_term(p["term"]), parse_type(p["type"])
                fam = [I for I in load_family() if I.kind != "special"]
                s = sampled_member(m, u, fam)
                from .derivations import Judgment
                from .itypes import TypeEnv
                t = check_judgment(Judgment(m, TypeEnv(), System.S2, u), _bounds(p))
                return CaseResult(case, {"sampled": "out" if s.verdict is Verdict.OUT else "not-out",
                                         "typing": t.verdict.value})
            fn = PROPERTIES[p["property"]]
            return CaseResult(case, fn(p))
        except (EvsemError, KeyError, ValueError) as exc:
            return CaseResult(case, {"error": type(exc).__name__}, str(exc))


def run_corpus(cases=None, pattern: str | None = None):
    """``(exit_status, results)``; status 1 iff some case missed its verdict."""
    if cases is None:
        cases = load_cases()
    chosen = sorted((c for c in cases if pattern is None or fnmatch.fnmatchcase(c.id, pattern)),
                    key=lambda c: c.id)
    results = [run_case(c) for c in chosen]
    return (0 if all(r.passed for r in results) else 1), results


def format_report(results, as_json: bool = False) -> str:
    if as_json:
        return "".join(json.dumps(r.to_json(), sort_keys=True, ensure_ascii=False) + "\n"
                       for r in results)
    lines = [r.line() for r in results]
    passed = sum(r.passed for r in results)
    lines.append(f"{passed}/{len(results)} cases passed")
    return "\n".join(lines) + "\n"
