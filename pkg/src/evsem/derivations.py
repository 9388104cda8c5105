"""Judgments, explicit derivation trees and a rule-by-rule checker.

``System.S1`` has no subsumption and accepts arbitrary types.  ``System.S2``
restricts types to the grammar ``U`` (arrows only to the right of
intersections and expansions) and adds a subsumption rule whose evidence is
an explicit subtyping proof stored on the node.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import GrammarViolation, RuleMismatch
from .itypes import (Arrow, Type, TypeEnv, env_expand, env_joinable, env_meet, exp,
                     in_T, in_U, inter)
from .subtyping import GoalKind, SubProof, check_subproof
from .terms import App, Lam, Term, Var, lift


class System(enum.IntEnum):
    S1 = 1
    S2 = 2


class Rule(enum.Enum):
    AX = "Ax"
    ARR_I = "ArrI"
    ARR_E = "ArrE"
    INTER = "Inter"
    EXP = "Exp"
    SUB = "Sub"


@dataclass(frozen=True)
class Judgment:
    subject: Term
    env: TypeEnv
    system: System
    result: Type

    @property
    def typing(self):
        return (self.env, self.result)

    def grammar_ok(self) -> bool:
        if self.system is System.S1:
            return True
        return in_U(self.result) and all(in_U(t) for t in self.env.types())

    def __str__(self):
        from .syntax import print_judgment
        return print_judgment(self)


@dataclass(frozen=True)
class Derivation:
    rule: Rule
    conclusion: Judgment
    premises: tuple = ()
    evar: str | None = None
    subproof: SubProof | None = None

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def types(self):
        """Every type occurring in a conclusion of the tree."""
        out = []
        for d in self.nodes():
            out.append(d.conclusion.result)
            out.extend(d.conclusion.env.types())
        return out


def _bad(path, msg):
    raise RuleMismatch(path, msg)


def check_derivation(d: Derivation, path=()) -> Judgment:
    """Return the conclusion of ``d`` if every node instantiates its rule.

    Raises :class:`RuleMismatch` at the first offending node (premises are
    checked first) and :class:`GrammarViolation` for S2 types outside ``U``.
    """
    prem = [check_derivation(p, path + (i,)) for i, p in enumerate(d.premises)]
    j = d.conclusion
    sysm = j.system
    if not j.grammar_ok():
        raise GrammarViolation(path, "S2 judgments only use types of the U grammar")
    for p in prem:
        if p.system != sysm:
            _bad(path, "premise belongs to another system")
    m, g, u = j.subject, j.env, j.result
    r = d.rule
    if r is Rule.AX:
        if prem:
            _bad(path, "an axiom has no premises")
        if not isinstance(m, Var):
            _bad(path, "axiom subject must be a variable")
        if g != TypeEnv(((m, u),)):
            _bad(path, "axiom environment must bind exactly the subject to the result")
        if not u.good:
            _bad(path, "axiom type must be good")
        if sysm is System.S1:
            if u.degree != m.deg:
                _bad(path, "axiom type degree must equal the variable degree")
        else:
            if m.deg != 0:
                _bad(path, "S2 axioms are for degree-0 variables")
            if not in_T(u):
                _bad(path, "S2 axiom type must be in the T grammar")
            assert u.degree == 0
    elif r is Rule.ARR_I:
        if len(prem) != 1 or not isinstance(m, Lam):
            _bad(path, "ArrI needs an abstraction and one premise")
        p = prem[0]
        x = m.binder
        if p.subject != m.body:
            _bad(path, "ArrI premise subject is not the body")
        if x not in p.env:
            _bad(path, "ArrI premise does not bind the abstracted variable")
        if p.env.remove(x) != g:
            _bad(path, "ArrI environment mismatch")
        if u != Arrow(p.env[x], p.result):
            _bad(path, "ArrI result is not the discharged arrow")
        if sysm is System.S2 and not in_T(p.result):
            _bad(path, "S2 ArrI target must be in the T grammar")
    elif r is Rule.ARR_E:
        if len(prem) != 2 or not isinstance(m, App):
            _bad(path, "ArrE needs an application and two premises")
        f, a = prem
        if f.subject != m.fn or a.subject != m.arg:
            _bad(path, "ArrE premise subjects do not match the application")
        if not isinstance(f.result, Arrow) or f.result.left != a.result:
            _bad(path, "ArrE function type does not accept the argument type")
        if f.result.right != u:
            _bad(path, "ArrE result mismatch")
        if not env_joinable(f.env, a.env):
            _bad(path, "ArrE environments are not joinable")
        if env_meet(f.env, a.env) != g:
            _bad(path, "ArrE environment is not the meet of the premises")
    elif r is Rule.INTER:
        if len(prem) != 2:
            _bad(path, "Inter needs two premises")
        a, b = prem
        if a.subject != m or b.subject != m:
            _bad(path, "Inter premises must share the subject")
        if not env_joinable(a.env, b.env) or env_meet(a.env, b.env) != g:
            _bad(path, "Inter environment is not the meet of the premises")
        if inter(a.result, b.result) != u:
            _bad(path, "Inter result is not the intersection of the premises")
    elif r is Rule.EXP:
        if len(prem) != 1 or not d.evar:
            _bad(path, "Exp needs one premise and an expansion variable")
        p = prem[0]
        e = d.evar
        if lift(p.subject) != m:
            _bad(path, "Exp subject is not the lift of the premise subject")
        if env_expand(e, p.env) != g:
            _bad(path, "Exp environment is not the expansion of the premise")
        if exp(e, p.result) != u:
            _bad(path, "Exp result is not the expansion of the premise")
    elif r is Rule.SUB:
        if sysm is not System.S2:
            _bad(path, "subsumption is only available in S2")
        if len(prem) != 1 or d.subproof is None:
            _bad(path, "Sub needs one premise and subtyping evidence")
        p = prem[0]
        if p.subject != m:
            _bad(path, "Sub premise subject differs")
        try:
            goal = check_subproof(d.subproof)
        except RuleMismatch as exc:
            _bad(path, f"bad subtyping evidence: {exc}")
        if goal.kind is GoalKind.TYPING:
            ok = goal.lhs == (p.env, p.result) and goal.rhs == (g, u)
        elif goal.kind is GoalKind.TYPE:
            ok = p.env == g and goal.lhs == p.result and goal.rhs == u
        else:
            ok = False
        if not ok:
            _bad(path, "subtyping evidence does not relate premise and conclusion")
    else:  # pragma: no cover
        _bad(path, f"unknown rule {r}")
    return j


def is_valid(d: Derivation) -> bool:
    try:
        check_derivation(d)
        return True
    except RuleMismatch:
        return False


# ---------------------------------------------------------------------------
# small constructors used by the search and by tests

def ax(x: Var, t: Type, system: System) -> Derivation:
    return Derivation(Rule.AX, Judgment(x, TypeEnv(((x, t),)), system, t))


def arr_i(binder: Var, d: Derivation) -> Derivation:
    c = d.conclusion
    j = Judgment(Lam(binder, c.subject), c.env.remove(binder), c.system,
                 Arrow(c.env[binder], c.result))
    return Derivation(Rule.ARR_I, j, (d,))


def arr_e(f: Derivation, a: Derivation) -> Derivation:
    cf, ca = f.conclusion, a.conclusion
    j = Judgment(App(cf.subject, ca.subject), env_meet(cf.env, ca.env), cf.system,
                 cf.result.right)
    return Derivation(Rule.ARR_E, j, (f, a))


def inter_rule(a: Derivation, b: Derivation) -> Derivation:
    ca, cb = a.conclusion, b.conclusion
    j = Judgment(ca.subject, env_meet(ca.env, cb.env), ca.system, inter(ca.result, cb.result))
    return Derivation(Rule.INTER, j, (a, b))


def exp_rule(e: str, d: Derivation) -> Derivation:
    c = d.conclusion
    j = Judgment(lift(c.subject), env_expand(e, c.env), c.system, exp(e, c.result))
    return Derivation(Rule.EXP, j, (d,), evar=e)


def sub_rule(d: Derivation, env: TypeEnv, result: Type, proof: SubProof) -> Derivation:
    c = d.conclusion
    return Derivation(Rule.SUB, Judgment(c.subject, env, c.system, result), (d,),
                      subproof=proof)


# ---------------------------------------------------------------------------
# JSON exchange format

def _side_str(x):
    from .syntax import print_env, print_type, print_typing
    if isinstance(x, Type):
        return print_type(x)
    if isinstance(x, TypeEnv):
        return "{" + ("" if not len(x) else print_env(x)) + "}"
    g, u = x
    return print_typing(g, 2, u)


def subproof_to_json(p: SubProof) -> dict:
    from .syntax import print_type, print_var
    out = {"rule": p.rule, "lhs": _side_str(p.lhs), "rhs": _side_str(p.rhs)}
    if p.data is not None:
        if isinstance(p.data, Type):
            out["data"] = print_type(p.data)
        elif isinstance(p.data, Var):
            out["data"] = print_var(p.data)
        else:
            out["data"] = p.data
    if p.premises:
        out["premises"] = [subproof_to_json(q) for q in p.premises]
    return out


def subproof_from_json(data: dict) -> SubProof:
    from .syntax import _Parser, _run, parse_term, parse_type

    def side(text):
        text = text.strip()
        if text.startswith("{"):
            def go(p):
                p.expect("{")
                g = p.env(stop=("}",))
                p.expect("}")
                return g
            return _run(text, go)
        if text.startswith("<"):
            g, _, u = _run(text, _Parser.typing)
            return (g, u)
        return parse_type(text)

    rule = data["rule"]
    extra = data.get("data")
    if extra is not None:
        if rule == "inter_e":
            extra = parse_type(extra)
        elif rule == "env":
            extra = parse_term(extra)
    prem = tuple(subproof_from_json(q) for q in data.get("premises", ()))
    return SubProof(rule, side(data["lhs"]), side(data["rhs"]), prem, extra)


def derivation_to_json(d: Derivation) -> dict:
    from .syntax import print_env, print_term, print_type
    c = d.conclusion
    out = {
        "rule": d.rule.value,
        "system": int(c.system),
        "subject": print_term(c.subject),
        "env": print_env(c.env),
        "type": print_type(c.result),
    }
    if d.evar is not None:
        out["evar"] = d.evar
    if d.subproof is not None:
        out["subtype"] = subproof_to_json(d.subproof)
    out["premises"] = [derivation_to_json(p) for p in d.premises]
    return out


def derivation_from_json(data: dict) -> Derivation:
    from .syntax import parse_env, parse_term, parse_type
    try:
        rule = Rule(data["rule"])
        j = Judgment(parse_term(data["subject"]), parse_env(data.get("env", "()")),
                     System(int(data.get("system", 2))), parse_type(data["type"]))
    except KeyError as exc:
        raise ValueError(f"derivation node lacks field {exc.args[0]!r}") from None
    prem = tuple(derivation_from_json(p) for p in data.get("premises", ()))
    sp = data.get("subtype")
    return Derivation(rule, j, prem, data.get("evar"),
                      subproof_from_json(sp) if sp is not None else None)
