import json

import pytest

from evsem.derivations import (Derivation, Judgment, Rule, System, arr_e, arr_i, ax,
                               check_derivation, derivation_from_json, derivation_to_json,
                               exp_rule, inter_rule, is_valid, sub_rule)
from evsem.errors import GrammarViolation, RuleMismatch
from evsem.itypes import TypeEnv
from evsem.subtyping import SubtypeGoal, prove, prove_goal
from evsem.syntax import parse_derivation, parse_term, parse_type
from evsem.terms import Var

T = parse_type
x0, y0 = Var("x", 0), Var("y", 0)


def identity(system, t):
    return arr_i(x0, ax(x0, t, system))


def test_identity_derivations():
    j = check_derivation(identity(System.S1, T("a")))
    assert str(j) == r"\x^0. x^0 : <() |-1 a -> a>"


def test_s2_identity_at_intersection_source():
    # x : a & b, weaken to a, then abstract
    a_b = T("a & b")
    leaf = Derivation(Rule.AX, Judgment(x0, TypeEnv(((x0, T("a")),)), System.S2, T("a")))
    proof = prove_goal(SubtypeGoal.of((TypeEnv(((x0, T("a")),)), T("a")),
                                      (TypeEnv(((x0, a_b),)), T("a"))))
    widened = sub_rule(leaf, TypeEnv(((x0, a_b),)), T("a"), proof)
    j = check_derivation(arr_i(x0, widened))
    assert str(j) == r"\x^0. x^0 : <() |-2 (a & b) -> a>"


def test_application_and_intersection():
    f = ax(Var("f", 0), T("a -> b"), System.S1)
    d = arr_e(f, ax(x0, T("a"), System.S1))
    j = check_derivation(d)
    assert str(j.result) == "b"
    both = inter_rule(ax(x0, T("a"), System.S1), ax(x0, T("b"), System.S1))
    assert check_derivation(both).result == T("a & b")


def test_expansion_rule_lifts_everything():
    d = exp_rule("e", identity(System.S2, T("a")))
    j = check_derivation(d)
    assert j.subject == parse_term(r"\x^1. x^1")
    assert j.result == T("e (a -> a)")


def test_wrong_axiom_type_is_reported_with_path():
    bad = Derivation(Rule.AX, Judgment(x0, TypeEnv(((x0, T("a")),)), System.S1, T("b")))
    with pytest.raises(RuleMismatch) as info:
        check_derivation(arr_i(x0, bad))
    assert info.value.path == (0,)


def test_subsumption_is_not_in_s1():
    leaf = ax(x0, T("a & b"), System.S1)
    d = sub_rule(leaf, leaf.conclusion.env, T("a"), prove(T("a & b"), T("a")))
    assert not is_valid(d)
    with pytest.raises(RuleMismatch, match="only available in S2"):
        check_derivation(d)


def test_s2_rejects_types_outside_the_grammar():
    with pytest.raises(GrammarViolation):
        check_derivation(ax(x0, T("a -> (a & b)"), System.S2))
    with pytest.raises(RuleMismatch, match="T grammar"):
        check_derivation(ax(x0, T("a & b"), System.S2))


def test_s2_axiom_must_be_degree_zero():
    x1 = Var("x", 1)
    with pytest.raises(RuleMismatch):
        check_derivation(ax(x1, T("e a"), System.S2))
    assert is_valid(ax(x1, T("e a"), System.S1))


def test_json_round_trip():
    d = exp_rule("e", identity(System.S2, T("a")))
    data = derivation_to_json(d)
    assert derivation_to_json(derivation_from_json(data)) == data
    again = parse_derivation(json.dumps(data))
    assert check_derivation(again) == check_derivation(d)
