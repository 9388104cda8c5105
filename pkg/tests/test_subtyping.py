import pytest
from hypothesis import given, settings

from evsem.errors import RuleMismatch
from evsem.itypes import TypeEnv, enumerate_types
from evsem.reduction import Tri
from evsem.subtyping import (DeclarativeRelation, GoalKind, SubProof, SubtypeGoal,
                             check_subproof, check_subtype_algorithmic,
                             check_subtype_declarative, goal_universe, prove, prove_goal, sub)
from evsem.syntax import parse_env, parse_subtype_goal, parse_type
from evsem.terms import Var

from conftest import types

T = parse_type


@pytest.mark.parametrize("lhs, rhs, expected", [
    ("a & b", "a", True),
    ("a", "a & b", False),
    ("a -> a", "(a & b) -> a", True),
    ("(a & b) -> a", "a -> a", False),
    ("e (a & b)", "e a", True),
    ("e a & a", "a", False),   # the e a part has the wrong degree to be dropped
    ("e a & e b", "e b", True),
    ("(a -> b) & (b -> a)", "a -> b", True),
])
def test_examples(lhs, rhs, expected):
    assert sub(T(lhs), T(rhs)) is expected
    assert check_subtype_declarative(SubtypeGoal.of(T(lhs), T(rhs))).derivable is expected


def test_proofs_check():
    for lhs, rhs in [("a & b", "a"), ("a -> a", "(a & b) -> a"), ("e a & e b", "e b")]:
        p = prove(T(lhs), T(rhs))
        g = check_subproof(p)
        assert (g.lhs, g.rhs) == (T(lhs), T(rhs))
    assert prove(T("a"), T("b")) is None


def test_bad_proof_is_rejected():
    with pytest.raises(RuleMismatch):
        check_subproof(SubProof("ref", T("a"), T("b")))


def test_env_and_typing_goals():
    g = parse_subtype_goal("{x^0: a & b} <= {x^0: a}")
    assert g.kind is GoalKind.ENV
    assert check_subtype_algorithmic(g)
    assert check_subtype_declarative(g).derivable
    assert check_subproof(prove_goal(g)).kind is GoalKind.ENV
    # typings are contravariant in the environment
    t1 = (parse_env("x^0: a"), T("a & b"))
    t2 = (parse_env("x^0: a & b"), T("a"))
    assert check_subtype_algorithmic(SubtypeGoal.of(t1, t2))
    assert not check_subtype_algorithmic(SubtypeGoal.of(t2, t1))
    other = TypeEnv.of({Var("y", 0): T("a")})
    assert not check_subtype_algorithmic(SubtypeGoal.of(parse_env("x^0: a"), other))


def test_mixed_goal_sorts():
    with pytest.raises(TypeError):
        SubtypeGoal.of(T("a"), TypeEnv())


@settings(max_examples=80)
@given(types, types)
def test_algorithmic_agrees_with_declarative(u, v):
    r = check_subtype_declarative(SubtypeGoal.of(u, v))
    assert r.verdict is not Tri.UNKNOWN
    assert r.derivable == sub(u, v)
    if r.derivable:
        check_subproof(r.proof)


@given(types)
def test_reflexive(u):
    assert sub(u, u)


def test_transitive_and_antisymmetric_on_small_types():
    ts = enumerate_types(4, ("a", "b"), ("e",), "general")
    le = {(u, v) for u in ts for v in ts if sub(u, v)}
    for u, v in le:
        for w in ts:
            if (v, w) in le:
                assert (u, w) in le
        if (v, u) in le:
            assert u == v


def test_declarative_relation_matrix_is_reflexive():
    rel = DeclarativeRelation(goal_universe(enumerate_types(4, ("a", "b"), ("e",), "general")))
    assert rel.saturated
    for t in enumerate_types(4, ("a", "b"), ("e",), "general"):
        assert rel.holds(t, t)
