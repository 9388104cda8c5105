import pytest
from hypothesis import given

from evsem import config
from evsem.errors import DegreeUnderflow, ModeError, NotJoinable, ValidationError
from evsem.itypes import (Arrow, Atom, Exp, GrammarClass, Inter, TypeEnv, arrow, atom,
                          canonicalize, enumerate_types, env_expand, env_lower, env_meet, exp,
                          grammar_class, in_T, in_U, inter, is_canonical, part_splits,
                          strip_evar, type_lower, type_lower_n)
from evsem.syntax import parse_type
from evsem.terms import Var

from conftest import types

a, b = atom("a"), atom("b")


# raw (non-canonical) trees, canonicalised afterwards: an oracle for enumeration

def _raw(size):
    if size == 1:
        return [Atom("a"), Atom("b")]
    out = [Exp("e", t) for t in _raw(size - 1)]
    for ls in range(1, size - 1):
        for l in _raw(ls):
            for r in _raw(size - 1 - ls):
                out.append(Arrow(l, r))
                out.append(Inter((l, r)))
    return out


@pytest.fixture(scope="module")
def general6():
    seen = set()
    for s in range(1, 7):
        for t in _raw(s):
            c = canonicalize(t)
            if c.size <= 6:
                seen.add(c)
    return seen


def test_general_enumeration_matches_raw_trees(general6):
    got = enumerate_types(6, ("a", "b"), ("e",), "general")
    assert len(got) == len(set(got)) == 276
    assert set(got) == general6


def test_grammar_enumerations_are_filters(general6):
    u = enumerate_types(6, ("a", "b"), ("e",), "U")
    assert len(u) == 180
    assert set(u) == {t for t in general6 if in_U(t)}
    t6 = enumerate_types(6, ("a", "b"), ("e",), "T")
    assert set(t6) == {t for t in general6 if in_T(t)}
    assert len(enumerate_types(5, ("a", "b"), ("e",), "T")) == 32


def test_T_types_have_degree_zero():
    for t in enumerate_types(6, ("a", "b"), ("e",), "T"):
        assert t.degree == 0
        assert grammar_class(t) is GrammarClass.T


def test_enumeration_order_is_size_then_key():
    ts = enumerate_types(5, ("a", "b"), ("e",), "general")
    assert ts == sorted(ts, key=lambda t: (t.size, t.key))


def test_intersection_laws():
    assert inter(a, b) == inter(b, a)
    assert inter(a, a) == a
    assert inter(inter(a, b), a) == inter(a, b)
    assert exp("e", inter(a, b)) == inter(exp("e", a), exp("e", b))
    with pytest.raises(ValidationError):
        inter()


@given(types)
def test_constructed_types_are_canonical(t):
    assert is_canonical(t)
    assert canonicalize(t) == t


@given(types, types)
def test_inter_is_commutative_and_idempotent(t, u):
    assert inter(t, u) == inter(u, t)
    assert inter(t, t) == t
    assert set(inter(t, u).parts) == set(t.parts) | set(u.parts)


def test_degree_and_goodness():
    assert parse_type("e e a").degree == 2
    assert parse_type("e a & a").degree == 0
    assert not parse_type("e a & a").good
    assert parse_type("e a -> a").good
    assert not parse_type("a -> e a").good
    assert parse_type("a -> e a").degree == 0


@given(types)
def test_lowering_inverts_expansion(t):
    up = exp("e", t)
    assert up.degree == t.degree + 1
    assert type_lower(up) == t
    assert strip_evar(up) == ("e", t)


def test_lowering_underflow():
    with pytest.raises(DegreeUnderflow):
        type_lower(a)
    with pytest.raises(DegreeUnderflow):
        type_lower_n(parse_type("e a"), 2)
    assert type_lower_n(parse_type("e e (a -> a)"), 2) == arrow(a, a)


def test_single_mode_rejects_other_evars():
    with pytest.raises(ModeError):
        Exp("e1", a)
    with config.using_evars(config.MULTI):
        assert Exp("e1", a).degree == 1


def test_bad_names():
    with pytest.raises(ValidationError):
        Atom("e")
    with pytest.raises(ValidationError):
        Exp("f", a)


def test_part_splits_cover_the_type():
    t = inter(a, b, parse_type("e a"))
    splits = list(part_splits(t))
    assert all(inter(l, r) == t for l, r in splits)
    assert (a, inter(b, parse_type("e a"))) in splits


def test_environment_operations():
    x, y = Var("x", 0), Var("y", 1)
    g = TypeEnv.of({x: a})
    h = TypeEnv.of({x: b, y: parse_type("e a")})
    m = env_meet(g, h)
    assert m[x] == inter(a, b)
    assert m[y] == parse_type("e a")
    up = env_expand("e", m)
    assert up[Var("x", 1)] == parse_type("e a & e b")
    assert env_lower(up) == m
    with pytest.raises(NotJoinable):
        TypeEnv.of({Var("x", 0): a, Var("x", 1): a})
    with pytest.raises(NotJoinable):
        env_meet(g, TypeEnv.of({Var("x", 1): parse_type("e a")}))
    with pytest.raises(DegreeUnderflow):
        env_lower(g)


def test_environment_order_is_stable():
    x, y = Var("x", 0), Var("y", 0)
    assert TypeEnv.of({x: a, y: b}) == TypeEnv.of({y: b, x: a})
    assert str(TypeEnv.of({y: b, x: a})) == "x^0: a, y^0: b"
