import pytest
from hypothesis import given

from evsem import config
from evsem.errors import ModeError, NotJoinable, NotLambdaI, ParseError, ValidationError
from evsem.syntax import (parse_env, parse_judgment, parse_subtype_goal, parse_term,
                          parse_type, parse_typing, print_env, print_judgment, print_term,
                          print_type)

from conftest import terms, types


@given(terms)
def test_term_round_trip(m):
    assert parse_term(print_term(m)) == m


@given(types)
def test_type_round_trip(t):
    assert parse_type(print_type(t)) == t


@pytest.mark.parametrize("text, shown", [
    (r"\x^0. x^0", r"\x^0. x^0"),
    (r"λx^0. x^0 y^0", r"\x^0. x^0 y^0"),
    (r"(x^0 y^0) z^0", "x^0 y^0 z^0"),
    (r"x^0 (y^0 z^0)", "x^0 (y^0 z^0)"),
    (r"(\x^0. x^0) y^0", r"(\x^0. x^0) y^0"),
])
def test_term_printing(text, shown):
    assert print_term(parse_term(text)) == shown


@pytest.mark.parametrize("text, shown", [
    ("b & a", "(a & b)"),
    ("a -> b -> a", "a -> b -> a"),
    ("(a -> b) -> a", "(a -> b) -> a"),
    ("e (a & b)", "(e a & e b)"),
    ("a ⊓ a → b", "a -> b"),
    ("e (a -> a)", "e (a -> a)"),
])
def test_type_printing(text, shown):
    # intersections are always parenthesised
    assert print_type(parse_type(text)) == shown


def test_env_and_judgment_round_trip():
    g = parse_env("y^0: b, x^0: a & b")
    assert print_env(g) == "x^0: (a & b), y^0: b"
    assert print_env(parse_env("()")) == "()"
    text = r"\y^0. y^0 : <() |-2 (a & b) -> a>"
    assert print_judgment(parse_judgment(text)) == text
    g, system, u = parse_typing("<x^0: a |-1 a>")
    assert system == 1 and print_type(u) == "a"


def test_subtype_goal_parses():
    g = parse_subtype_goal("a & b <= a")
    assert g.lhs == parse_type("a & b")


def test_parse_error_position():
    with pytest.raises(ParseError) as info:
        parse_term("x^0 (y^0")
    assert info.value.line == 1
    assert info.value.column == 9
    with pytest.raises(ParseError) as info:
        parse_type("a ->\n  -> b")
    assert (info.value.line, info.value.column) == (2, 3)


def test_parse_error_is_distinct_from_validation():
    with pytest.raises(NotLambdaI) as info:
        parse_term(r"\x^0. y^0")
    assert not isinstance(info.value, ParseError)
    with pytest.raises(NotJoinable):
        parse_term("x^0 x^1")
    with pytest.raises(ParseError):
        parse_term("x")
    assert issubclass(NotLambdaI, ValidationError)


def test_evar_mode_applies_to_parsing():
    with pytest.raises(ModeError):
        parse_type("e1 a")
    with config.using_evars(config.MULTI):
        assert print_type(parse_type("e2 a & e1 a")) == "(e1 a & e2 a)"
