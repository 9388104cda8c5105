from hypothesis import given, settings
from hypothesis import strategies as st

from evsem.derivations import Judgment, System, check_derivation
from evsem.itypes import TypeEnv
from evsem.reduction import Tri
from evsem.search import Bounds, Searcher, check_judgment, hints_from, search_typing, search_typings
from evsem.syntax import parse_judgment, parse_term, parse_type
from evsem.terms import enumerate_good_terms

SMALL = list(enumerate_good_terms(5, 0))


def test_identity_at_intersection_source():
    j = parse_judgment(r"\y^0. y^0 : <() |-2 (a & b) -> a>")
    r = check_judgment(j, Bounds(8, 8))
    assert r.verdict is Tri.YES
    assert check_derivation(r.derivation) == j
    s1 = parse_judgment(r"\y^0. y^0 : <() |-1 (a & b) -> a>")
    assert check_judgment(s1, Bounds(8, 8)).verdict is Tri.NO


def test_self_application_needs_intersection():
    m = parse_term(r"\x^0. x^0 x^0")
    r = search_typing(m, System.S2, Bounds(8, 8))
    assert r.derivable
    assert "&" in str(r.derivation.conclusion.result)


def test_omega_is_untypable():
    m = parse_term(r"(\x^0. x^0 x^0) (\x^0. x^0 x^0)")
    assert search_typing(m, System.S2, Bounds(6, 6)).verdict is Tri.NO


def test_node_budget_gives_unknown():
    j = parse_judgment(r"\x^0. x^0 x^0 : <() |-2 ((a -> b) & a) -> b>")
    assert check_judgment(j, Bounds(8, 8, node_budget=3)).verdict is Tri.UNKNOWN


def test_open_goal():
    j = parse_judgment(r"x^0 y^0 : <x^0: a -> b, y^0: a |-2 b>")
    assert check_judgment(j).derivable


def test_degree_must_match():
    m = parse_term(r"\x^1. x^1")
    r = check_judgment(Judgment(m, TypeEnv(), System.S2, parse_type("a -> a")))
    assert r.verdict is Tri.NO
    assert check_judgment(Judgment(m, TypeEnv(), System.S2, parse_type("e (a -> a)"))).derivable


@settings(max_examples=40)
@given(st.sampled_from(SMALL), st.sampled_from([System.S1, System.S2]))
def test_found_derivations_check(m, system):
    for d in search_typings(m, system, Bounds(5, 6), limit=3):
        j = check_derivation(d)
        assert j.subject == m and j.system is system


def test_hints_carry_grouped_types():
    d = search_typing(parse_term(r"\x^0. x^0 x^0"), System.S2, Bounds(8, 8)).derivation
    hs = hints_from(d)
    assert all(h.good for h in hs)
    assert d.conclusion.result in hs


def test_searcher_reuse_is_consistent():
    s = Searcher(System.S2, Bounds(6, 8))
    u = parse_type("a -> a")
    first = [s.check(m, TypeEnv(), u).verdict for m in SMALL]
    again = [s.check(m, TypeEnv(), u).verdict for m in SMALL]
    assert first == again
    assert first.count(Tri.YES) >= 1
