import itertools

import pytest
from hypothesis import given

from evsem.errors import BlockedRedex, InvalidSite
from evsem.reduction import (RedexSite, Strategy, Tri, beta_eq, contract, firing, is_normal,
                             normal_form, one_step_reducts, reduce, reduces_to, redexes, step)
from evsem.syntax import parse_term, print_term
from evsem.terms import App, Lam, Var, alpha_eq, enumerate_good_terms

from conftest import good_terms

OMEGA = parse_term(r"(\x^0. x^0 x^0) (\x^0. x^0 x^0)")


# naive substitution oracle: rename every binder apart first, then replace

def _rename_apart(m, counter):
    if isinstance(m, Var):
        return m
    if isinstance(m, App):
        return App(_rename_apart(m.fn, counter), _rename_apart(m.arg, counter))
    fresh = Var(f"q{next(counter)}", m.binder.deg)
    return Lam(fresh, _replace(_rename_apart(m.body, counter), m.binder, fresh))


def _replace(m, v, n):
    if isinstance(m, Var):
        return n if m == v else m
    if isinstance(m, App):
        return App(_replace(m.fn, v, n), _replace(m.arg, v, n))
    return Lam(m.binder, _replace(m.body, v, n))


def contract_oracle(redex):
    counter = itertools.count()
    lam = _rename_apart(redex.fn, counter)
    return _replace(lam.body, lam.binder, _rename_apart(redex.arg, counter))


def test_blocked_redex_is_reported():
    m = parse_term(r"(\x^0. x^0 y^0) z^1")
    [site] = redexes(m)
    assert not site.fires
    assert is_normal(m)
    with pytest.raises(BlockedRedex):
        step(m, site)
    assert reduces_to(m, parse_term("z^1 y^0"), 10) is Tri.NO


def test_firing_redex():
    m = parse_term(r"(\x^0. x^0 y^0) z^0")
    [site] = redexes(m)
    assert site.fires
    assert step(m, site) == parse_term("z^0 y^0")


def test_invalid_site():
    m = parse_term(r"x^0 y^0")
    with pytest.raises(InvalidSite):
        step(m, RedexSite((), Var("x", 0), 0))


def test_omega_never_normalises():
    assert normal_form(OMEGA, 20) is None
    tr = reduce(OMEGA, 5, Strategy.ALL)
    assert tr.complete and len(tr.reducts) == 1
    assert reduces_to(OMEGA, parse_term(r"\x^0. x^0"), 10) is Tri.NO


def test_unknown_when_fuel_runs_out():
    m = parse_term(r"(\x^0. x^0 x^0 x^0) (\x^0. x^0 x^0 x^0)")
    assert reduces_to(m, parse_term(r"\x^0. x^0"), 3) is Tri.UNKNOWN


def test_beta_equality():
    i = parse_term(r"\y^0. y^0")
    m = parse_term(r"(\x^0. x^0) (\y^0. y^0)")
    assert beta_eq(m, i, 4) is Tri.YES
    assert beta_eq(i, parse_term(r"\y^0. \z^0. y^0 z^0"), 4) is Tri.NO


def test_leftmost_trace_shape():
    m = parse_term(r"(\x^0. x^0) ((\y^0. y^0) z^0)")
    tr = reduce(m, 10)
    assert tr.complete
    assert print_term(tr.result) == "z^0"
    assert [s.site.path_str() for s in tr.steps] == [".", "."]
    with pytest.raises(ValueError):
        reduce(m, -1)


@given(good_terms)
def test_contraction_matches_naive_oracle(m):
    for site in firing(m):
        r = m
        for p in site.path:
            r = getattr(r, p)
        assert alpha_eq(contract(r), contract_oracle(r))


@given(good_terms)
def test_reduction_preserves_invariants(m):
    for _, n in one_step_reducts(m):
        assert n.good
        assert n.degree == m.degree
        assert n.fv == m.fv  # λI: nothing is discarded


def test_enumerated_terms_step_to_good_terms():
    for d in (0, 1):
        for m in enumerate_good_terms(6, d):
            for _, n in one_step_reducts(m):
                assert n.good and n.degree == d


def test_confluence_probe():
    for m in enumerate_good_terms(7, 0):
        left = normal_form(m, 12)
        tr = reduce(m, 12, Strategy.ALL)
        if left is None or not tr.complete:
            continue
        nfs = tr.normal_forms()
        assert len(nfs) == 1 and alpha_eq(nfs[0], left)
