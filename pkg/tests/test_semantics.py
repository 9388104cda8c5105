import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from evsem import config
from evsem.derivations import System
from evsem.errors import ModeError, NotClosed, ValidationError
from evsem.itypes import TypeEnv, enumerate_types, exp, in_U
from evsem.reduction import one_step_reducts
from evsem.search import Bounds, search_typing
from evsem.semantics import (FinInterp, MeaningMode, Verdict, completeness_probe, decode_hvar,
                             forced_env, hvar, in_H, in_N, interp_member, load_family,
                             meaning_member, probes, sampled_member, soundness_probe,
                             special_interp_member, vset_member)
from evsem.syntax import parse_term, parse_type
from evsem.terms import Var, enumerate_good_terms, lift

T, M = parse_type, parse_term
GOOD_U = [t for t in enumerate_types(6, ("a", "b"), ("e",), "U") if t.good]
SMALL = list(enumerate_good_terms(5, 0))


@pytest.fixture(scope="module")
def family():
    return [I for I in load_family() if I.kind != "special"]


def test_family_file_loads():
    fam = load_family()
    assert [I.name for I in fam][-1] == "special"
    assert fam[1].generators["a"] == (M(r"\u^0. u^0 (\z^0. z^0)"),)
    custom = load_family("[only]\nfuel = 3\natom.a = \\z^0. z^0 ; \\u^0. \\v^0. v^0 u^0\n")
    assert custom[0].fuel == 3 and len(custom[0].generators["a"]) == 2
    with pytest.raises(ValidationError):
        FinInterp("bad", generators={"a": (M(r"\x^1. x^1"),)})
    with pytest.raises(ValueError):
        FinInterp("bad", kind="other")


def test_head_patterns():
    assert in_N(M(r"x^0 (\y^0. y^0)"), "x", 0)
    assert not in_N(M(r"(\y^0. y^0) x^0"), "x", 0)
    with pytest.raises(ValueError):
        in_N(M("x^0"), "_h", 0)
    assert vset_member(M("x^1 y^2"), 1)
    assert not vset_member(M(r"\x^0. x^0"), 0)


def test_hvar_is_injective_and_decodes():
    # a and e a share a name; the degree tells them apart
    names = set()
    for u in GOOD_U:
        for k in (0, 1):
            v = hvar(u, k)
            assert v.deg == u.degree
            assert decode_hvar(v) == (u, k)
            names.add((v.name, v.deg))
    assert len(names) == 2 * len(GOOD_U)
    assert decode_hvar(Var("x", 0)) is None
    assert decode_hvar(Var("_hzz_0", 0)) is None


def test_hvar_needs_single_mode():
    with config.using_evars(config.MULTI):
        with pytest.raises(ModeError):
            hvar(T("a"), 0)


def test_reserved_environments():
    h = hvar(T("a -> a"), 0)
    env = TypeEnv.of({h: T("a -> a")})
    assert in_H(env, 0)
    assert not in_H(TypeEnv.of({h: T("a")}), 0)
    assert forced_env(h, 0) == env
    assert forced_env(M("x^0"), 0) is None


@given(st.sampled_from(SMALL), st.sampled_from(GOOD_U[:40]))
def test_lift_coherence(m, u):
    # membership of lift(M) in e U is membership of M in U
    for I in load_family()[:-1]:
        assert interp_member(lift(m), exp("e", u), I).verdict == interp_member(m, u, I).verdict


@settings(max_examples=60)
@given(st.sampled_from(SMALL), st.sampled_from(GOOD_U[:40]), st.sampled_from(GOOD_U[:40]))
def test_intersection_is_conjunction(m, u, v):
    from evsem.itypes import inter
    w = inter(u, v)
    if not w.good:
        return
    for I in load_family()[:-1]:
        both = interp_member(m, w, I).verdict
        parts = {interp_member(m, u, I).verdict, interp_member(m, v, I).verdict}
        assert (both is Verdict.OUT) == (Verdict.OUT in parts)
        if parts == {Verdict.IN}:
            assert both is Verdict.IN


def test_atoms_are_saturated(family):
    for I in family:
        for m in enumerate_good_terms(6, 0):
            for _, n in one_step_reducts(m):
                if interp_member(n, T("a"), I).verdict is Verdict.IN:
                    assert interp_member(m, T("a"), I).verdict is Verdict.IN


def test_patterns_belong_everywhere(family):
    pat = M(r"x^0 (\y^0. y^0)")
    for I in family:
        for u in ("a", "b", "a -> a", "(a & b) -> a"):
            assert interp_member(pat, T(u), I).verdict is Verdict.IN


def test_arrow_probes_refute():
    I = next(I for I in load_family() if I.name == "pair-with")
    r = interp_member(M(r"\x^0. x^0 x^0 x^0"), T("a -> a"), I)
    assert r.verdict is Verdict.OUT and "probe" in r.witness
    assert all(interp_member(p, T("a"), I).verdict is Verdict.IN for p in probes(T("a"), I))


def test_identity_survives(family):
    r = sampled_member(M(r"\y^0. y^0"), T("(a & b) -> a"), family)
    assert r.verdict is Verdict.UNKNOWN and r.survived


def test_special_interpretation():
    ident = M(r"\y^0. y^0")
    assert special_interp_member(ident, T("a -> a")).verdict is Verdict.IN
    assert special_interp_member(M(r"\x^0. x^0 x^0"), T("a -> a")).verdict is Verdict.OUT
    with pytest.raises(ValueError):
        special_interp_member(ident, T("a -> e a"))
    with config.using_evars(config.MULTI):
        with pytest.raises(ModeError):
            special_interp_member(ident, T("a -> a"))


def test_meaning_modes(family):
    ident = M(r"\y^0. y^0")
    assert meaning_member(ident, T("(a & b) -> a"), family=family).verdict is Verdict.IN
    r = meaning_member(M(r"\x^0. x^0 x^0"), T("a -> a"), family=family)
    assert r.verdict is Verdict.OUT
    s = meaning_member(ident, T("a -> a"), MeaningMode.SAMPLING, family=family)
    assert s.verdict is Verdict.UNKNOWN and s.survived
    with pytest.raises(NotClosed):
        meaning_member(M("x^0"), T("a"))
    with pytest.raises(ValueError):
        meaning_member(ident, T("a -> e a"))


def test_soundness_on_derived_judgments(family):
    for text in (r"\x^0. x^0 x^0", r"\x^0. \y^0. x^0 y^0"):
        d = search_typing(M(text), System.S2, Bounds(8, 8)).derivation
        for I in family:
            assert soundness_probe(d, I).ok
    d = search_typing(M("x^0 y^0"), System.S2, Bounds(6, 6),
                      goal=(TypeEnv.of({Var("x", 0): T("a -> b"), Var("y", 0): T("a")}), T("b")))
    rep = soundness_probe(d.derivation, family[1])
    assert rep.ok and rep.samples > 1


def test_completeness_small():
    rep = completeness_probe(T("a -> a"), 4)
    assert rep.ok and rep.derivable >= 1
    assert in_U(rep.type)
