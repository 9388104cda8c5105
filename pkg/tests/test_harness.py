from evsem import config
from evsem.corpus import load_cases
from evsem.derivations import Judgment, System, check_derivation, derivation_from_json
from evsem.harness import (derivable_judgments, expansion_harness, lowering_injectivity,
                           sr_harness, typable_properties)
from evsem.reduction import Tri, one_step_reducts
from evsem.search import Bounds, Searcher, check_judgment
from evsem.terms import Var


def test_derivable_judgments_are_checked_derivations():
    s = Searcher(System.S2, Bounds(12, 8, universe_size=7))
    found = list(derivable_judgments(5, 4))
    assert found
    rep = typable_properties([s.check(m, g, u).derivation for m, g, u in found])
    assert rep.ok and rep.subjects == len(found)


def test_small_subject_reduction_and_expansion():
    for rep in (sr_harness(5, 4, fuel=3),
                sr_harness(5, 4, fuel=3, free=(Var("x", 0),)),
                expansion_harness(5, 4, expansion_size=7, fuel=3)):
        assert rep.ok, rep.summary()
        assert rep.checked > 0
        assert "0 violations" in rep.summary()


def test_s1_reduct_loses_its_typing():
    # the redex derivation is valid, its one reduct has no derivation in S1
    case = next(c for c in load_cases() if c.id == "sr-fail-s1-found")
    d = derivation_from_json(case.payload["derivation"])
    j = check_derivation(d)
    [(_, n)] = one_step_reducts(j.subject)
    r = check_judgment(Judgment(n, j.env, System.S1, j.result), Bounds(8, 8))
    assert r.verdict is Tri.NO


def test_lowering_injectivity_single_and_multi():
    rep = lowering_injectivity(5)
    assert rep.ok and rep.types > 0
    with config.using_evars(config.MULTI):
        rep = lowering_injectivity(4, evars=("e1", "e2"))
    assert rep.collisions and not rep.reexpansion_failures
