import json

import pytest

from evsem.corpus import KINDS, CorpusCase, format_report, load_cases, run_case, run_corpus


def test_cases_load_and_round_trip():
    cases = load_cases()
    assert len({c.id for c in cases}) == len(cases)
    for c in cases:
        assert c.kind in KINDS
        assert CorpusCase.from_json(c.to_json()) == c


def test_quick_cases_pass():
    status, results = run_corpus(pattern="subtype-*")
    assert status == 0 and len(results) == 3
    assert [r.case.id for r in results] == sorted(r.case.id for r in results)


def test_report_formats():
    _, results = run_corpus(pattern="*redex*")
    text = format_report(results)
    assert text.endswith(f"{len(results)}/{len(results)} cases passed\n")
    assert text.startswith("PASS ")
    rows = [json.loads(line) for line in format_report(results, True).splitlines()]
    assert all(r["pass"] for r in rows)


def test_failing_and_broken_cases():
    miss = CorpusCase("x", "Reduction", "", {"term": r"\x^0. x^0", "target": "y^0", "fuel": 2},
                      "yes")
    r = run_case(miss)
    assert not r.passed and r.observed == "no-within-fuel"
    assert run_corpus([miss])[0] == 1
    broken = CorpusCase("y", "Reduction", "", {"term": "((", "target": "y^0", "fuel": 2}, "yes")
    assert run_case(broken).observed == {"error": "ParseError"}
    with pytest.raises(ValueError):
        CorpusCase.from_json({"id": "z", "kind": "Nope", "expected": 0})


def test_runs_are_identical():
    a = format_report(run_corpus(pattern="inter-source-*")[1], True)
    b = format_report(run_corpus(pattern="inter-source-*")[1], True)
    assert a == b
