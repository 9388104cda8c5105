"""Meanings of types as sets of terms, tested with sample interpretations."""
from evsem import parse_term, parse_type, using_evars, MULTI
from evsem.semantics import (MeaningMode, Verdict, hvar, interp_member, load_family,
                             meaning_member, sampled_member, special_interp_member)

family = load_family()
for I in family:
    d = I.describe()
    print(d["name"], d["kind"], d["atoms"])
samples = [I for I in family if I.kind != "special"]

u = parse_type("(a & b) -> a")
ident = parse_term(r"\y^0. y^0")
self_app = parse_term(r"\x^0. x^0 x^0")

# the identity survives every probe; self application is refuted by one
print(sampled_member(ident, u, samples).describe())
print(sampled_member(self_app, u, samples).describe())

# with one expansion variable, typability decides membership
print(meaning_member(ident, u, MeaningMode.THEOREM, family=samples).describe())

# reserved variables are named after their type, so no registry is needed
h = hvar(parse_type("e (a -> a)"), 0)
print(h.name, h.deg)
print(special_interp_member(h, parse_type("e (a -> a)")).describe())

# with two expansion variables a term can sit in every sample yet stay untypable
with using_evars(MULTI):
    two_evars = parse_type("(e1 a -> a) -> (e2 a -> a)")
    m = parse_term(r"\f^0. f^0")
    verdicts = {I.name: interp_member(m, two_evars, I).verdict for I in samples}
    print("never out:", all(v is not Verdict.OUT for v in verdicts.values()))
