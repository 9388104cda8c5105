"""Two typing systems: one with subsumption, one without."""
import json

from evsem import Bounds, check_judgment, parse_judgment, parse_type, search_typing, sub
from evsem.derivations import System, derivation_to_json
from evsem.syntax import parse_term

# intersections are kept flat and sorted; e distributes over them
print(parse_type("e (b & a) -> a"))

a_b, a = parse_type("a & b"), parse_type("a")
print("a & b <= a:", sub(a_b, a), "  a <= a & b:", sub(a, a_b))
print("a -> a <= (a & b) -> a:", sub(parse_type("a -> a"), parse_type("(a & b) -> a")))

# the identity at an intersection source needs subsumption
for system in (2, 1):
    j = parse_judgment(rf"\y^0. y^0 : <() |-{system} (a & b) -> a>")
    r = check_judgment(j, Bounds(8, 8))
    print(f"system {system}:", r.verdict)

# self application needs an intersection type for its argument
r = search_typing(parse_term(r"\x^0. x^0 x^0"), System.S2, Bounds(8, 8))
print(r.derivation.conclusion)
print(len(json.dumps(derivation_to_json(r.derivation))), "bytes of JSON,",
      "rules used:", sorted({n.rule.value for n in r.derivation.nodes()}))

# the lifted identity lives at the expanded type e (a -> a)
print(search_typing(parse_term(r"\x^1. x^1"), System.S2, Bounds(6, 6)).derivation.conclusion)

# a reduct that loses its type in the system without subsumption
j = parse_judgment(r"(y^0 z^0) (y^0 z^0) : <y^0: b -> ((a -> c) & a), z^0: b |-1 c>")
print("reduct typable in system 1:", check_judgment(j, Bounds(8, 8)).verdict)
