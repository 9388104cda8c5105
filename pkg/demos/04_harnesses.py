"""Exhaustive checks at small sizes: reduction and expansion keep types."""
import time

from evsem.harness import expansion_harness, lowering_injectivity, sr_harness
from evsem.semantics import completeness_probe
from evsem.syntax import parse_type
from evsem.terms import Var

t = time.time()
print(sr_harness(6, 4, fuel=4).summary())
print(sr_harness(6, 4, fuel=4, free=(Var("x", 0),)).summary())
print(expansion_harness(6, 4, expansion_size=8, fuel=3).summary())
print(lowering_injectivity(6))

for text in ("a -> a", "e (a -> a)"):
    rep = completeness_probe(parse_type(text), 5)
    print(text, rep.terms, "terms,", rep.derivable, "typable, ok =", rep.ok)
print(f"{time.time() - t:.1f}s")
