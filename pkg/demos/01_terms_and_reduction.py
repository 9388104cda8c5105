"""Terms carry degrees, and a redex only fires when the degrees line up."""
from evsem import Strategy, parse_term, print_term, reduce, redexes, reduces_to, lift

# every variable has a degree; the degree of a term is the least one in it
m = parse_term(r"(\x^0. x^0 y^0) z^1")
print(print_term(m), "degree", m.degree, "good", m.good)

# the argument has degree 1 but the binder wants degree 0: the redex is stuck
for site in redexes(m):
    print("redex at", site.path_str(), "fires:", site.fires)
print("reaches z^1 y^0?", reduces_to(m, parse_term("z^1 y^0"), 10))

# same redex at matching degree
ok = parse_term(r"(\x^0. x^0 y^0) z^0")
print(print_term(reduce(ok, 5).result))

# lifting raises every degree by one, and reduction commutes with it
up = lift(ok)
print(print_term(up), "->", print_term(reduce(up, 5).result))

# the all-reducts strategy explores every path within the fuel
tr = reduce(parse_term(r"(\x^0. x^0) ((\y^0. y^0) z^0)"), 4, Strategy.ALL)
print(len(tr.reducts), "reducts; normal forms:", [print_term(t) for t in tr.normal_forms()])

# omega loops on itself, so the reduct set is complete but has no normal form
omega = parse_term(r"(\x^0. x^0 x^0) (\x^0. x^0 x^0)")
print("omega normalises to the identity?", reduces_to(omega, parse_term(r"\x^0. x^0"), 10))
