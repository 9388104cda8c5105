"""Degree-constrained β-reduction.

A redex ``(λx^n. M) N`` only fires when ``d(N) = n``; other redexes are
reported as blocked.  Multi-step questions are answered within a fuel bound
and return three-valued verdicts.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .errors import BlockedRedex, InvalidSite
from .terms import App, Lam, Term, Var, _subst, alpha_key


class Tri(enum.Enum):
    YES = "yes"
    NO = "no-within-fuel"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


class Strategy(enum.Enum):
    LEFTMOST = "leftmost"
    ALL = "all"


@dataclass(frozen=True)
class RedexSite:
    path: tuple
    binder: Var
    argument_degree: int

    @property
    def fires(self) -> bool:
        return self.argument_degree == self.binder.deg

    def path_str(self) -> str:
        return "/".join(self.path) or "."


def redexes(m: Term) -> list:
    """All redex sites of ``m`` in leftmost-outermost order."""
    out = []
    _collect(m, (), out)
    return out


def _collect(m, path, out):
    if isinstance(m, App):
        if isinstance(m.fn, Lam):
            out.append(RedexSite(path, m.fn.binder, m.arg.degree))
        _collect(m.fn, path + ("fn",), out)
        _collect(m.arg, path + ("arg",), out)
    elif isinstance(m, Lam):
        _collect(m.body, path + ("body",), out)


def subterm_at(m: Term, path) -> Term:
    for sel in path:
        try:
            m = getattr(m, sel)
        except AttributeError:
            raise InvalidSite(f"no {sel!r} child on the path") from None
        if not isinstance(m, Term):
            raise InvalidSite(f"no {sel!r} child on the path")
    return m


def replace_at(m: Term, path, new: Term) -> Term:
    if not path:
        return new
    sel, rest = path[0], path[1:]
    if isinstance(m, App) and sel == "fn":
        return App(replace_at(m.fn, rest, new), m.arg)
    if isinstance(m, App) and sel == "arg":
        return App(m.fn, replace_at(m.arg, rest, new))
    if isinstance(m, Lam) and sel == "body":
        return Lam(m.binder, replace_at(m.body, rest, new))
    raise InvalidSite(f"selector {sel!r} does not fit the term")


def contract(redex: App) -> Term:
    lam, arg = redex.fn, redex.arg
    return _subst(lam.body, {lam.binder: arg})


def step(m: Term, site: RedexSite) -> Term:
    r = subterm_at(m, site.path)
    if not (isinstance(r, App) and isinstance(r.fn, Lam)):
        raise InvalidSite(f"no redex at {site.path_str()}")
    if r.fn.binder != site.binder or r.arg.degree != site.argument_degree:
        raise InvalidSite(f"site data does not match the redex at {site.path_str()}")
    if not site.fires:
        raise BlockedRedex(
            f"argument of degree {site.argument_degree} cannot replace "
            f"{site.binder.name}^{site.binder.deg}")
    return replace_at(m, site.path, contract(r))


def firing(m: Term) -> list:
    return [s for s in redexes(m) if s.fires]


def is_normal(m: Term) -> bool:
    """No firing redex (blocked redexes may remain)."""
    return not firing(m)


def one_step_reducts(m: Term) -> list:
    return [(s, step(m, s)) for s in firing(m)]


@dataclass(frozen=True)
class Step:
    site: RedexSite
    before: Term
    after: Term


@dataclass
class ReductionTrace:
    start: Term
    strategy: Strategy
    steps: list = field(default_factory=list)
    exhausted_fuel: bool = False
    # All strategy: every α-distinct reduct, in discovery order
    reducts: list = field(default_factory=list)

    @property
    def result(self) -> Term:
        """Last term of a leftmost trace."""
        return self.steps[-1].after if self.steps else self.start

    @property
    def complete(self) -> bool:
        return not self.exhausted_fuel

    def normal_forms(self) -> list:
        return [t for t in self.reducts if is_normal(t)]


def reduce(m: Term, fuel: int, strategy: Strategy = Strategy.LEFTMOST) -> ReductionTrace:
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    strategy = Strategy(strategy)
    trace = ReductionTrace(m, strategy)
    if strategy is Strategy.LEFTMOST:
        cur = m
        for _ in range(fuel):
            sites = firing(cur)
            if not sites:
                break
            nxt = step(cur, sites[0])
            trace.steps.append(Step(sites[0], cur, nxt))
            cur = nxt
        trace.exhausted_fuel = bool(firing(cur))
        trace.reducts = [m] + [s.after for s in trace.steps]
        return trace
    seen = {alpha_key(m): m}
    frontier = [m]
    for _ in range(fuel):
        new = []
        for t in frontier:
            for site, u in one_step_reducts(t):
                trace.steps.append(Step(site, t, u))
                k = alpha_key(u)
                if k not in seen:
                    seen[k] = u
                    new.append(u)
        frontier = new
        if not frontier:
            break
    else:
        trace.exhausted_fuel = any(
            alpha_key(u) not in seen for t in frontier for _, u in one_step_reducts(t))
    trace.reducts = list(seen.values())
    return trace


def reduct_set(m: Term, fuel: int):
    """``(keys -> term, complete)`` for all reducts within ``fuel`` steps."""
    tr = reduce(m, fuel, Strategy.ALL)
    return {alpha_key(t): t for t in tr.reducts}, tr.complete


def normal_form(m: Term, fuel: int):
    """Leftmost normal form, or ``None`` if fuel runs out."""
    tr = reduce(m, fuel, Strategy.LEFTMOST)
    return None if tr.exhausted_fuel else tr.result


def reduces_to(m: Term, n: Term, fuel: int) -> Tri:
    red, complete = reduct_set(m, fuel)
    if alpha_key(n) in red:
        return Tri.YES
    return Tri.NO if complete else Tri.UNKNOWN


def beta_eq(m: Term, n: Term, fuel: int) -> Tri:
    rm, cm = reduct_set(m, fuel)
    rn, cn = reduct_set(n, fuel)
    if rm.keys() & rn.keys():
        return Tri.YES
    return Tri.NO if cm and cn else Tri.UNKNOWN
