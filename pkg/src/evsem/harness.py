"""Property harnesses over enumerated typing judgments.

Subjects are enumerated good terms; for every type of the universe a bounded
search decides whether the judgment is derivable.  Derivable judgments are
then pushed forward along reduction (subject reduction) and pulled back
along expansion (subject expansion).  Searches that run out of budget are
reported separately and never counted as violations.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field, replace

from .derivations import System
from .itypes import TypeEnv, enumerate_types
from .reduction import Tri, one_step_reducts, redexes, reduct_set
from .search import Bounds, Searcher, hints_from
from .terms import alpha_key, enumerate_good_terms


@dataclass
class HarnessReport:
    name: str
    judgments: int = 0
    derivable: int = 0
    checked: int = 0
    violations: list = field(default_factory=list)
    unknown: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def summary(self) -> str:
        return (f"{self.name}: {self.judgments} judgments, {self.derivable} derivable, "
                f"{self.checked} checked, {len(self.violations)} violations, "
                f"{len(self.unknown)} unknown")


def _envs(free, env_types):
    """Every environment over the free variables with types of matching degree."""
    free = sorted(free, key=lambda v: (v.name, v.deg))
    pools = [[t for t in env_types if t.degree == v.deg] for v in free]
    for combo in itertools.product(*pools):
        yield TypeEnv(tuple(zip(free, combo)))


def derivable_judgments(max_term_size=7, type_size=5, atoms=("a", "b"), evars=("e",),
                        system=System.S2, free=(), env_type_size=3, degrees=(0, 1),
                        bounds=Bounds(12, 8, universe_size=7), report=None):
    """Yield ``(term, env, type)`` for every derivable enumerated judgment.

    ``free`` lists free variables allowed in subjects; each subject's
    environment ranges over good types of size ``<= env_type_size``.
    """
    grammar = "U" if System(system) is System.S2 else "general"
    types = [t for t in enumerate_types(type_size, atoms, evars, grammar) if t.good]
    env_types = [t for t in enumerate_types(env_type_size, atoms, evars, grammar) if t.good]
    s = Searcher(system, bounds, evars=evars)
    names = tuple(sorted({v.name for v in free}))
    for deg in degrees:
        subjects = enumerate_good_terms(max_term_size, deg, closed=not free,
                                        alphabet=names or ("x",))
        for m in subjects:
            if free and not m.fv <= set(free):
                continue
            for env in _envs(m.fv, env_types):
                for u in types:
                    if u.degree != deg:
                        continue
                    if report is not None:
                        report.judgments += 1
                    r = s.check(m, env, u)
                    if r.verdict is Tri.UNKNOWN and report is not None:
                        report.unknown.append((m, env, u))
                    if r.derivable:
                        if report is not None:
                            report.derivable += 1
                        yield m, env, u


def sr_harness(max_term_size=7, type_size=5, fuel=4, atoms=("a", "b"), evars=("e",),
               system=System.S2, free=(), bounds=Bounds(12, 8, universe_size=7)) -> HarnessReport:
    """Every reduct within ``fuel`` steps of a derivable judgment keeps its typing."""
    rep = HarnessReport(f"subject reduction (S{int(system)})")
    s = Searcher(system, bounds, evars=evars)
    for m, env, u in list(derivable_judgments(max_term_size, type_size, atoms, evars, system,
                                              free, bounds=bounds, report=rep)):
        red, _ = reduct_set(m, fuel)
        for k, n in red.items():
            if k == alpha_key(m):
                continue
            rep.checked += 1
            r = s.check(n, env.restrict(n.fv), u)
            if r.verdict is Tri.NO:
                rep.violations.append((m, n, env, u))
            elif r.verdict is Tri.UNKNOWN:
                rep.unknown.append((n, env, u))
    return rep


def expansion_harness(max_term_size=7, type_size=5, expansion_size=9, fuel=4,
                      atoms=("a", "b"), evars=("e",), bounds=Bounds(12, 8, universe_size=7),
                      expansion_bounds=Bounds(24, 10, universe_size=7)) -> HarnessReport:
    """Every enumerated closed term of size ``<= expansion_size`` whose
    one-step reduct has a derivable judgment gets the same judgment.

    Derivable expansions join the targets, so chains of up to ``fuel``
    expansion steps are covered.  The reduct's derivation supplies cut-type
    hints for the search, mirroring how an expansion proof rebuilds the
    derivation of the redex.
    """
    rep = HarnessReport("subject expansion (S2)")
    base = Searcher(System.S2, bounds, evars=evars)
    targets = {}
    for m, env, u in derivable_judgments(max_term_size, type_size, atoms, evars, System.S2,
                                         bounds=bounds, report=rep):
        d = base.check(m, env, u).derivation
        targets.setdefault(alpha_key(m), {})[u] = d
    bigs = [t for deg in (0, 1) for t in enumerate_good_terms(expansion_size, deg, closed=True)
            if any(site.fires for site in redexes(t))]
    steps = {alpha_key(t): [alpha_key(n) for _, n in one_step_reducts(t)] for t in bigs}
    done = set()
    for _ in range(fuel):
        grew = False
        for big in bigs:
            bk = alpha_key(big)
            for nk in steps[bk]:
                for u, dn in list(targets.get(nk, {}).items()):
                    if (bk, u) in done:
                        continue
                    done.add((bk, u))
                    rep.checked += 1
                    hints = hints_from(dn)
                    # the redex's function type is built around a hinted cut type
                    need = max(h.size for h in hints) + u.size + 1
                    eb = replace(expansion_bounds,
                                 type_size=max(expansion_bounds.type_size, need))
                    r = Searcher(System.S2, eb, hints, evars=evars).check(big, TypeEnv(), u)
                    if r.verdict is Tri.YES:
                        targets.setdefault(bk, {})[u] = r.derivation
                        grew = True
                    elif r.verdict is Tri.NO:
                        rep.violations.append((big, dn.conclusion.subject, u))
                    else:
                        rep.unknown.append((big, u))
        if not grew:
            break
    return rep


@dataclass
class PropertyReport:
    subjects: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def typable_properties(derivations) -> PropertyReport:
    """Checks on the conclusions of checked derivations: the subject is good,
    the type is good with the subject's degree, and no redex is blocked."""
    from .derivations import check_derivation
    rep = PropertyReport()
    for d in derivations:
        j = check_derivation(d)
        rep.subjects += 1
        m, u = j.subject, j.result
        if not m.good:
            rep.failures.append((j, "subject is not good"))
        elif not u.good or u.degree != m.degree:
            rep.failures.append((j, "type is not good at the subject's degree"))
        elif any(not s.fires for s in redexes(m)):
            rep.failures.append((j, "subject has a blocked redex"))
        elif any(not t.good or t.degree != v.deg for v, t in j.env.items):
            rep.failures.append((j, "environment is not good"))
    return rep


@dataclass
class InjectivityReport:
    types: int = 0
    pairs: int = 0
    reexpansion_failures: list = field(default_factory=list)
    collisions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.reexpansion_failures and not self.collisions


def lowering_injectivity(max_size=6, atoms=("a", "b"), evars=("e",)) -> InjectivityReport:
    """Lowering good types of positive degree, then expanding again, is the
    identity; and no two distinct types of one degree lower to the same type."""
    from .itypes import canonicalize, exp, type_lower
    rep = InjectivityReport()
    by_image = {}
    for t in enumerate_types(max_size, atoms, evars, "U"):
        if not t.good or t.degree < 1:
            continue
        rep.types += 1
        low = type_lower(t)
        st = {p.evar for p in t.parts}
        if len(st) == 1 and canonicalize(exp(st.pop(), low)) != t:
            rep.reexpansion_failures.append(t)
        by_image.setdefault((t.degree, low), []).append(t)
    for (_, low), ts in sorted(by_image.items(), key=lambda kv: (kv[0][0], kv[0][1].key)):
        rep.pairs += len(ts) * (len(ts) - 1) // 2
        if len(ts) > 1:
            rep.collisions.append((low, ts))
    return rep


__all__ = ["HarnessReport", "PropertyReport", "InjectivityReport", "derivable_judgments",
           "sr_harness", "lowering_injectivity",
           "expansion_harness", "typable_properties"]
