"""Goal-directed, bounded search for typing derivations.

The search explores a normal form of derivations:

* In S2 subsumption is only applied directly above axioms (and, in
  multi-E-variable mode, right under an expansion to forget bindings that do
  not carry the expanded variable).  Environments are handed whole to both
  premises of ``ArrE`` and ``Inter``, and intersections are derived part by
  part.
* In S1 environments are split into covering part assignments.

Cut types for ``ArrE`` are computed exactly when either side of the
application is headed by a variable, and otherwise drawn from hints and
then from the finite universe of good types allowed by the bounds.

Verdicts are three-valued: ``NO`` means no normal-form derivation exists
within the bounds, ``UNKNOWN`` that the node budget ran out first.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import config
from .derivations import (Derivation, Judgment, System, arr_e, arr_i, ax,
                          exp_rule, inter_rule, sub_rule)
from .errors import DegreeUnderflow
from .itypes import (Arrow, Exp, Type, TypeEnv, atoms_of, enumerate_types,
                     env_strip_evar, evars_of, in_T, in_U, inter, strip_evar)
from .reduction import Tri
from .subtyping import prove_typing, sub
from .terms import App, Lam, Term, Var, lower


@dataclass(frozen=True)
class Bounds:
    type_size: int = 6
    depth: int = 8
    node_budget: int = 200_000
    # cap on cut types drawn from the enumerated universe; hints are exempt
    universe_size: int | None = None


@dataclass
class SearchResult:
    verdict: Tri
    derivation: Derivation | None = None
    nodes: int = 0

    @property
    def derivable(self) -> bool:
        return self.verdict is Tri.YES


class _Budget(Exception):
    pass


def _head(m: Term):
    """``(head, args)`` of an application spine."""
    args = []
    while isinstance(m, App):
        args.append(m.arg)
        m = m.fn
    return m, args[::-1]


def _unroll(t: Type, k: int):
    """``(domains, codomain)`` after peeling ``k`` arrows, or ``None``."""
    doms = []
    for _ in range(k):
        if not isinstance(t, Arrow):
            return None
        doms.append(t.left)
        t = t.right
    return doms, t


def _covers(parts):
    """Ordered pairs of nonempty part subsets whose union is everything."""
    n = len(parts)
    subs = [c for k in range(1, n + 1) for c in itertools.combinations(parts, k)]
    for s1 in subs:
        for s2 in subs:
            if len(set(s1) | set(s2)) == n:
                yield inter(*s1), inter(*s2)


class Searcher:
    def __init__(self, system: System, bounds: Bounds = Bounds(), hints=(),
                 atoms=None, evars=None):
        self.system = System(system)
        self.bounds = bounds
        self.hints = list(dict.fromkeys(hints))
        self.fixed_atoms = atoms
        self.fixed_evars = evars
        self.memo = {}
        self.nodes = 0
        self.truncated = False
        self._limit = bounds.node_budget
        self._universes = {}

    # -- public ---------------------------------------------------------
    def check(self, m: Term, env: TypeEnv, u: Type) -> SearchResult:
        self._alphabet(env, u)
        start = self.nodes
        self._limit = start + self.bounds.node_budget
        try:
            d = self._derive(m, env, u, self.bounds.depth)
        except _Budget:
            return SearchResult(Tri.UNKNOWN, None, self.nodes - start)
        if d is not None:
            return SearchResult(Tri.YES, d, self.nodes - start)
        return SearchResult(Tri.UNKNOWN if self.truncated else Tri.NO, None, self.nodes - start)

    # -- plumbing -------------------------------------------------------
    def _alphabet(self, env, u):
        if self.fixed_atoms is not None:
            self.atoms = tuple(self.fixed_atoms)
        else:
            at = set(atoms_of(u))
            for t in env.types():
                at |= atoms_of(t)
            self.atoms = tuple(sorted(at))
        if self.fixed_evars is not None:
            self.evars = tuple(self.fixed_evars)
        else:
            ev = set(evars_of(u))
            for t in env.types():
                ev |= evars_of(t)
            ev.add(config.default_evar())
            if config.evar_mode() == config.SINGLE:
                ev = {config.E_C}
            self.evars = tuple(sorted(ev))

    def _universe(self, degree, max_size):
        key = (self.atoms, self.evars, degree, max_size)
        u = self._universes.get(key)
        if u is None:
            grammar = "U" if self.system is System.S2 else "general"
            u = [t for t in enumerate_types(max_size, self.atoms, self.evars, grammar)
                 if t.good and t.degree == degree]
            self._universes[key] = u
        return u

    def _tick(self):
        self.nodes += 1
        if self.nodes > self._limit:
            self.truncated = True
            raise _Budget()

    def _admissible(self, m, env, u):
        if u.size > self.bounds.type_size or not u.good or u.degree != m.degree or not m.good:
            return False
        if env.dom() != m.fv:
            return False
        for v, t in env.items:
            if not t.good or t.degree != v.deg or t.size > self.bounds.type_size:
                return False
        if self.system is System.S2:
            if not in_U(u) or not all(in_U(t) for t in env.types()):
                return False
        return True

    def _derive(self, m, env, u, depth):
        if depth <= 0 or not self._admissible(m, env, u):
            return None
        key = (m, env, u)
        hit = self.memo.get(key)
        if hit is not None:
            ok, d, at = hit
            if ok and d.height() <= depth:
                return d
            if not ok and depth <= at:
                return None
        self._tick()
        d = self._search(m, env, u, depth)
        if d is not None:
            self.memo[key] = (True, d, depth)
        else:
            prev = self.memo.get(key)
            if prev is None or not prev[0]:
                self.memo[key] = (False, None, max(depth, prev[2] if prev else 0))
        return d

    def _search(self, m, env, u, depth):
        if self.system is System.S2:
            return self._search2(m, env, u, depth)
        return self._search1(m, env, u, depth)

    # -- S2 -------------------------------------------------------------
    def _search2(self, m, env, u, depth):
        ps = u.parts
        if len(ps) > 1:
            levels = (len(ps) - 1).bit_length()
            ds = []
            for p in ps:
                d = self._derive(m, env, p, depth - levels)
                if d is None:
                    return None
                ds.append(d)
            while len(ds) > 1:
                ds = [inter_rule(ds[i], ds[i + 1]) if i + 1 < len(ds) else ds[i]
                      for i in range(0, len(ds), 2)]
            return ds[0]
        if isinstance(u, Exp):
            return self._exp2(m, env, u, depth)
        if isinstance(m, Var):
            return self._leaf2(m, env, u)
        if isinstance(m, Lam):
            if not isinstance(u, Arrow):
                return None
            d = self._derive(m.body, env.extend(m.binder, u.left), u.right, depth - 1)
            return arr_i(m.binder, d) if d is not None else None
        return self._app(m, env, u, depth)

    def _leaf2(self, x, env, u):
        if x.deg != 0 or not in_T(u):
            return None
        w = env[x]
        base = ax(x, u, System.S2)
        if w == u:
            return base
        if not sub(w, u):
            return None
        target = TypeEnv(((x, w),))
        proof = prove_typing((base.conclusion.env, u), (target, u))
        return sub_rule(base, target, u, proof)

    def _exp2(self, m, env, u, depth):
        e, body = strip_evar(u)
        if m.degree < 1:
            return None
        kept = []
        for v, t in env.items:
            es = [p for p in t.parts if isinstance(p, Exp) and p.evar == e]
            if not es:
                return None
            kept.append((v, inter(*es)))
        kenv = TypeEnv(tuple(kept))
        low = env_strip_evar(kenv, e)
        if low is None:
            return None
        try:
            lm = lower(m)
        except DegreeUnderflow:
            return None
        d = self._derive(lm, low, body, depth - 1)
        if d is None:
            return None
        d = exp_rule(e, d)
        if kenv != env:
            proof = prove_typing((kenv, u), (env, u))
            if proof is None:
                return None
            d = sub_rule(d, env, u, proof)
        return d

    # -- S1 -------------------------------------------------------------
    def _search1(self, m, env, u, depth):
        if isinstance(m, Var) and env[m] == u:
            return ax(m, u, System.S1)
        st = strip_evar(u)
        if st is not None and m.degree >= 1:
            low = env_strip_evar(env, st[0])
            if low is not None:
                d = self._derive(lower(m), low, st[1], depth - 1)
                if d is not None:
                    return exp_rule(st[0], d)
        if isinstance(m, Lam) and isinstance(u, Arrow):
            d = self._derive(m.body, env.extend(m.binder, u.left), u.right, depth - 1)
            if d is not None:
                return arr_i(m.binder, d)
        if isinstance(m, App):
            d = self._app(m, env, u, depth)
            if d is not None:
                return d
        return self._inter1(m, env, u, depth)

    def _env_splits(self, env, left_vars, right_vars):
        """Pairs ``(env1, env2)`` with domains ``left_vars``/``right_vars``
        whose meet is ``env``; shared bindings are split into covering parts."""
        shared = [v for v, _ in env.items if v in left_vars and v in right_vars]
        solo1 = [(v, t) for v, t in env.items if v in left_vars and v not in right_vars]
        solo2 = [(v, t) for v, t in env.items if v in right_vars and v not in left_vars]
        choices = [list(_covers(env[v].parts)) for v in shared]
        for combo in itertools.product(*choices):
            e1 = solo1 + [(v, c[0]) for v, c in zip(shared, combo)]
            e2 = solo2 + [(v, c[1]) for v, c in zip(shared, combo)]
            yield TypeEnv(tuple(e1)), TypeEnv(tuple(e2))

    def _inter1(self, m, env, u, depth):
        seen = set()
        for u1, u2 in _covers(u.parts):
            for g1, g2 in self._env_splits(env, m.fv, m.fv):
                a, b = (g1, u1), (g2, u2)
                if a == (env, u) or b == (env, u) or (b, a) in seen:
                    continue
                seen.add((a, b))
                d1 = self._derive(m, g1, u1, depth - 1)
                if d1 is None:
                    continue
                d2 = self._derive(m, g2, u2, depth - 1)
                if d2 is not None:
                    return inter_rule(d1, d2)
        return None

    # -- application ------------------------------------------------------
    def _app(self, m, env, u, depth):
        p, q = m.fn, m.arg
        if self.system is System.S2:
            splits = [(env.restrict(p.fv), env.restrict(q.fv))]
        else:
            splits = list(self._env_splits(env, p.fv, q.fv))
        if self.system is System.S2 and not in_T(u):
            return None
        for g1, g2 in splits:
            for c in self._cut_candidates(p, q, g1, g2, env, u):
                if c.degree != q.degree or not c.good:
                    continue
                fn_t = Arrow(c, u)
                if fn_t.size > self.bounds.type_size:
                    continue
                dq = self._derive(q, g2, c, depth - 1)
                if dq is None:
                    continue
                dp = self._derive(p, g1, fn_t, depth - 1)
                if dp is not None:
                    return arr_e(dp, dq)
        return None

    def _cut_candidates(self, p, q, g1, g2, env, u):
        head, args = _head(p)
        k = len(args)
        if isinstance(head, Var):
            return self._head_candidates(env[head], k, u)
        if isinstance(q, Var):
            return [g2[q]]
        qhead, qargs = _head(q)
        if isinstance(qhead, Var) and q.degree == 0:
            return self._spine_types(env[qhead], len(qargs))
        cap = self.bounds.type_size - u.size - 1
        if self.bounds.universe_size is not None:
            cap = min(cap, self.bounds.universe_size)
        return self._fallback(q.degree, cap)

    def _spine_types(self, w, k):
        """Possible degree-0 types of ``x N1 .. Nk`` when ``x : w``."""
        cods = []
        for part in w.parts:
            un = _unroll(part, k)
            if un is not None and un[1] not in cods:
                cods.append(un[1])
        out = []
        for r in range(1, len(cods) + 1):
            for combo in itertools.combinations(cods, r):
                out.append(inter(*combo))
        return list(dict.fromkeys(out))

    def _head_candidates(self, w, k, u):
        rows = []
        for part in w.parts:
            un = _unroll(part, k + 1)
            if un is None:
                continue
            doms, cod = un
            if self.system is System.S1:
                if cod == u:
                    rows.append(doms[-1])
            elif sub(cod, u):
                rows.append(doms[-1])
        if self.system is System.S1:
            return list(dict.fromkeys(rows))
        out = []
        rows = list(dict.fromkeys(rows))
        for r in range(1, len(rows) + 1):
            for combo in itertools.combinations(rows, r):
                out.append(inter(*combo))
        return list(dict.fromkeys(out))

    def _fallback(self, degree, max_size):
        if max_size < 1:
            return
        seen = set()
        for h in self.hints:
            if h.degree == degree and h.good and h not in seen:
                seen.add(h)
                yield h
        for t in self._universe(degree, max_size):
            if t not in seen:
                yield t


def hints_from(d: Derivation):
    """Candidate cut types read off an existing derivation: every type it
    assigns, plus the intersection of all types given to one subject."""
    from .terms import alpha_key
    groups = {}
    for node in d.nodes():
        c = node.conclusion
        groups.setdefault(alpha_key(c.subject), []).append(c.result)
    out = []
    for ts in groups.values():
        ts = list(dict.fromkeys(ts))
        out.extend(ts)
        if len(ts) > 1:
            whole = inter(*ts)
            if whole.good:
                out.append(whole)
    return list(dict.fromkeys(out))


def check_judgment(j: Judgment, bounds: Bounds = Bounds(), hints=()) -> SearchResult:
    s = Searcher(j.system, bounds, hints)
    return s.check(j.subject, j.env, j.result)


def search_typing(m: Term, system: System = System.S2, bounds: Bounds = Bounds(),
                  goal=None, hints=(), atoms=("a", "b")):
    """Find a derivation for ``m``.

    With ``goal = (env, type)`` this is :func:`check_judgment`; otherwise
    closed terms are tried against every type of the universe, in order of
    size, and the first derivation found is returned.
    """
    system = System(system)
    if goal is not None:
        g, u = goal
        return check_judgment(Judgment(m, g, system, u), bounds, hints)
    out = search_typings(m, system, bounds, atoms=atoms, limit=1)
    if out:
        return SearchResult(Tri.YES, out[0])
    return SearchResult(Tri.NO)


def search_typings(m: Term, system: System = System.S2, bounds: Bounds = Bounds(),
                   atoms=("a", "b"), limit=None):
    """Derivations of ``<() |- U>`` for closed ``m`` over all ``U`` in the
    universe of the bounds."""
    system = System(system)
    if m.fv:
        raise ValueError("enumeration of typings is only offered for closed terms")
    grammar = "U" if system is System.S2 else "general"
    evars = (config.default_evar(),)
    found = []
    s = Searcher(system, bounds, atoms=atoms, evars=evars)
    for u in enumerate_types(bounds.type_size, atoms, evars, grammar):
        if not u.good or u.degree != m.degree:
            continue
        r = s.check(m, TypeEnv(), u)
        if r.derivable:
            found.append(r.derivation)
            if limit and len(found) >= limit:
                break
    return found
