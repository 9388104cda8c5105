"""The subtyping relation on types, environments and typings.

Two deciders are provided:

* :func:`check_subtype_algorithmic` works part-wise on canonical
  intersections.  ``U <= V`` holds iff every part ``q`` of ``V`` has a part
  ``p`` of ``U`` with ``p <= q`` structurally, and every part of ``U`` that is
  not used that way is good and has the degree of a used part (so that it can
  be discarded by intersection elimination).
* :func:`check_subtype_declarative` computes the least relation closed under
  the inference rules over a finite universe of types, keeping provenance so
  that proofs can be rebuilt.

Both can produce explicit proof trees, checked by :func:`check_subproof`.
"""
from __future__ import annotations

import enum
import functools
import itertools
from dataclasses import dataclass

import numpy as np

from .errors import RuleMismatch
from .itypes import (Arrow, Exp, Type, TypeEnv, inter, exp, strip_evar)
from .reduction import Tri


class GoalKind(enum.Enum):
    TYPE = "type"
    ENV = "env"
    TYPING = "typing"


@dataclass(frozen=True)
class SubtypeGoal:
    kind: GoalKind
    lhs: object
    rhs: object

    @classmethod
    def of(cls, lhs, rhs) -> "SubtypeGoal":
        def kind(x):
            if isinstance(x, Type):
                return GoalKind.TYPE
            if isinstance(x, TypeEnv):
                return GoalKind.ENV
            if isinstance(x, tuple) and len(x) == 2:
                return GoalKind.TYPING
            raise TypeError(f"cannot compare {type(x).__name__} values")
        k1, k2 = kind(lhs), kind(rhs)
        if k1 != k2:
            raise TypeError("both sides of a subtyping goal must be of the same sort")
        return cls(k1, lhs, rhs)


# ---------------------------------------------------------------------------
# proof trees

@dataclass(frozen=True)
class SubProof:
    """One rule application; ``data`` holds the discarded part for ``inter_e``,
    the expansion variable for ``exp`` and the variable for ``env``."""

    rule: str
    lhs: object
    rhs: object
    premises: tuple = ()
    data: object = None

    def size(self) -> int:
        return 1 + sum(p.size() for p in self.premises)


RULES = ("ref", "tr", "inter_e", "inter", "arrow", "exp", "env", "typing")


def _fail(path, msg):
    raise RuleMismatch(path, msg)


def check_subproof(p: SubProof, path=()) -> SubtypeGoal:
    """Verify every node of ``p``; return the proven goal."""
    if p.rule not in RULES:
        _fail(path, f"unknown subtyping rule {p.rule!r}")
    prem = [check_subproof(q, path + (i,)) for i, q in enumerate(p.premises)]
    lhs, rhs = p.lhs, p.rhs
    r = p.rule
    if r == "ref":
        if prem or lhs != rhs:
            _fail(path, "ref needs identical sides and no premises")
    elif r == "tr":
        if len(prem) != 2 or prem[0].lhs != lhs or prem[1].rhs != rhs or prem[0].rhs != prem[1].lhs:
            _fail(path, "tr premises do not chain")
    elif r == "inter_e":
        u2 = p.data
        if prem or not isinstance(u2, Type) or not isinstance(rhs, Type):
            _fail(path, "inter_e needs the discarded type and no premises")
        if inter(rhs, u2) != lhs:
            _fail(path, "inter_e: left side is not the intersection")
        if not u2.good or u2.degree != rhs.degree:
            _fail(path, "inter_e: discarded part must be good with the kept degree")
    elif r == "inter":
        if len(prem) != 2 or any(g.kind != GoalKind.TYPE for g in prem):
            _fail(path, "inter needs two type premises")
        if inter(prem[0].lhs, prem[1].lhs) != lhs or inter(prem[0].rhs, prem[1].rhs) != rhs:
            _fail(path, "inter: sides are not the componentwise intersections")
    elif r == "arrow":
        if not (isinstance(lhs, Arrow) and isinstance(rhs, Arrow)) or len(prem) != 2:
            _fail(path, "arrow needs two arrows and two premises")
        if (prem[0].lhs, prem[0].rhs) != (rhs.left, lhs.left):
            _fail(path, "arrow: domain premise must be contravariant")
        if (prem[1].lhs, prem[1].rhs) != (lhs.right, rhs.right):
            _fail(path, "arrow: codomain premise mismatch")
    elif r == "exp":
        if len(prem) != 1 or prem[0].kind != GoalKind.TYPE or not isinstance(p.data, str):
            _fail(path, "exp needs one type premise and an expansion variable")
        if exp(p.data, prem[0].lhs) != lhs or exp(p.data, prem[0].rhs) != rhs:
            _fail(path, "exp: sides are not expansions of the premise")
    elif r == "env":
        y = p.data
        if len(prem) != 1 or not isinstance(lhs, TypeEnv) or not isinstance(rhs, TypeEnv):
            _fail(path, "env needs two environments and one premise")
        if lhs.dom() != rhs.dom() or y not in lhs:
            _fail(path, "env: domains differ or variable unbound")
        if lhs.remove(y) != rhs.remove(y):
            _fail(path, "env: other bindings differ")
        if (prem[0].lhs, prem[0].rhs) != (lhs[y], rhs[y]):
            _fail(path, "env: premise does not relate the changed binding")
    elif r == "typing":
        if len(prem) != 2:
            _fail(path, "typing needs two premises")
        (g1, u1), (g2, u2) = lhs, rhs
        if (prem[0].lhs, prem[0].rhs) != (u1, u2):
            _fail(path, "typing: type premise mismatch")
        if (prem[1].lhs, prem[1].rhs) != (g2, g1):
            _fail(path, "typing: environment premise must be contravariant")
    return SubtypeGoal.of(lhs, rhs)


# ---------------------------------------------------------------------------
# algorithmic decision

@functools.lru_cache(maxsize=None)
def sub(u: Type, v: Type) -> bool:
    if u == v:
        return True
    if u.degree != v.degree:
        return False
    P, Q = u.parts, v.parts
    used = {p for p in P if any(part_le(p, q) for q in Q)}
    if not all(any(part_le(p, q) for p in P) for q in Q):
        return False
    degs = {p.degree for p in used}
    return all(p in used or (p.good and p.degree in degs) for p in P)


@functools.lru_cache(maxsize=None)
def part_le(p: Type, q: Type) -> bool:
    if p == q:
        return True
    if isinstance(p, Arrow) and isinstance(q, Arrow):
        return sub(q.left, p.left) and sub(p.right, q.right)
    if isinstance(p, Exp) and isinstance(q, Exp):
        return p.evar == q.evar and sub(p.body, q.body)
    return False


def env_sub(g1: TypeEnv, g2: TypeEnv) -> bool:
    return g1.dom() == g2.dom() and all(sub(g1[v], g2[v]) for v in g1)


def typing_sub(t1, t2) -> bool:
    (g1, u1), (g2, u2) = t1, t2
    return sub(u1, u2) and env_sub(g2, g1)


def check_subtype_algorithmic(g: SubtypeGoal) -> bool:
    if g.kind == GoalKind.TYPE:
        return sub(g.lhs, g.rhs)
    if g.kind == GoalKind.ENV:
        return env_sub(g.lhs, g.rhs)
    return typing_sub(g.lhs, g.rhs)


def prove(u: Type, v: Type):
    """An explicit proof of ``u <= v`` or ``None``."""
    if not sub(u, v):
        return None
    return _prove(u, v)


def _prove(u, v):
    if u == v:
        return SubProof("ref", u, v)
    if len(u.parts) == 1 and len(v.parts) == 1:
        return _prove_part(u, v)
    P, Q = u.parts, v.parts
    pairs = [(p, q) for q in Q for p in P if part_le(p, q)]
    used = []
    for p, _ in pairs:
        if p not in used:
            used.append(p)
    mapped = _combine(pairs)
    core = inter(*used)
    dropped = [p for p in P if p not in used]
    if not dropped:
        return mapped
    steps = []
    cur = core
    for p in dropped:
        r = next(x for x in used if x.degree == p.degree)
        bigger = inter(cur, p)
        lo = SubProof("inter_e", inter(r, p), r, data=p)
        steps.append(lo if cur == r else
                     SubProof("inter", bigger, cur, (lo, SubProof("ref", cur, cur))))
        cur = bigger
    down = steps[-1]
    for st in reversed(steps[:-1]):
        down = SubProof("tr", down.lhs, st.rhs, (down, st))
    if mapped.rule == "ref":
        return down
    proof = SubProof("tr", u, v, (down, mapped))
    return proof


def _combine(pairs):
    if len(pairs) == 1:
        p, q = pairs[0]
        return _prove_part(p, q)
    mid = len(pairs) // 2
    a, b = _combine(pairs[:mid]), _combine(pairs[mid:])
    return SubProof("inter", inter(a.lhs, b.lhs), inter(a.rhs, b.rhs), (a, b))


def _prove_part(p, q):
    if p == q:
        return SubProof("ref", p, q)
    if isinstance(p, Arrow):
        return SubProof("arrow", p, q, (_prove(q.left, p.left), _prove(p.right, q.right)))
    return SubProof("exp", p, q, (_prove(p.body, q.body),), data=p.evar)


def prove_env(g1: TypeEnv, g2: TypeEnv):
    if not env_sub(g1, g2):
        return None
    if g1 == g2:
        return SubProof("ref", g1, g2)
    cur = g1
    steps = []
    for v in g1:
        if g1[v] != g2[v]:
            nxt = cur.replace(v, g2[v])
            steps.append(SubProof("env", cur, nxt, (_prove(g1[v], g2[v]),), data=v))
            cur = nxt
    out = steps[0]
    for st in steps[1:]:
        out = SubProof("tr", out.lhs, st.rhs, (out, st))
    return out


def prove_typing(t1, t2):
    (g1, u1), (g2, u2) = t1, t2
    pu, pg = prove(u1, u2), prove_env(g2, g1)
    if pu is None or pg is None:
        return None
    return SubProof("typing", t1, t2, (pu, pg))


def prove_goal(g: SubtypeGoal):
    if g.kind == GoalKind.TYPE:
        return prove(g.lhs, g.rhs)
    if g.kind == GoalKind.ENV:
        return prove_env(g.lhs, g.rhs)
    return prove_typing(g.lhs, g.rhs)


# ---------------------------------------------------------------------------
# declarative search over a finite universe

def goal_universe(types) -> list:
    """Closure under part subsets, arrow components and expansion stripping."""
    seen = set()
    todo = list(types)
    while todo:
        t = todo.pop()
        if t in seen:
            continue
        seen.add(t)
        ps = t.parts
        for k in range(1, len(ps)):
            for c in itertools.combinations(ps, k):
                todo.append(inter(*c))
        if isinstance(t, Arrow):
            todo.extend((t.left, t.right))
        st = strip_evar(t)
        if st is not None:
            todo.append(st[1])
        for p in ps:
            if isinstance(p, Exp):
                todo.append(p.body)
    return sorted(seen, key=lambda t: (t.size, t.key))


class DeclarativeRelation:
    """Least relation on ``universe`` closed under the subtyping rules,
    computed in rounds; ``rounds`` bounds the number of rounds."""

    def __init__(self, universe, rounds: int | None = None):
        self.types = list(dict.fromkeys(universe))
        self.index = {t: i for i, t in enumerate(self.types)}
        n = len(self.types)
        self.rel = np.zeros((n, n), dtype=bool)
        self.why = {}
        self.rounds = 0
        self.saturated = False
        self._prepare()
        self._run(rounds)

    def _prepare(self):
        T, ix = self.types, self.index
        self.splits = {}
        for i, t in enumerate(T):
            ps = t.parts
            subs = [frozenset(c) for k in range(1, len(ps) + 1) for c in itertools.combinations(ps, k)]
            out = []
            for s1 in subs:
                for s2 in subs:
                    if len(s1 | s2) == len(ps) and s1 != frozenset(ps) and s2 != frozenset(ps):
                        a, b = inter(*s1), inter(*s2)
                        if a in ix and b in ix:
                            out.append((ix[a], ix[b]))
            self.splits[i] = out
        self.arrows = [i for i, t in enumerate(T) if isinstance(t, Arrow)]
        self.stripped = {}
        for i, t in enumerate(T):
            st = strip_evar(t)
            if st is not None and st[1] in ix:
                self.stripped[i] = (st[0], ix[st[1]])

    def _add(self, i, j, why):
        if not self.rel[i, j]:
            self.rel[i, j] = True
            self.why[(i, j)] = why
            return True
        return False

    def _run(self, rounds):
        T, ix = self.types, self.index
        n = len(T)
        for i in range(n):
            self._add(i, i, ("ref",))
        for i, t in enumerate(T):
            ps = t.parts
            for k in range(1, len(ps)):
                for keep in itertools.combinations(ps, k):
                    rest = inter(*(p for p in ps if p not in keep))
                    u1 = inter(*keep)
                    if u1 in ix and rest.good and rest.degree == u1.degree:
                        self._add(i, ix[u1], ("inter_e", rest))
        while rounds is None or self.rounds < rounds:
            self.rounds += 1
            changed = False
            rel = self.rel.copy()
            for a in self.arrows:
                ta = T[a]
                for b in self.arrows:
                    if rel[a, b]:
                        continue
                    tb = T[b]
                    dl = (ix[tb.left], ix[ta.left])
                    cr = (ix[ta.right], ix[tb.right])
                    if rel[dl] and rel[cr]:
                        changed |= self._add(a, b, ("arrow", dl, cr))
            for a, (e1, ba) in self.stripped.items():
                for b, (e2, bb) in self.stripped.items():
                    if e1 == e2 and not rel[a, b] and rel[ba, bb]:
                        changed |= self._add(a, b, ("exp", e1, (ba, bb)))
            for a in range(n):
                sa = self.splits[a]
                if not sa:
                    continue
                for b in range(n):
                    if rel[a, b]:
                        continue
                    sb = self.splits[b] or [(b, b)]
                    hit = None
                    for (a1, a2) in sa:
                        for (b1, b2) in sb:
                            if rel[a1, b1] and rel[a2, b2]:
                                hit = ((a1, b1), (a2, b2))
                                break
                        if hit:
                            break
                    if hit:
                        changed |= self._add(a, b, ("inter",) + hit)
            # transitivity: one squaring per round, only through pairs
            # known at the start of the round
            r = self.rel
            comp = (r.astype(np.uint8) @ r.astype(np.uint8)) > 0
            new = np.argwhere(comp & ~r)
            if len(new):
                ri = r.astype(np.uint8)
                for i, k in new:
                    mid = int(np.argmax(ri[i] & ri[:, k]))
                    self._add(int(i), int(k), ("tr", mid))
                changed = True
            if not changed:
                self.saturated = True
                break

    def holds(self, u: Type, v: Type) -> bool:
        return bool(self.rel[self.index[u], self.index[v]])

    def proof(self, u: Type, v: Type):
        i, j = self.index[u], self.index[v]
        if not self.rel[i, j]:
            return None
        return self._proof(i, j)

    def _proof(self, i, j):
        T = self.types
        w = self.why[(i, j)]
        tag = w[0]
        if tag == "ref":
            return SubProof("ref", T[i], T[j])
        if tag == "inter_e":
            return SubProof("inter_e", T[i], T[j], data=w[1])
        if tag == "arrow":
            return SubProof("arrow", T[i], T[j], (self._proof(*w[1]), self._proof(*w[2])))
        if tag == "exp":
            return SubProof("exp", T[i], T[j], (self._proof(*w[2]),), data=w[1])
        if tag == "inter":
            return SubProof("inter", T[i], T[j], (self._proof(*w[1]), self._proof(*w[2])))
        mid = w[1]
        return SubProof("tr", T[i], T[j], (self._proof(i, mid), self._proof(mid, j)))


@dataclass
class DeclarativeResult:
    verdict: Tri
    proof: SubProof | None = None
    rounds: int = 0
    saturated: bool = False
    universe_size: int = 0

    @property
    def derivable(self) -> bool:
        return self.verdict is Tri.YES


def _decl_types(u, v, depth):
    rel = DeclarativeRelation(goal_universe([u, v]), rounds=depth)
    if rel.holds(u, v):
        return DeclarativeResult(Tri.YES, rel.proof(u, v), rel.rounds, rel.saturated, len(rel.types))
    return DeclarativeResult(Tri.NO if rel.saturated else Tri.UNKNOWN, None,
                             rel.rounds, rel.saturated, len(rel.types))


def check_subtype_declarative(g: SubtypeGoal, depth: int | None = None) -> DeclarativeResult:
    """Rule-level search; ``NO`` means not derivable with intermediate types
    from the goal's universe (the closure saturated), ``UNKNOWN`` that the
    round budget ran out first."""
    if g.kind == GoalKind.TYPE:
        return _decl_types(g.lhs, g.rhs, depth)
    if g.kind == GoalKind.ENV:
        pairs = _env_pairs(g.lhs, g.rhs)
    else:
        (g1, u1), (g2, u2) = g.lhs, g.rhs
        pairs = _env_pairs(g2, g1)
        if pairs is not None:
            pairs = [(None, u1, u2)] + pairs
    if pairs is None:
        return DeclarativeResult(Tri.NO, saturated=True)
    results = [(v, _decl_types(a, b, depth)) for v, a, b in pairs]
    verdicts = [r.verdict for _, r in results]
    rounds = max((r.rounds for _, r in results), default=0)
    if all(x is Tri.YES for x in verdicts):
        # assemble from the pieces
        if g.kind == GoalKind.ENV:
            proof = _env_chain(g.lhs, g.rhs, {v: r.proof for v, r in results})
        else:
            (g1, u1), (g2, u2) = g.lhs, g.rhs
            penv = _env_chain(g2, g1, {v: r.proof for v, r in results[1:]})
            proof = SubProof("typing", g.lhs, g.rhs, (results[0][1].proof, penv))
        return DeclarativeResult(Tri.YES, proof, rounds, True)
    v = Tri.NO if Tri.NO in verdicts else Tri.UNKNOWN
    return DeclarativeResult(v, None, rounds, v is Tri.NO)


def _env_pairs(g1, g2):
    if g1.dom() != g2.dom():
        return None
    return [(v, g1[v], g2[v]) for v in g1]


def _env_chain(g1, g2, proofs):
    if g1 == g2:
        return SubProof("ref", g1, g2)
    cur = g1
    out = None
    for v in g1:
        if g1[v] == g2[v]:
            continue
        nxt = cur.replace(v, g2[v])
        st = SubProof("env", cur, nxt, (proofs[v],), data=v)
        out = st if out is None else SubProof("tr", out.lhs, st.rhs, (out, st))
        cur = nxt
    return out
