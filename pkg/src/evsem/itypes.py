"""Intersection types with expansion variables, and type environments.

Types are kept in a canonical form that decides the quotient by
commutativity, associativity and idempotence of ``&`` together with the law
``e (U & V) = e U & e V``: intersections are flat, duplicate-free and sorted,
and an expansion variable never wraps an intersection directly.
"""
from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import config
from .errors import DegreeUnderflow, ModeError, NotJoinable, ValidationError
from .terms import Var


class Type:
    __slots__ = ()

    @property
    def size(self) -> int:
        return self._size

    @property
    def degree(self) -> int:
        return self._deg

    @property
    def good(self) -> bool:
        return self._good

    @property
    def key(self):
        return self._key

    @property
    def parts(self) -> tuple:
        return (self,)

    def __hash__(self):
        return self._hash

    def __lt__(self, other):
        return self._key < other._key

    def __str__(self):
        from .syntax import print_type
        return print_type(self)


def _init(obj, size, deg, good, key):
    object.__setattr__(obj, "_size", size)
    object.__setattr__(obj, "_deg", deg)
    object.__setattr__(obj, "_good", good)
    object.__setattr__(obj, "_key", key)
    object.__setattr__(obj, "_hash", hash(key))


_CACHED = dict(init=False, repr=False, compare=False)


@dataclass(frozen=True, eq=True)
class Atom(Type):
    name: str
    _size: int = field(**_CACHED)
    _deg: int = field(**_CACHED)
    _good: bool = field(**_CACHED)
    _key: tuple = field(**_CACHED)
    _hash: int = field(**_CACHED)

    def __post_init__(self):
        if not self.name or config.is_evar_name(self.name):
            raise ValidationError(f"bad atom name {self.name!r}")
        _init(self, 1, 0, True, (0, self.name))

    __hash__ = Type.__hash__


@dataclass(frozen=True, eq=True)
class Exp(Type):
    evar: str
    body: Type
    _size: int = field(**_CACHED)
    _deg: int = field(**_CACHED)
    _good: bool = field(**_CACHED)
    _key: tuple = field(**_CACHED)
    _hash: int = field(**_CACHED)

    def __post_init__(self):
        if not config.is_evar_name(self.evar):
            raise ValidationError(f"bad expansion variable {self.evar!r}")
        if config.evar_mode() == config.SINGLE and self.evar != config.E_C:
            raise ModeError(f"expansion variable {self.evar!r} used in single-E-variable mode")
        b = self.body
        _init(self, 1 + b.size, b.degree + 1, b.good, (1, self.evar, b.key))

    __hash__ = Type.__hash__


@dataclass(frozen=True, eq=True)
class Arrow(Type):
    left: Type
    right: Type
    _size: int = field(**_CACHED)
    _deg: int = field(**_CACHED)
    _good: bool = field(**_CACHED)
    _key: tuple = field(**_CACHED)
    _hash: int = field(**_CACHED)

    def __post_init__(self):
        l, r = self.left, self.right
        _init(self, 1 + l.size + r.size, min(l.degree, r.degree),
              l.good and r.good and l.degree >= r.degree, (2, l.key, r.key))

    __hash__ = Type.__hash__


@dataclass(frozen=True, eq=True)
class Inter(Type):
    members: tuple
    _size: int = field(**_CACHED)
    _deg: int = field(**_CACHED)
    _good: bool = field(**_CACHED)
    _key: tuple = field(**_CACHED)
    _hash: int = field(**_CACHED)

    def __post_init__(self):
        ms = tuple(self.members)
        if len(ms) < 2:
            raise ValidationError("an intersection needs at least two members")
        object.__setattr__(self, "members", ms)
        degs = {m.degree for m in ms}
        _init(self, sum(m.size for m in ms) + len(ms) - 1, min(degs),
              len(degs) == 1 and all(m.good for m in ms), (3, tuple(m.key for m in ms)))

    __hash__ = Type.__hash__

    @property
    def parts(self) -> tuple:
        return self.members


# ---------------------------------------------------------------------------
# canonical constructors

def atom(name: str) -> Atom:
    return Atom(name)


def arrow(left: Type, right: Type) -> Arrow:
    return Arrow(left, right)


def inter(*types: Type) -> Type:
    """Canonical intersection of already-canonical types."""
    seen = {}
    for t in types:
        for p in t.parts:
            seen.setdefault(p, None)
    if not seen:
        raise ValidationError("empty intersection")
    ps = sorted(seen, key=lambda p: p.key)
    return ps[0] if len(ps) == 1 else Inter(tuple(ps))


def exp(evar: str, body: Type) -> Type:
    """Canonical ``evar body``: distributes over the parts of ``body``."""
    ps = body.parts
    if len(ps) == 1:
        return Exp(evar, body)
    return inter(*(Exp(evar, p) for p in ps))


def exp_n(evar: str, body: Type, n: int) -> Type:
    for _ in range(n):
        body = exp(evar, body)
    return body


def canonicalize(t: Type) -> Type:
    """Normal form of an arbitrary (raw) type tree."""
    if isinstance(t, Atom):
        return t
    if isinstance(t, Arrow):
        return Arrow(canonicalize(t.left), canonicalize(t.right))
    if isinstance(t, Exp):
        return exp(t.evar, canonicalize(t.body))
    return inter(*(canonicalize(m) for m in t.members))


def is_canonical(t: Type) -> bool:
    return canonicalize(t) == t


def parts(t: Type) -> tuple:
    return t.parts


def type_degree(t: Type) -> int:
    return t.degree


def is_good_type(t: Type) -> bool:
    return t.good


def atoms_of(t: Type) -> set:
    if isinstance(t, Atom):
        return {t.name}
    if isinstance(t, Exp):
        return atoms_of(t.body)
    if isinstance(t, Arrow):
        return atoms_of(t.left) | atoms_of(t.right)
    return set().union(*(atoms_of(m) for m in t.members))


def evars_of(t: Type) -> set:
    if isinstance(t, Atom):
        return set()
    if isinstance(t, Exp):
        return {t.evar} | evars_of(t.body)
    if isinstance(t, Arrow):
        return evars_of(t.left) | evars_of(t.right)
    return set().union(*(evars_of(m) for m in t.members))


def subtypes_of(t: Type) -> Iterator[Type]:
    yield t
    if isinstance(t, Exp):
        yield from subtypes_of(t.body)
    elif isinstance(t, Arrow):
        yield from subtypes_of(t.left)
        yield from subtypes_of(t.right)
    elif isinstance(t, Inter):
        for m in t.members:
            yield from subtypes_of(m)


# ---------------------------------------------------------------------------
# grammar classes

class GrammarClass(enum.Enum):
    T = "T"
    U = "U"
    GENERAL = "general"


def in_T(t: Type) -> bool:
    if isinstance(t, Atom):
        return True
    return isinstance(t, Arrow) and in_U(t.left) and in_T(t.right)


def in_U(t: Type) -> bool:
    if isinstance(t, Inter):
        return all(in_U(m) for m in t.members)
    if isinstance(t, Exp):
        return in_U(t.body)
    return in_T(t)


def grammar_class(t: Type) -> GrammarClass:
    if in_T(t):
        return GrammarClass.T
    if in_U(t):
        return GrammarClass.U
    return GrammarClass.GENERAL


# ---------------------------------------------------------------------------
# lowering

def type_lower(t: Type) -> Type:
    if t.degree == 0:
        raise DegreeUnderflow(f"cannot lower the degree-0 type {t}")
    if isinstance(t, Exp):
        return t.body
    if isinstance(t, Inter):
        return inter(*(type_lower(m) for m in t.members))
    raise DegreeUnderflow(f"no lowering clause for {t}")


def type_lower_n(t: Type, n: int) -> Type:
    if t.degree < n:
        raise DegreeUnderflow(f"cannot lower a degree-{t.degree} type {n} times")
    for _ in range(n):
        t = type_lower(t)
    return t


def strip_evar(t: Type):
    """``(e, U)`` when ``t`` is canonically ``e U``; ``None`` otherwise."""
    ps = t.parts
    if not all(isinstance(p, Exp) for p in ps):
        return None
    evs = {p.evar for p in ps}
    if len(evs) != 1:
        return None
    return evs.pop(), inter(*(p.body for p in ps))


# ---------------------------------------------------------------------------
# enumeration of canonical types

def enumerate_types(max_size: int, atoms=("a", "b"), evars=(config.E_C,),
                    grammar: str = "U") -> list:
    """All canonical types of size ``<= max_size`` sorted by (size, key).

    ``grammar`` is ``"T"``, ``"U"`` or ``"general"``.
    """
    return list(_TypeUniverse.get(tuple(atoms), tuple(evars), grammar).upto(max_size))


class _TypeUniverse:
    _cache = {}

    @classmethod
    def get(cls, atoms, evars, grammar):
        key = (atoms, evars, grammar, config.evar_mode())
        u = cls._cache.get(key)
        if u is None:
            u = cls._cache[key] = cls(atoms, evars, grammar)
        return u

    def __init__(self, atoms, evars, grammar):
        self.atoms = atoms
        self.evars = evars
        self.grammar = grammar
        self.single = {}  # size -> non-intersection types
        self.full = {}    # size -> all canonical types
        self.tclass = {}  # size -> T-members

    def _ok_left(self, t):
        return self.grammar == "general" or in_U(t)

    def _ok_right(self, t):
        return self.grammar == "general" or in_T(t)

    def _build(self, s):
        if s in self.full:
            return
        for k in range(1, s):
            self._build(k)
        single = []
        if s == 1:
            single.extend(Atom(a) for a in self.atoms)
        else:
            for e in self.evars:
                single.extend(Exp(e, b) for b in self.single[s - 1])
            # T arrows still take U sources, so borrow them from the U universe
            lefts = self.full
            if self.grammar == "T":
                uu = _TypeUniverse.get(self.atoms, self.evars, "U")
                uu._build(s)
                lefts = uu.full
            for ls in range(1, s - 1):
                for l in lefts[ls]:
                    if not self._ok_left(l):
                        continue
                    for r in self.full[s - 1 - ls]:
                        if self._ok_right(r):
                            single.append(Arrow(l, r))
        if self.grammar == "T":
            single = [t for t in single if in_T(t)]
        self.single[s] = sorted(single, key=lambda t: t.key)
        inters = []
        if self.grammar != "T":
            pool = [t for k in range(1, s) for t in self.single[k]]
            pool.sort(key=lambda t: t.key)
            inters = list(self._combos(pool, s))
        self.full[s] = sorted(self.single[s] + inters, key=lambda t: t.key)

    def _combos(self, pool, s):
        def rec(start, chosen, used):
            if len(chosen) >= 2 and used + len(chosen) - 1 == s:
                yield Inter(tuple(chosen))
            for i in range(start, len(pool)):
                p = pool[i]
                if used + p.size + len(chosen) > s:
                    continue
                yield from rec(i + 1, chosen + [p], used + p.size)
        yield from rec(0, [], 0)

    def upto(self, max_size):
        for s in range(1, max_size + 1):
            self._build(s)
            yield from self.full[s]


# ---------------------------------------------------------------------------
# environments

@dataclass(frozen=True)
class TypeEnv:
    """Finite map from degree-indexed variables to canonical types."""

    items: tuple = ()
    _map: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        items = tuple(sorted(((v, t) for v, t in self.items),
                             key=lambda vt: (vt[0].name, vt[0].deg)))
        m = {}
        degs = {}
        for v, t in items:
            if not isinstance(v, Var) or not isinstance(t, Type):
                raise ValidationError("environment bindings are (Var, Type) pairs")
            if v in m:
                raise ValidationError(f"{v.name}^{v.deg} bound twice")
            if degs.setdefault(v.name, v.deg) != v.deg:
                raise NotJoinable(f"{v.name} bound at two degrees")
            m[v] = t
        object.__setattr__(self, "items", items)
        object.__setattr__(self, "_map", m)

    @classmethod
    def of(cls, mapping=None, **kw) -> "TypeEnv":
        pairs = list((mapping or {}).items())
        return cls(tuple(pairs))

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self._map)

    def __contains__(self, v):
        return v in self._map

    def __getitem__(self, v):
        return self._map[v]

    def get(self, v, default=None):
        return self._map.get(v, default)

    def dom(self) -> frozenset:
        return frozenset(self._map)

    def types(self):
        return [t for _, t in self.items]

    def extend(self, v: Var, t: Type) -> "TypeEnv":
        if v in self._map:
            raise ValidationError(f"{v.name}^{v.deg} already bound")
        return TypeEnv(self.items + ((v, t),))

    def remove(self, v: Var) -> "TypeEnv":
        return TypeEnv(tuple((w, t) for w, t in self.items if w != v))

    def restrict(self, vs) -> "TypeEnv":
        return TypeEnv(tuple((w, t) for w, t in self.items if w in vs))

    def replace(self, v: Var, t: Type) -> "TypeEnv":
        return TypeEnv(tuple((w, t if w == v else s) for w, s in self.items))

    def __str__(self):
        from .syntax import print_env
        return print_env(self)


EMPTY_ENV = TypeEnv()


def env_joinable(g1: TypeEnv, g2: TypeEnv) -> bool:
    degs = {v.name: v.deg for v in g1}
    return all(degs.get(v.name, v.deg) == v.deg for v in g2)


def env_meet(g1: TypeEnv, g2: TypeEnv) -> TypeEnv:
    if not env_joinable(g1, g2):
        raise NotJoinable("environments bind a name at different degrees")
    out = dict(g1._map)
    for v, t in g2.items:
        out[v] = inter(out[v], t) if v in out else t
    return TypeEnv(tuple(out.items()))


def env_meet_all(envs: Iterable[TypeEnv]) -> TypeEnv:
    acc = EMPTY_ENV
    for g in envs:
        acc = env_meet(acc, g)
    return acc


def env_expand(evar: str, g: TypeEnv) -> TypeEnv:
    return TypeEnv(tuple((Var(v.name, v.deg + 1), exp(evar, t)) for v, t in g.items))


def env_good(g: TypeEnv) -> bool:
    return all(t.good for _, t in g.items)


def env_degree_positive(g: TypeEnv) -> bool:
    return all(v.deg > 0 and t.degree > 0 for v, t in g.items)


def env_lower(g: TypeEnv) -> TypeEnv:
    if not env_degree_positive(g):
        raise DegreeUnderflow("environment degree is not positive")
    return TypeEnv(tuple((Var(v.name, v.deg - 1), type_lower(t)) for v, t in g.items))


def typing_lower(g: TypeEnv, t: Type):
    if t.degree == 0:
        raise DegreeUnderflow("result type has degree 0")
    return env_lower(g), type_lower(t)


def env_strip_evar(g: TypeEnv, evar: str):
    """Γ' with ``evar Γ' = g``, or ``None``."""
    out = []
    for v, t in g.items:
        st = strip_evar(t)
        if st is None or st[0] != evar or v.deg == 0:
            return None
        out.append((Var(v.name, v.deg - 1), st[1]))
    return TypeEnv(tuple(out))


def part_splits(t: Type):
    """Ordered pairs ``(t1, t2)`` with ``t1 & t2 = t`` built from parts of ``t``."""
    ps = t.parts
    n = len(ps)
    subsets = [c for k in range(1, n + 1) for c in itertools.combinations(ps, k)]
    for s1 in subsets:
        for s2 in subsets:
            if len(set(s1) | set(s2)) == n:
                yield inter(*s1), inter(*s2)
