"""Degree-indexed λI-terms.

Every variable occurrence carries a natural-number degree.  Terms are immutable
and validated on construction: applications must be joinable (a free name is
used at a single degree across both sides) and abstractions must bind a
variable that occurs free in the body.
"""
from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .errors import (DegreeMismatch, DegreeUnderflow, NotJoinable, NotLambdaI,
                     ValidationError)

IDENT_RE = re.compile(r"[A-Za-z_][A-Za-z0-9_']*\Z")


class VarClass(enum.Enum):
    V1 = 1
    V2 = 2


def var_class(name: str) -> VarClass:
    """Names starting with ``_`` live in the reserved class V2."""
    return VarClass.V2 if name.startswith("_") else VarClass.V1


class Term:
    """Common base of :class:`Var`, :class:`App` and :class:`Lam`."""

    __slots__ = ()

    @property
    def fv(self) -> frozenset:
        return self._fv

    @property
    def degree(self) -> int:
        return self._deg

    @property
    def good(self) -> bool:
        return self._good

    @property
    def size(self) -> int:
        return self._size

    def __hash__(self):
        return self._hash

    def __str__(self):
        from .syntax import print_term
        return print_term(self)


@dataclass(frozen=True, eq=True)
class Var(Term):
    name: str
    deg: int
    _fv: frozenset = field(init=False, repr=False, compare=False)
    _deg: int = field(init=False, repr=False, compare=False)
    _good: bool = field(init=False, repr=False, compare=False)
    _size: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.name, str) or not IDENT_RE.match(self.name):
            raise ValidationError(f"bad variable name {self.name!r}")
        if not isinstance(self.deg, int) or isinstance(self.deg, bool) or self.deg < 0:
            raise ValidationError(f"bad degree {self.deg!r} for {self.name}")
        object.__setattr__(self, "_deg", self.deg)
        object.__setattr__(self, "_good", True)
        object.__setattr__(self, "_size", 1)
        object.__setattr__(self, "_hash", hash(("var", self.name, self.deg)))
        object.__setattr__(self, "_fv", frozenset((self,)))

    __hash__ = Term.__hash__

    @property
    def var_class(self) -> VarClass:
        return var_class(self.name)


@dataclass(frozen=True, eq=True)
class App(Term):
    fn: Term
    arg: Term
    _fv: frozenset = field(init=False, repr=False, compare=False)
    _deg: int = field(init=False, repr=False, compare=False)
    _good: bool = field(init=False, repr=False, compare=False)
    _size: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        clash = _degree_clash(self.fn.fv, self.arg.fv)
        if clash:
            raise NotJoinable(f"{clash} occurs at two degrees in an application")
        object.__setattr__(self, "_fv", self.fn.fv | self.arg.fv)
        object.__setattr__(self, "_deg", min(self.fn.degree, self.arg.degree))
        object.__setattr__(self, "_good", self.fn.good and self.arg.good
                           and self.fn.degree <= self.arg.degree)
        object.__setattr__(self, "_size", 1 + self.fn.size + self.arg.size)
        object.__setattr__(self, "_hash", hash(("app", self.fn._hash, self.arg._hash)))

    __hash__ = Term.__hash__


@dataclass(frozen=True, eq=True)
class Lam(Term):
    binder: Var
    body: Term
    _fv: frozenset = field(init=False, repr=False, compare=False)
    _deg: int = field(init=False, repr=False, compare=False)
    _good: bool = field(init=False, repr=False, compare=False)
    _size: int = field(init=False, repr=False, compare=False)
    _hash: int = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if not isinstance(self.binder, Var):
            raise ValidationError("abstraction binder must be a variable")
        if self.binder not in self.body.fv:
            raise NotLambdaI(f"{self.binder.name}^{self.binder.deg} does not occur free in the body")
        object.__setattr__(self, "_fv", self.body.fv - {self.binder})
        object.__setattr__(self, "_deg", self.body.degree)
        object.__setattr__(self, "_good", self.body.good)
        object.__setattr__(self, "_size", 1 + self.body.size)
        object.__setattr__(self, "_hash", hash(("lam", self.binder._hash, self.body._hash)))

    __hash__ = Term.__hash__


def _degree_clash(vs1, vs2):
    if not vs1 or not vs2:
        return None
    degs = {v.name: v.deg for v in vs1}
    for v in vs2:
        d = degs.get(v.name)
        if d is not None and d != v.deg:
            return v.name
    return None


# ---------------------------------------------------------------------------
# basic queries

def free_vars(m: Term) -> frozenset:
    return m.fv


def degree(m: Term) -> int:
    return m.degree


def is_good(m: Term) -> bool:
    return m.good


def joinable(m: Term, n: Term) -> bool:
    return _degree_clash(m.fv, n.fv) is None


def all_joinable(terms: Iterable[Term]) -> bool:
    degs = {}
    for t in terms:
        for v in t.fv:
            if degs.setdefault(v.name, v.deg) != v.deg:
                return False
    return True


def names(m: Term) -> set:
    """Every variable name occurring in ``m``, bound or free."""
    out = set()
    stack = [m]
    while stack:
        t = stack.pop()
        if isinstance(t, Var):
            out.add(t.name)
        elif isinstance(t, App):
            stack.extend((t.fn, t.arg))
        else:
            out.add(t.binder.name)
            stack.append(t.body)
    return out


def subterms(m: Term) -> Iterator[Term]:
    yield m
    if isinstance(m, App):
        yield from subterms(m.fn)
        yield from subterms(m.arg)
    elif isinstance(m, Lam):
        yield from subterms(m.body)


def mk_app(m: Term, n: Term) -> App:
    return App(m, n)


def mk_lam(x: Var, m: Term) -> Lam:
    """Build ``λx.m``, renaming inner binders that reuse the name of ``x``."""
    if x not in m.fv:
        raise NotLambdaI(f"{x.name}^{x.deg} does not occur free in the body")
    if _binds_name(m, x.name):
        m = _rename_binders_named(m, x.name, names(m) | {x.name})
    return Lam(x, m)


def _binds_name(m, name):
    if isinstance(m, Var):
        return False
    if isinstance(m, App):
        return _binds_name(m.fn, name) or _binds_name(m.arg, name)
    return m.binder.name == name or _binds_name(m.body, name)


def _rename_binders_named(m, name, avoid):
    if isinstance(m, Var):
        return m
    if isinstance(m, App):
        return App(_rename_binders_named(m.fn, name, avoid),
                   _rename_binders_named(m.arg, name, avoid))
    body = _rename_binders_named(m.body, name, avoid)
    if m.binder.name != name:
        return Lam(m.binder, body)
    fresh = fresh_name(name, avoid)
    avoid.add(fresh)
    nb = Var(fresh, m.binder.deg)
    return Lam(nb, _subst(body, {m.binder: nb}))


def fresh_name(base: str, avoid) -> str:
    cand = base + "'"
    while cand in avoid:
        cand += "'"
    return cand


# ---------------------------------------------------------------------------
# substitution

def substitute(m: Term, bindings: Sequence[tuple]) -> Term:
    """Simultaneous capture-avoiding substitution ``m[x1:=n1, ...]``.

    Defined only when ``m`` and all substituted terms are pairwise joinable and
    each substituted term has the degree of the variable it replaces.
    """
    sub = {}
    for x, n in bindings:
        if not isinstance(x, Var):
            raise ValidationError("substitution target must be a variable")
        if n.degree != x.deg:
            raise DegreeMismatch(
                f"cannot substitute a degree-{n.degree} term for {x.name}^{x.deg}")
        if sub.get(x, n) != n:
            raise ValidationError(f"{x.name}^{x.deg} bound twice")
        sub[x] = n
    if not all_joinable([m, *sub.values()]):
        raise NotJoinable("substitution is undefined on non-joinable terms")
    return _subst(m, sub)


def _subst(m, sub):
    if not sub or not (m.fv & sub.keys()):
        return m
    if isinstance(m, Var):
        return sub.get(m, m)
    if isinstance(m, App):
        return App(_subst(m.fn, sub), _subst(m.arg, sub))
    b = m.binder
    inner = {x: n for x, n in sub.items() if x.name != b.name and x in m.body.fv}
    if not inner:
        return m
    incoming = set()
    for n in inner.values():
        incoming.update(v.name for v in n.fv)
    body = m.body
    if b.name in incoming:
        avoid = names(body) | incoming | {x.name for x in inner}
        nb = Var(fresh_name(b.name, avoid), b.deg)
        body = _subst(body, {b: nb})
        b = nb
    return Lam(b, _subst(body, inner))


# ---------------------------------------------------------------------------
# α-equivalence

@functools.lru_cache(maxsize=200_000)
def alpha_key(m: Term):
    """A nameless (de Bruijn) key: equal keys iff α-equivalent terms."""
    return _key(m, ())


def _key(m, scope):
    if isinstance(m, Var):
        for i in range(len(scope) - 1, -1, -1):
            if scope[i] == m:
                return ("b", len(scope) - 1 - i, m.deg)
        return ("f", m.name, m.deg)
    if isinstance(m, App):
        return ("@", _key(m.fn, scope), _key(m.arg, scope))
    return ("\\", m.binder.deg, _key(m.body, scope + (m.binder,)))


def alpha_eq(m: Term, n: Term) -> bool:
    return m is n or alpha_key(m) == alpha_key(n)


def normalize_names(m: Term, pool: str = "v") -> Term:
    """Rename binders to ``v0, v1, ...`` by nesting depth (Barendregt form)."""
    avoid = {v.name for v in m.fv}
    return _canon(m, {}, 0, pool, avoid)


def _canon(m, ren, depth, pool, avoid):
    if isinstance(m, Var):
        return ren.get(m, m)
    if isinstance(m, App):
        return App(_canon(m.fn, ren, depth, pool, avoid),
                   _canon(m.arg, ren, depth, pool, avoid))
    name = f"{pool}{depth}"
    while name in avoid:
        name += "'"
    nb = Var(name, m.binder.deg)
    ren = dict(ren)
    ren[m.binder] = nb
    return Lam(nb, _canon(m.body, ren, depth + 1, pool, avoid))


# ---------------------------------------------------------------------------
# degree shifting

def lift(m: Term, k: int = 1) -> Term:
    if k == 0:
        return m
    return _shift(m, k)


def lower(m: Term) -> Term:
    if m.degree == 0:
        raise DegreeUnderflow("cannot lower a term of degree 0")
    return _shift(m, -1)


def lower_n(m: Term, n: int) -> Term:
    if n < 0:
        raise ValueError("n must be non-negative")
    if m.degree < n:
        raise DegreeUnderflow(f"cannot lower a degree-{m.degree} term {n} times")
    return _shift(m, -n) if n else m


def _shift(m, k):
    if isinstance(m, Var):
        return Var(m.name, m.deg + k)
    if isinstance(m, App):
        return App(_shift(m.fn, k), _shift(m.arg, k))
    return Lam(Var(m.binder.name, m.binder.deg + k), _shift(m.body, k))


# ---------------------------------------------------------------------------
# exhaustive enumeration

def enumerate_good_terms(max_size: int, target_degree: int = 0, closed: bool = True,
                         alphabet: Sequence[str] = ("x",), max_degree: int | None = None,
                         min_size: int = 1) -> Iterator[Term]:
    """Yield every good term up to α with ``min_size <= size <= max_size``.

    Binders are named ``v0, v1, ...`` by nesting depth, which makes the stream
    duplicate-free modulo α.  Variable degrees range over
    ``0..max_degree`` (default ``target_degree + 1``).
    """
    if max_size < 1:
        raise ValueError("max_size must be at least 1")
    if max_degree is None:
        max_degree = target_degree + 1
    free = () if closed else tuple(alphabet)
    for a in free:
        if re.match(r"v[0-9]+'*\Z", a):
            raise ValueError(f"free name {a!r} collides with the binder pool")
    gen = _Enumerator(free, max_degree)
    for s in range(max(1, min_size), max_size + 1):
        for t in gen.terms(s, ()):
            if t.degree == target_degree and (not closed or not t.fv):
                yield t


class _Enumerator:
    def __init__(self, free, max_degree):
        self.free = free
        self.max_degree = max_degree
        self.memo = {}

    def terms(self, size, scope):
        key = (size, scope)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        out = []
        if size == 1:
            out.extend(scope)
            for a in self.free:
                for d in range(self.max_degree + 1):
                    out.append(Var(a, d))
        else:
            for lsize in range(1, size - 1):
                rs = size - 1 - lsize
                fns = self.terms(lsize, scope)
                args = self.terms(rs, scope)
                for f in fns:
                    for a in args:
                        if f.degree <= a.degree and joinable(f, a):
                            out.append(App(f, a))
            for d in range(self.max_degree + 1):
                b = Var(f"v{len(scope)}", d)
                for body in self.terms(size - 1, scope + (b,)):
                    if b in body.fv:
                        out.append(Lam(b, body))
        self.memo[key] = out
        return out
