"""Concrete syntax: a small lexer, recursive-descent parsers and printers.

Terms::

    x^3            variable (names starting with ``_`` are reserved)
    \\x^0. M        abstraction (``λ`` is accepted too)
    M N            application, left-associative

Types::

    e T            expansion variable application, tightest
    T & U          intersection (``⊓`` accepted)
    U -> T         arrow, right-associative, loosest (``→`` accepted)

Environments are ``x^0: a & b, y^1: e a`` (``()`` for the empty one) and
judgments are ``M : <ENV |-2 U>``.  Printers emit canonical text that parses
back to the same value.
"""
from __future__ import annotations

import re

from . import config
from .errors import ParseError
from .itypes import Atom, Arrow, Exp, Inter, Type, TypeEnv, canonicalize
from .terms import App, Lam, Term, Var

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<turn>\|-[12]|⊢[12₁₂])
  | (?P<sub><=|⊑)
  | (?P<arrow>->|→)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<num>[0-9]+)
  | (?P<sym>[\\λ.()&⊓^,:<>{}])
""", re.VERBOSE)

_TURN = {"|-1": 1, "|-2": 2, "⊢1": 1, "⊢2": 2, "⊢₁": 1, "⊢₂": 2}


class _Tok:
    __slots__ = ("kind", "text", "pos")

    def __init__(self, kind, text, pos):
        self.kind = kind
        self.text = text
        self.pos = pos


def _lex(text):
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise ParseError(f"unexpected character {text[pos]!r}", text, pos)
        kind = m.lastgroup
        if kind != "ws":
            val = m.group()
            if kind == "sym":
                kind = {"λ": "\\", "⊓": "&"}.get(val, val)
            elif kind == "arrow":
                kind = "->"
            elif kind == "sub":
                kind = "<="
            toks.append(_Tok(kind, val, pos))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _lex(text)
        self.i = 0

    @property
    def peek(self):
        return self.toks[self.i]

    def next(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind, what=None):
        t = self.peek
        if t.kind != kind:
            shown = t.text or "end of input"
            raise ParseError(f"expected {what or kind!r}, found {shown!r}", self.text, t.pos)
        return self.next()

    def fail(self, msg):
        raise ParseError(msg, self.text, self.peek.pos)

    def done(self):
        if self.peek.kind != "eof":
            self.fail(f"unexpected {self.peek.text!r}")

    # terms -----------------------------------------------------------------
    def var(self):
        name = self.expect("ident", "variable name")
        self.expect("^", "'^' and a degree")
        deg = self.expect("num", "degree")
        return Var(name.text, int(deg.text))

    def term(self):
        head = self.term_atom()
        if head is None:
            self.fail("expected a term")
        while True:
            arg = self.term_atom()
            if arg is None:
                return head
            head = App(head, arg)

    def term_atom(self):
        k = self.peek.kind
        if k == "ident":
            return self.var()
        if k == "(":
            self.next()
            t = self.term()
            self.expect(")")
            return t
        if k == "\\":
            self.next()
            x = self.var()
            self.expect(".")
            return Lam(x, self.term())
        return None

    # types -----------------------------------------------------------------
    def type(self):
        left = self.inter()
        if self.peek.kind == "->":
            self.next()
            return Arrow(left, self.type())
        return left

    def inter(self):
        ps = [self.unary()]
        while self.peek.kind == "&":
            self.next()
            ps.append(self.unary())
        return ps[0] if len(ps) == 1 else Inter(tuple(ps))

    def unary(self):
        t = self.peek
        if t.kind == "(":
            self.next()
            inner = self.type()
            self.expect(")")
            return inner
        if t.kind == "ident":
            self.next()
            if config.is_evar_name(t.text):
                return Exp(t.text, self.unary())
            if not t.text[0].islower() or "'" in t.text:
                raise ParseError(f"atom names are lowercase identifiers, got {t.text!r}",
                                 self.text, t.pos)
            return Atom(t.text)
        self.fail("expected a type")

    # environments ----------------------------------------------------------
    def env(self, stop=("eof",)):
        if self.peek.kind == "(" and self.toks[self.i + 1].kind == ")":
            self.next()
            self.next()
            return TypeEnv()
        items = []
        if self.peek.kind in stop or self.peek.kind == "turn":
            return TypeEnv()
        while True:
            v = self.var()
            self.expect(":")
            items.append((v, canonicalize(self.type())))
            if self.peek.kind != ",":
                break
            self.next()
        return TypeEnv(tuple(items))

    def typing(self):
        self.expect("<")
        g = self.env()
        turn = self.expect("turn", "'|-1' or '|-2'")
        u = canonicalize(self.type())
        self.expect(">")
        return g, _TURN[turn.text], u


def _run(text, fn):
    p = _Parser(text)
    v = fn(p)
    p.done()
    return v


def parse_term(text: str) -> Term:
    return _run(text, _Parser.term)


def parse_type(text: str, canonical: bool = True) -> Type:
    raw = _run(text, _Parser.type)
    return canonicalize(raw) if canonical else raw


def parse_env(text: str) -> TypeEnv:
    return _run(text, _Parser.env)


def parse_typing(text: str):
    """``<ENV |-i U>`` as ``(env, system, type)``."""
    return _run(text, _Parser.typing)


def parse_judgment(text: str):
    from .derivations import Judgment, System

    def go(p):
        m = p.term()
        p.expect(":")
        g, sys_, u = p.typing()
        return Judgment(m, g, System(sys_), u)
    return _run(text, go)


def parse_subtype_goal(text: str):
    """``U <= V``, ``{ENV} <= {ENV}`` or ``<ENV |-2 U> <= <ENV |-2 V>``."""
    from .subtyping import SubtypeGoal

    def side(p):
        k = p.peek.kind
        if k == "<":
            g, _, u = p.typing()
            return (g, u)
        if k == "{":
            p.next()
            g = p.env(stop=("}",))
            p.expect("}")
            return g
        return canonicalize(p.type())

    def go(p):
        lhs = side(p)
        p.expect("<=", "'<='")
        rhs = side(p)
        return SubtypeGoal.of(lhs, rhs)
    return _run(text, go)


def parse_derivation(text: str):
    from .derivations import derivation_from_json
    import json
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from None
    return derivation_from_json(data)


# ---------------------------------------------------------------------------
# printers

def print_var(v: Var) -> str:
    return f"{v.name}^{v.deg}"


def print_term(m: Term) -> str:
    if isinstance(m, Var):
        return print_var(m)
    if isinstance(m, Lam):
        return f"\\{print_var(m.binder)}. {print_term(m.body)}"
    fn = print_term(m.fn)
    if isinstance(m.fn, Lam):
        fn = f"({fn})"
    arg = print_term(m.arg)
    if not isinstance(m.arg, Var):
        arg = f"({arg})"
    return f"{fn} {arg}"


def print_type(t: Type) -> str:
    if isinstance(t, Atom):
        return t.name
    if isinstance(t, Exp):
        b = print_type(t.body)
        if isinstance(t.body, Arrow):
            b = f"({b})"
        return f"{t.evar} {b}"
    if isinstance(t, Arrow):
        l = print_type(t.left)
        if isinstance(t.left, Arrow):
            l = f"({l})"
        return f"{l} -> {print_type(t.right)}"
    inner = []
    for p in t.members:
        s = print_type(p)
        inner.append(f"({s})" if isinstance(p, Arrow) else s)
    return "(" + " & ".join(inner) + ")"


def print_env(g: TypeEnv) -> str:
    if not len(g):
        return "()"
    return ", ".join(f"{print_var(v)}: {print_type(t)}" for v, t in g.items)


def print_typing(g: TypeEnv, system: int, t: Type) -> str:
    return f"<{print_env(g)} |-{int(system)} {print_type(t)}>"


def print_judgment(j) -> str:
    return f"{print_term(j.subject)} : {print_typing(j.env, j.system.value, j.result)}"
