"""Realisability semantics, approximated by bounded procedures.

An interpretation sends every atom to a saturated set of good degree-0
terms that contains all head-variable patterns ``x^0 N1 .. Nk`` with ``x`` an
ordinary (non-reserved) name.  Two kinds are provided:

``generated``
    the least such set containing a finite list of generator terms; an atom
    accepts a term when it reduces, within fuel, to a pattern or a generator.
``special``
    the interpretation built from typability in the reserved environments;
    membership at a good type is decided through typing search.

Arrow membership for generated interpretations is tested on probes.  A
failing probe is a definitive ``OUT``; surviving every probe yields
``UNKNOWN`` flagged ``survived``.  ``IN`` is only reported with a witness
that settles the question exactly.
"""
from __future__ import annotations

import configparser
import enum
import itertools
from dataclasses import dataclass, field
from importlib import resources

from . import config
from .derivations import Judgment, System
from .errors import (DegreeUnderflow, ModeError, NotClosed, ParseError,
                     ValidationError)
from .itypes import (Atom, Exp, Inter, Type, TypeEnv, exp_n,
                     in_U, type_lower_n)
from .reduction import Tri, reduct_set
from .search import Bounds, check_judgment
from .terms import (App, Term, Var, VarClass, alpha_key, enumerate_good_terms,
                    fresh_name, joinable, lift, lower, names, var_class)


class Verdict(enum.Enum):
    IN = "in"
    OUT = "out"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


@dataclass
class Membership:
    verdict: Verdict
    witness: object = None
    survived: bool = False

    def to_json(self):
        out = {"verdict": self.verdict.value}
        if self.survived:
            out["survived_probes"] = True
        if self.witness is not None:
            out["witness"] = _witness_json(self.witness)
        return out

    def describe(self) -> str:
        s = self.verdict.value
        if self.survived:
            s += " (survived every probe)"
        return s


def _witness_json(w):
    from .derivations import Derivation, derivation_to_json
    if isinstance(w, Term):
        return str(w)
    if isinstance(w, Derivation):
        return derivation_to_json(w)
    if isinstance(w, dict):
        return {k: _witness_json(v) for k, v in w.items()}
    if isinstance(w, (list, tuple)):
        return [_witness_json(x) for x in w]
    if isinstance(w, (str, int, float, bool)) or w is None:
        return w
    return str(w)


IN = lambda w=None: Membership(Verdict.IN, w)  # noqa: E731
OUT = lambda w=None: Membership(Verdict.OUT, w)  # noqa: E731


# ---------------------------------------------------------------------------
# head-variable patterns and the escape sets

def in_N(m: Term, x: str, n: int) -> bool:
    """``m`` is a good application ``x^n N1 .. Nk`` (``k >= 0``)."""
    if var_class(x) is not VarClass.V1:
        raise ValueError("head-variable patterns are for ordinary names")
    if not m.good:
        return False
    head = m
    args = []
    while isinstance(head, App):
        args.append(head.arg)
        head = head.fn
    if not (isinstance(head, Var) and head.name == x and head.deg == n):
        return False
    assert all(a.degree >= n for a in args)
    return True


def pattern_head(m: Term):
    """The ordinary head variable if ``m`` is a good head-variable pattern."""
    head = m
    while isinstance(head, App):
        head = head.fn
    if isinstance(head, Var) and head.var_class is VarClass.V1 and m.good:
        return head
    return None


def vset_member(m: Term, n: int) -> bool:
    """Good, of degree ``n``, with an ordinary free variable of degree ``>= n``."""
    if not m.good or m.degree != n:
        return False
    return any(v.var_class is VarClass.V1 and v.deg >= n for v in m.fv)


# ---------------------------------------------------------------------------
# reserved variables indexed by types

_HPREFIX = "_h"


def hvar(u: Type, k: int) -> Var:
    """The ``k``-th reserved variable attached to ``u``, at degree ``d(u)``.

    The name spells the canonical text of ``u`` lowered to degree 0 in hex,
    which makes the family injective without any shared state.
    """
    if config.evar_mode() != config.SINGLE:
        raise ModeError("reserved variables are only partitioned with a single E-variable")
    if k < 0:
        raise ValueError("index must be non-negative")
    from .syntax import print_type
    n = u.degree
    base = type_lower_n(u, n)
    return Var(f"{_HPREFIX}{print_type(base).encode('utf-8').hex()}_{k}", n)


def decode_hvar(v: Var):
    """``(type, k)`` for a reserved variable produced by :func:`hvar`, else ``None``."""
    from .syntax import parse_type, print_type
    name = v.name
    if not name.startswith(_HPREFIX):
        return None
    body, _, idx = name[len(_HPREFIX):].rpartition("_")
    if not body or not idx.isdigit():
        return None
    try:
        text = bytes.fromhex(body).decode("utf-8")
        base = parse_type(text)
    except (ValueError, ParseError, ValidationError, ModeError):
        return None
    if base.degree != 0 or print_type(base) != text or not in_U(base):
        return None
    return exp_n(config.E_C, base, v.deg), int(idx)


def in_H(env: TypeEnv, n: int) -> bool:
    if config.evar_mode() != config.SINGLE:
        raise ModeError("reserved environments need a single E-variable")
    for v, t in env.items:
        if v.deg < n or t.degree != v.deg or not in_U(t):
            return False
        dec = decode_hvar(v)
        if dec is None or dec[0] != t:
            return False
    return True


def forced_env(m: Term, n: int):
    """The only reserved environment that can type ``m`` at degree ``>= n``."""
    items = []
    for v in sorted(m.fv, key=lambda v: (v.name, v.deg)):
        dec = decode_hvar(v)
        if dec is None or v.deg < n:
            return None
        items.append((v, dec[0]))
    return TypeEnv(tuple(items))


# ---------------------------------------------------------------------------
# interpretations

@dataclass
class FinInterp:
    name: str
    kind: str = "generated"
    generators: dict = field(default_factory=dict)
    fuel: int = 8
    probe_budget: int = 3
    bounds: Bounds = field(default_factory=lambda: Bounds(6, 8))

    def __post_init__(self):
        if self.kind not in ("generated", "special"):
            raise ValueError(f"unknown interpretation kind {self.kind!r}")
        for a, gens in self.generators.items():
            for g in gens:
                if not g.good or g.degree != 0:
                    raise ValidationError(f"generator {g} for {a} must be good of degree 0")
        self._gen_keys = {a: {alpha_key(g) for g in gs} for a, gs in self.generators.items()}
        self._cache = {}

    def describe(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "fuel": self.fuel,
            "probe": self.probe_budget,
            "atoms": {a: [str(g) for g in gs] for a, gs in sorted(self.generators.items())},
        }


def load_family(text: str | None = None) -> list:
    """Parse an INI description of a family of interpretations.

    Each section is one interpretation with keys ``kind``, ``fuel``,
    ``probe`` and ``atom.<name> = term ; term ; ...``.
    """
    from .syntax import parse_term
    if text is None:
        text = resources.files("evsem").joinpath("data/family.ini").read_text("utf-8")
    cp = configparser.ConfigParser(interpolation=None)
    cp.read_string(text)
    out = []
    for sec in cp.sections():
        s = cp[sec]
        gens = {}
        for key, val in s.items():
            if key.startswith("atom."):
                gens[key[5:]] = tuple(parse_term(t.strip()) for t in val.split(";") if t.strip())
        out.append(FinInterp(sec, s.get("kind", "generated"), gens,
                             s.getint("fuel", 8), s.getint("probe", 3),
                             Bounds(s.getint("type_size", 6), s.getint("depth", 8))))
    return out


def _fresh_v1(avoid, deg, base="x"):
    name = base
    while name in avoid:
        name = fresh_name(name, avoid)
    return Var(name, deg)


def _reduces_to_pattern(m: Term, fuel: int, n: int):
    """A reduct of ``m`` that is an ordinary head-variable pattern of degree
    ``n``; ``None`` together with the completeness flag otherwise."""
    red, complete = reduct_set(m, fuel)
    for t in red.values():
        h = pattern_head(t)
        if h is not None and h.deg == n and t.degree == n:
            return t, complete
    return None, complete


def interp_member(m: Term, u: Type, interp: FinInterp) -> Membership:
    if interp.kind == "special":
        return special_interp_member(m, u, interp.bounds)
    key = (m, u)
    hit = interp._cache.get(key)
    if hit is None:
        hit = interp._cache[key] = _member(m, u, interp)
    return hit


def _member(m, u, I):
    n = u.degree
    if u.good:
        if not m.good or m.degree != n:
            return OUT({"reason": "a good type only holds good terms of its degree"})
        pat, _ = _reduces_to_pattern(m, I.fuel, n)
        if pat is not None:
            return IN({"reason": "reduces to a head-variable pattern", "reduct": pat})
    if isinstance(u, Atom):
        return _atom_member(m, u.name, I)
    if isinstance(u, Exp):
        if m.degree == 0:
            return OUT({"reason": "degree-0 term in a lifted set"})
        try:
            low = lower(m)
        except DegreeUnderflow:
            return OUT({"reason": "term cannot be lowered"})
        return interp_member(low, u.body, I)
    if isinstance(u, Inter):
        res = [interp_member(m, p, I) for p in u.members]
        for p, r in zip(u.members, res):
            if r.verdict is Verdict.OUT:
                return OUT({"reason": "fails a component", "component": str(p), "why": r.witness})
        if all(r.verdict is Verdict.IN for r in res):
            return IN({"reason": "every component holds"})
        return Membership(Verdict.UNKNOWN, None, all(r.verdict is Verdict.IN or r.survived for r in res))
    return _arrow_member(m, u, I)


def _atom_member(m, a, I):
    if not m.good or m.degree != 0:
        return OUT({"reason": "atoms only hold good degree-0 terms"})
    red, complete = reduct_set(m, I.fuel)
    keys = I._gen_keys.get(a, set())
    for k, t in red.items():
        h = pattern_head(t)
        if h is not None and h.deg == 0:
            return IN({"reason": "reduces to a head-variable pattern", "reduct": t})
        if k in keys:
            return IN({"reason": "reduces to a generator", "reduct": t})
    if complete:
        return OUT({"reason": "no reduct is a pattern or a generator",
                    "reducts": len(red)})
    return Membership(Verdict.UNKNOWN)


def probes(u: Type, I: FinInterp, avoid=()):
    """Terms certified ``IN`` for ``u`` under ``I``, in a fixed order."""
    avoid = frozenset(avoid)
    key = ("probes", u, avoid)
    hit = I._cache.get(key)
    if hit is None:
        hit = I._cache[key] = _probes(u, I, avoid)
    return list(hit)


def _probes(u, I, avoid):
    n = u.degree
    seen = {}

    def offer(t):
        k = alpha_key(t)
        if k in seen:
            return
        r = interp_member(t, u, I)
        if r.verdict is Verdict.IN:
            seen[k] = t

    if u.good:
        offer(_fresh_v1(avoid, n))
    for gs in I.generators.values():
        for g in gs:
            offer(lift(g, n))
    if I.probe_budget > 0:
        for t in enumerate_good_terms(I.probe_budget, n, closed=True):
            offer(t)
    return list(seen.values())


def _arrow_member(m, u, I):
    avoid = names(m)
    pool = probes(u.left, I, avoid)
    survived = True
    for nn in pool:
        if not joinable(m, nn):
            continue
        r = interp_member(App(m, nn), u.right, I)
        if r.verdict is Verdict.OUT:
            return OUT({"reason": "a probe argument escapes the target",
                        "probe": nn, "why": r.witness})
        if r.verdict is Verdict.UNKNOWN and not r.survived:
            survived = False
    return Membership(Verdict.UNKNOWN, {"probes": len(pool)}, survived and bool(pool))


def special_interp_member(m: Term, u: Type, bounds: Bounds = Bounds(6, 8)) -> Membership:
    """Membership in the special interpretation at a good type ``u``."""
    if config.evar_mode() != config.SINGLE:
        raise ModeError("the special interpretation needs a single E-variable")
    if not u.good:
        raise ValueError("the special interpretation is only characterised at good types")
    n = u.degree
    if not m.good or m.degree != n:
        return OUT({"reason": "not a good term of the type's degree"})
    if vset_member(m, n):
        return IN({"reason": "has an ordinary free variable of high enough degree"})
    env = forced_env(m, n)
    if env is None:
        return OUT({"reason": "free variables fall outside the reserved environments"})
    r = check_judgment(Judgment(m, env, System.S2, u), bounds)
    if r.verdict is Tri.YES:
        return IN({"reason": "typable in a reserved environment", "derivation": r.derivation})
    if r.verdict is Tri.NO:
        return OUT({"reason": "no derivation within bounds",
                    "type_size": bounds.type_size, "depth": bounds.depth})
    return Membership(Verdict.UNKNOWN, {"reason": "search budget exhausted"})


# ---------------------------------------------------------------------------
# meanings

class MeaningMode(enum.Enum):
    THEOREM = "theorem"
    SAMPLING = "sampling"


def sampled_member(m: Term, u: Type, family) -> Membership:
    """Intersect memberships over ``family``: any ``OUT`` is definitive."""
    survived = True
    for I in family:
        if I.kind == "special" and (config.evar_mode() != config.SINGLE or not u.good):
            continue
        r = interp_member(m, u, I)
        if r.verdict is Verdict.OUT:
            return OUT({"interpretation": I.name, "why": r.witness})
        if r.verdict is Verdict.UNKNOWN:
            survived = survived and r.survived
    return Membership(Verdict.UNKNOWN, {"interpretations": [I.name for I in family]}, survived)


def meaning_member(m: Term, u: Type, mode=MeaningMode.THEOREM, bounds: Bounds = Bounds(6, 8),
                   family=None) -> Membership:
    if m.fv:
        raise NotClosed("meanings only contain closed terms")
    mode = MeaningMode(mode)
    if family is None:
        family = load_family()
    if mode is MeaningMode.THEOREM:
        if config.evar_mode() != config.SINGLE:
            raise ModeError("the completeness characterisation needs a single E-variable")
        if not (u.good and in_U(u)):
            raise ValueError("the characterisation holds for good types of the U grammar")
        if not m.good or m.degree != u.degree:
            return OUT({"reason": "not a good term of the type's degree"})
        r = check_judgment(Judgment(m, TypeEnv(), System.S2, u), bounds)
        if r.verdict is Tri.YES:
            return IN({"derivation": r.derivation})
        if r.verdict is Tri.NO:
            s = sampled_member(m, u, family)
            w = {"reason": "no derivation within bounds",
                 "type_size": bounds.type_size, "depth": bounds.depth}
            if s.verdict is Verdict.OUT:
                w["excluded_by"] = s.witness
            return OUT(w)
        return Membership(Verdict.UNKNOWN, {"reason": "search budget exhausted"})
    return sampled_member(m, u, family)


# ---------------------------------------------------------------------------
# probes of the soundness and completeness statements

@dataclass
class SoundnessReport:
    samples: int = 0
    outs: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.outs


def soundness_probe(d, interp: FinInterp, max_samples: int = 50) -> SoundnessReport:
    """Substitute certified members for the free variables of a derived
    judgment and check the result never falls ``OUT`` of the derived type."""
    from .derivations import check_derivation
    from .terms import substitute
    j = check_derivation(d)
    rep = SoundnessReport()
    pools = []
    avoid = names(j.subject)
    for v, t in j.env.items:
        pool = [p for p in probes(t, interp, avoid) if p != v] + [v]
        pools.append([(v, p) for p in pool])
    for combo in itertools.islice(itertools.product(*pools), max_samples):
        try:
            inst = substitute(j.subject, list(combo)) if combo else j.subject
        except ValidationError:
            continue
        rep.samples += 1
        r = interp_member(inst, j.result, interp)
        if r.verdict is Verdict.OUT:
            rep.outs.append((inst, r))
    return rep


@dataclass
class CompletenessReport:
    type: Type
    terms: int = 0
    derivable: int = 0
    mismatches: list = field(default_factory=list)
    stability_failures: list = field(default_factory=list)
    unknown: int = 0

    @property
    def ok(self) -> bool:
        return not self.mismatches and not self.stability_failures and not self.unknown


def completeness_probe(u: Type, term_size: int, bounds: Bounds = Bounds(12, 8),
                       family=None, fuel: int = 4, max_degree=None) -> CompletenessReport:
    """Compare typability at ``<() |-2 u>`` with semantic membership on all
    closed good terms of the type's degree up to ``term_size``.

    With a single E-variable the semantic side is membership in the special
    interpretation together with sampled membership never being ``OUT``.
    With several E-variables only the sampled side is available, and the
    mismatches exhibit where the characterisation breaks down.
    """
    single = config.evar_mode() == config.SINGLE
    if family is None:
        family = load_family()
    sampled_family = [I for I in family if I.kind != "special"]
    n = u.degree
    rep = CompletenessReport(u)
    verdicts = {}
    terms = list(enumerate_good_terms(term_size, n, closed=True, max_degree=max_degree))
    for m in terms:
        rep.terms += 1
        r = check_judgment(Judgment(m, TypeEnv(), System.S2, u), bounds)
        if r.verdict is Tri.UNKNOWN:
            rep.unknown += 1
            continue
        typ = r.verdict is Tri.YES
        sampled = sampled_member(m, u, sampled_family)
        sem = sampled.verdict is not Verdict.OUT
        special = None
        if single:
            special = special_interp_member(m, u, bounds).verdict
            sem = sem and special is Verdict.IN
        rep.derivable += typ
        verdicts[alpha_key(m)] = typ
        if sem != typ:
            rep.mismatches.append((m, typ, special, sampled.verdict))
    for m in terms:
        red, _ = reduct_set(m, fuel)
        for k, t in red.items():
            if k in verdicts and alpha_key(m) in verdicts and verdicts[k] != verdicts[alpha_key(m)]:
                rep.stability_failures.append((m, t))
    return rep
