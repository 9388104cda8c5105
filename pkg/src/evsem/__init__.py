"""Degree-indexed λI-terms, intersection typing with expansion variables,
and a finitely approximated realisability semantics."""

__version__ = "0.1.0"

from .config import MULTI, SINGLE, evar_mode, set_evar_mode, using_evars
from .derivations import Derivation, Judgment, Rule, System, check_derivation
from .errors import (BlockedRedex, DegreeMismatch, DegreeUnderflow, EvsemError,
                     GrammarViolation, InvalidSite, ModeError, NotClosed, NotJoinable,
                     NotLambdaI, ParseError, RuleMismatch, ValidationError)
from .itypes import (Arrow, Atom, Exp, Inter, Type, TypeEnv, arrow, atom, canonicalize,
                     enumerate_types, exp, inter, type_lower)
from .reduction import Strategy, Tri, beta_eq, normal_form, reduce, reduces_to, redexes
from .search import Bounds, check_judgment, search_typing
from .subtyping import check_subtype_algorithmic, check_subtype_declarative, sub
from .syntax import (parse_derivation, parse_env, parse_judgment, parse_subtype_goal,
                     parse_term, parse_type, print_env, print_judgment, print_term,
                     print_type)
from .terms import App, Lam, Term, Var, alpha_eq, enumerate_good_terms, lift, lower, substitute

__all__ = [
    "SINGLE", "MULTI", "evar_mode", "set_evar_mode", "using_evars",
    "Derivation", "Judgment", "Rule", "System", "check_derivation",
    "BlockedRedex", "DegreeMismatch", "DegreeUnderflow", "EvsemError", "GrammarViolation",
    "InvalidSite", "ModeError", "NotClosed", "NotJoinable", "NotLambdaI", "ParseError",
    "RuleMismatch", "ValidationError",
    "Arrow", "Atom", "Exp", "Inter", "Type", "TypeEnv", "arrow", "atom", "canonicalize",
    "enumerate_types", "exp", "inter", "type_lower",
    "Strategy", "Tri", "beta_eq", "normal_form", "reduce", "reduces_to", "redexes",
    "Bounds", "check_judgment", "search_typing",
    "check_subtype_algorithmic", "check_subtype_declarative", "sub",
    "parse_derivation", "parse_env", "parse_judgment", "parse_subtype_goal", "parse_term",
    "parse_type", "print_env", "print_judgment", "print_term", "print_type",
    "App", "Lam", "Term", "Var", "alpha_eq", "enumerate_good_terms", "lift", "lower",
    "substitute",
]
