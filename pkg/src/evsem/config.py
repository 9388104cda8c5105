"""Global E-variable mode.

In ``single`` mode the only expansion variable is ``e``; ``multi`` mode
admits ``e1``, ``e2``, ... and exists to replay the counterexamples that need
two distinct E-variables.  The default can be
overridden with the ``EVSEM_EVARS`` environment variable.
"""
import contextlib
import contextvars
import os
import re

SINGLE = "single"
MULTI = "multi"

E_C = "e"

EVAR_RE = re.compile(r"e[0-9]*\Z")

_mode = contextvars.ContextVar("evsem_evar_mode", default=None)


def evar_mode():
    mode = _mode.get()
    if mode is None:
        mode = os.environ.get("EVSEM_EVARS", SINGLE).strip().lower() or SINGLE
    if mode not in (SINGLE, MULTI):
        raise ValueError(f"unknown E-variable mode {mode!r}")
    return mode


def set_evar_mode(mode):
    if mode not in (SINGLE, MULTI):
        raise ValueError(f"unknown E-variable mode {mode!r}")
    return _mode.set(mode)


@contextlib.contextmanager
def using_evars(mode):
    token = set_evar_mode(mode)
    try:
        yield
    finally:
        _mode.reset(token)


def is_evar_name(name):
    return bool(EVAR_RE.match(name))


def default_evar():
    return E_C if evar_mode() == SINGLE else "e1"
