import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from evsem import config
from evsem.errors import ValidationError
from evsem.itypes import arrow, atom, exp, inter
from evsem.terms import App, Lam, Var

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(autouse=True)
def _single_mode():
    with config.using_evars(config.SINGLE):
        yield


NAMES = ("x", "y", "z")


def _app(pair):
    try:
        return App(*pair)
    except ValidationError:
        return pair[0]


def _lam(data):
    body, name, deg = data
    v = Var(name, deg)
    if v in body.fv:
        return Lam(v, body)
    return body


variables = st.builds(Var, st.sampled_from(NAMES), st.integers(0, 2))
terms = st.recursive(
    variables,
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(_app),
        st.tuples(inner, st.sampled_from(NAMES), st.integers(0, 2)).map(_lam),
    ),
    max_leaves=8,
)
good_terms = terms.filter(lambda m: m.good)

types = st.recursive(
    st.sampled_from(["a", "b"]).map(atom),
    lambda inner: st.one_of(
        st.tuples(inner, inner).map(lambda p: arrow(*p)),
        st.tuples(inner, inner).map(lambda p: inter(*p)),
        inner.map(lambda t: exp("e", t)),
    ),
    max_leaves=5,
)
