"""Shared fixtures.

Expensive sweeps (Dirichlet populations, twist populations, moment
reports) are session-scoped and carry their own wall-clock build time so
the acceptance tests can assert runtime caps no matter which test
triggered the build.
"""

import json
import time
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from ffmoments.analytics import second_moment
from ffmoments.dirichlet import l_coefficients
from ffmoments.elliptic import TwistEngine, build_curve, ec_l_polynomial, twist_l_polynomial
from ffmoments.ffpoly import enumerate_irreducible

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")

FIXDIR = Path(__file__).parent / "fixtures" / "v1"


def load_fixture(name: str) -> dict:
    return json.loads((FIXDIR / name).read_text())


# -- Dirichlet populations -------------------------------------------------


@pytest.fixture(scope="session")
def dirichlet_pops():
    """(q, deg) -> (list of LPolynomial over the full conductor population,
    build seconds)."""
    out = {}
    for q, degs in ((3, (1, 3, 5, 7)), (5, (3, 5))):
        for d in degs:
            t0 = time.perf_counter()
            pop = [l_coefficients(P) for P in enumerate_irreducible(q, d)]
            out[(q, d)] = (pop, time.perf_counter() - t0)
    return out


# -- Sample curves ----------------------------------------------------------

SAMPLE_DEFS = {
    "e1": (5, (1,), (0, 1)),
    "e6": (5, (0, 1), (1,)),
    "e4": (7, (1,), (0, 1)),
}


@pytest.fixture(scope="session")
def curves():
    """name -> (curve, engine); the untwisted L-polynomial is computed so
    every engine already carries its root number."""
    out = {}
    for name, (q, A, B) in SAMPLE_DEFS.items():
        E = build_curve(q, A, B)
        eng = TwistEngine(E)
        ec_l_polynomial(E, eng)
        out[name] = (E, eng)
    return out


def _build_population(E, engine, g):
    t0 = time.perf_counter()
    recs = [
        twist_l_polynomial(E, P, engine=engine)
        for P in enumerate_irreducible(E.q, 2 * g + 1)
        if not (E.delta % P).is_zero
    ]
    return recs, time.perf_counter() - t0


@pytest.fixture(scope="session")
def twist_pops(curves):
    """Lazy accessor (name, g) -> (list of TwistRecord, build seconds);
    twists by every conductor of degree 2g+1 coprime to the discriminant,
    computed once per key for the whole session."""
    cache = {}

    def get(name: str, g: int):
        if (name, g) not in cache:
            E, eng = curves[name]
            cache[(name, g)] = _build_population(E, eng, g)
        return cache[(name, g)]

    return get


# -- Second-moment reports ---------------------------------------------------


@pytest.fixture(scope="session")
def moment_reports_q3():
    return {g: second_moment(3, g) for g in (1, 2, 3, 4)}
