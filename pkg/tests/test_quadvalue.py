"""Exact arithmetic in Z[sqrt q] with q-power denominators."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from ffmoments.quadvalue import ExactAverage, QuadValue, quad_sum

small = st.integers(min_value=-40, max_value=40)
exps = st.integers(min_value=0, max_value=4)
qs = st.sampled_from([3, 5])


def qv(q):
    return st.builds(lambda a, b, e: QuadValue.make(a, b, e, q), small, small, exps)


@given(qs.flatmap(lambda q: st.tuples(st.just(q), qv(q), qv(q), qv(q))))
def test_ring_laws(args):
    q, x, y, z = args
    assert (x + y) + z == x + (y + z)
    assert x + y == y + x
    assert x * (y + z) == x * y + x * z
    assert x * y == y * x
    assert x - x == QuadValue.from_int(0, q)


@given(qs.flatmap(lambda q: st.tuples(st.just(q), small, small, exps, st.integers(min_value=0, max_value=3))))
def test_denominator_canonicalization(args):
    q, a, b, e, k = args
    # same value written with an inflated denominator must compare equal
    x = QuadValue.make(a, b, e, q)
    y = QuadValue.make(a * q**k, b * q**k, e + k, q)
    assert x == y
    assert x.as_triple() == y.as_triple()


def test_sqrt_q_powers():
    for q in (3, 5):
        r = QuadValue.sqrt_q_power(1, q)
        assert r * r == QuadValue.from_int(q, q)
        assert QuadValue.sqrt_q_power(3, q) == r * r * r
        assert QuadValue.sqrt_q_power(-2, q) == QuadValue.from_fraction(Fraction(1, q), q)


def test_rational_detection():
    q = 5
    x = QuadValue.make(7, 0, 2, q)
    assert x.is_rational and x.rational() == Fraction(7, 25)
    y = QuadValue.make(0, 3, 1, q)
    assert not y.is_rational
    with pytest.raises(ValueError):
        y.rational()


def test_float_and_sign():
    q = 3
    x = QuadValue.make(2, -1, 1, q)  # (2 - sqrt3)/3 > 0
    assert abs(x.to_float() - (2 - 3**0.5) / 3) < 1e-15
    assert x.sign() == 1
    assert QuadValue.make(-2, 1, 0, q).sign() == -1  # sqrt3 - 2 < 0
    assert QuadValue.from_int(0, q).sign() == 0


@given(qs.flatmap(lambda q: st.tuples(st.just(q), st.lists(qv(q), min_size=0, max_size=6))))
def test_quad_sum_matches_fold(args):
    q, vals = args
    acc = QuadValue.from_int(0, q)
    for v in vals:
        acc = acc + v
    assert quad_sum(vals, q) == acc


def test_exact_average():
    q = 3
    tot = QuadValue.make(40, 0, 0, q)
    avg = ExactAverage(tot, 8)
    assert avg.to_float() == 5.0
