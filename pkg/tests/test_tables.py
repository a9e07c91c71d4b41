"""Vectorized batch tables against their scalar definitions."""

import numpy as np

from ffmoments.ffpoly import Poly, enumerate_irreducible, factor, tau
from ffmoments.residue import jacobi_symbol
from ffmoments.tables import (
    SpfSieve,
    cached_mult_table,
    chi_table,
    get_sieve,
    mat_codes,
    monic_matrix,
    poly_vec,
    reduce_mod,
)


def test_sieve_factorization_matches_trial_division():
    for q, nmax in ((3, 5), (5, 3)):
        s = SpfSieve(q, nmax)
        for code in range(q, q ** (nmax + 1)):
            f = Poly.from_code(code, q)
            if not f.is_monic or f.deg < 1:
                continue
            assert s.factor_code(code) == [(p.code(), e) for p, e in factor(f)]


def test_sieve_smallest_prime_property():
    q, nmax = 3, 6
    s = get_sieve(q, nmax)
    for code in range(q, q ** (nmax + 1)):
        f = Poly.from_code(code, q)
        if not f.is_monic or f.deg < 1:
            continue
        expected = min(p.code() for p, _ in factor(f))
        assert int(s.prime_of[code]) == expected


def test_sieve_irreducible_codes():
    for q, nmax in ((3, 6), (7, 3)):
        s = get_sieve(q, nmax)
        for n in range(1, nmax + 1):
            assert s.irreducible_codes(n).tolist() == [
                P.code() for P in enumerate_irreducible(q, n)
            ]


def test_chi_table_pointwise_and_balance():
    for q, pcode_deg in ((3, 3), (5, 3)):
        P = next(enumerate_irreducible(q, pcode_deg))
        arr = chi_table(q, P.code())
        assert len(arr) == q**P.deg
        for code in range(min(len(arr), 200)):
            assert int(arr[code]) == jacobi_symbol(Poly.from_code(code, q), P)
        # nontrivial character sums to zero over a full residue system
        assert int(arr.sum()) == 0


def test_reduce_mod_matches_scalar_mod():
    q = 5
    P = Poly.make([1, 1, 0, 1], q)
    mm = monic_matrix(q, 4)
    codes = mat_codes(reduce_mod(mm, poly_vec(P), q), q)
    for i, f in enumerate(range(q**4, 2 * q**4)):
        assert int(codes[i]) == (Poly.from_code(f, q) % P).code()


def test_mult_table_tau_and_cache_identity():
    q, nmax = 3, 5
    tab = cached_mult_table(q, nmax, "tau")
    for code in range(q, q ** (nmax + 1)):
        f = Poly.from_code(code, q)
        if not f.is_monic:
            continue
        assert int(tab[code]) == tau(f)
    assert cached_mult_table(q, nmax, "tau") is tab

    tab2 = cached_mult_table(q, 4, "tau_square")
    for code in range(q, q**5):
        f = Poly.from_code(code, q)
        if not f.is_monic:
            continue
        expected = 1
        for _, e in factor(f):
            expected *= 2 * e + 1
        assert int(tab2[code]) == expected


def test_get_sieve_reuses_larger_range():
    s8 = get_sieve(3, 6)
    s5 = get_sieve(3, 5)
    assert s5 is s8
    assert s5.max_deg >= 6


def test_sieve_census_by_degree():
    q = 5
    s = get_sieve(q, 3)
    totals = [len(s.irreducible_codes(n)) for n in (1, 2, 3)]
    assert totals == [5, 10, 40]
    # int16 coefficient layout survives the batching
    assert s.prime_of.dtype == np.int64
