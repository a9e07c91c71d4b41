"""Bulk tables over F_q[t]: batched modular arithmetic, a smallest-prime
sieve on integer codes, and quadratic-character tables.

Everything here is plumbing behind the public modules.  Polynomials of
degree <= n are identified with their base-q codes (constant coefficient
least significant), coefficient blocks are numpy int16 matrices with one row
per polynomial and one column per coefficient, and codes are int64.  Values
stay below q after every normalization step, so int16 never overflows
(intermediate accumulations are bounded by ~(q-1)^2 * columns < 3e3).

The sieve stores, for every monic code, its smallest monic irreducible
factor (smallest in (degree, code) order) and the complementary cofactor;
that ordering is what makes the multiplicative-table fill's prime-power
chain detection (spf(f) = p and spf(f/p) = p iff p^2 | f) sound.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Callable

import numpy as np

from .ffpoly import InvariantError, Poly


@lru_cache(maxsize=None)
def code_powers(q: int, ncols: int) -> np.ndarray:
    return (q ** np.arange(ncols, dtype=np.int64)).astype(np.int64)


@lru_cache(maxsize=None)
def residue_matrix(q: int, d: int) -> np.ndarray:
    """All q^d coefficient vectors of length d (codes 0 .. q^d-1), int16."""
    if d == 0:
        return np.zeros((1, 0), dtype=np.int16)
    codes = np.arange(q**d, dtype=np.int64)
    out = np.empty((q**d, d), dtype=np.int16)
    for j in range(d):
        out[:, j] = (codes // q**j) % q
    return out


@lru_cache(maxsize=None)
def monic_matrix(q: int, n: int) -> np.ndarray:
    """All monic degree-n coefficient vectors, ascending code, (q^n, n+1)."""
    low = residue_matrix(q, n)
    out = np.ones((q**n, n + 1), dtype=np.int16)
    out[:, :n] = low
    return out


def mat_codes(M: np.ndarray, q: int) -> np.ndarray:
    if M.shape[1] == 0:
        return np.zeros(M.shape[0], dtype=np.int64)
    return M.astype(np.int64) @ code_powers(q, M.shape[1])


def reduce_mod(M: np.ndarray, Pv: np.ndarray, q: int) -> np.ndarray:
    """Batched synthetic division: rows of M reduced mod the monic Pv.
    Returns an (rows, deg P) residue coefficient block."""
    dP = len(Pv) - 1
    R = M.astype(np.int16, copy=True)
    low = Pv[:dP].astype(np.int16)
    for k in range(R.shape[1] - 1, dP - 1, -1):
        c = R[:, k].copy()
        nz = c.any()
        if not nz:
            continue
        R[:, k - dP : k] = (R[:, k - dP : k] - c[:, None] * low[None, :]) % q
    if R.shape[1] < dP:
        pad = np.zeros((R.shape[0], dP - R.shape[1]), dtype=np.int16)
        return np.concatenate([R, pad], axis=1)
    return R[:, :dP]


def mul_full(F: np.ndarray, G: np.ndarray, q: int) -> np.ndarray:
    """Row-wise product of equal-height coefficient blocks, reduced mod q
    coefficientwise only (no polynomial reduction)."""
    rows, a = F.shape
    b = G.shape[1]
    out = np.zeros((rows, a + b - 1), dtype=np.int16)
    for j in range(a):
        out[:, j : j + b] += F[:, j : j + 1] * G
        out %= q
    return out


def square_mod(M: np.ndarray, Pv: np.ndarray, q: int) -> np.ndarray:
    return reduce_mod(mul_full(M, M, q), Pv, q)


def poly_vec(P: Poly) -> np.ndarray:
    return np.array(P.coeffs, dtype=np.int16)


@lru_cache(maxsize=512)
def chi_table(q: int, P_code: int) -> np.ndarray:
    """int8 table over residue codes mod P: +1 on nonzero squares, -1 on
    non-squares, 0 at 0.  One batched squaring pass over all residues."""
    P = Poly.from_code(P_code, q)
    d = P.deg
    Pv = poly_vec(P)
    R = residue_matrix(q, d)
    sq_codes = mat_codes(reduce_mod(mul_full(R, R, q), Pv, q), q)
    table = np.full(q**d, -1, dtype=np.int8)
    table[sq_codes] = 1
    table[0] = 0
    if int(table.sum()) != 0:
        raise InvariantError(f"character table unbalanced mod {P}")
    return table


class SpfSieve:
    """Smallest-prime-factor sieve over monic codes of degree <= max_deg."""

    def __init__(self, q: int, max_deg: int):
        self.q = q
        self.max_deg = max_deg
        size = 2 * q**max_deg
        self.prime_of = np.zeros(size, dtype=np.int64)
        self.cof_of = np.zeros(size, dtype=np.int64)
        self.prime_of[1] = 0  # unit: no prime factor
        self.cof_of[1] = 1
        self._primes_by_deg: dict[int, np.ndarray] = {}
        for d in range(1, max_deg + 1):
            lo, hi = q**d, 2 * q**d
            pcodes = np.arange(lo, hi, dtype=np.int64)[self.prime_of[lo:hi] == 0]
            # composites of degree d all have a factor of degree < d, so the
            # unmarked monics of degree d are exactly the irreducibles
            self._primes_by_deg[d] = pcodes
            self.prime_of[pcodes] = pcodes
            self.cof_of[pcodes] = 1
            pmat = np.empty((len(pcodes), d + 1), dtype=np.int16)
            for j in range(d + 1):
                pmat[:, j] = (pcodes // q**j) % q
            for m in range(1, max_deg - d + 1):
                mm = monic_matrix(q, m)
                mcodes = mat_codes(mm, q)
                # bound the transient product array to ~8M int16 cells
                step = max(1, 8_000_000 // (q**m * (d + m + 1)))
                for s in range(0, len(pcodes), step):
                    pc = pcodes[s : s + step]
                    prod = np.zeros((len(pc), q**m, d + m + 1), dtype=np.int16)
                    for j in range(d + 1):
                        prod[:, :, j : j + m + 1] += pmat[s : s + step, j, None, None] * mm[None, :, :]
                        prod %= q
                    codes = prod.astype(np.int64).reshape(len(pc) * q**m, d + m + 1) @ code_powers(q, d + m + 1)
                    primes_rep = np.repeat(pc, q**m)
                    cof_rep = np.tile(mcodes, len(pc))
                    if m >= d:
                        # a product can repeat inside a batch once the cofactor
                        # is big enough to hold another degree-d prime; with
                        # duplicate fancy indices numpy keeps the last write, so
                        # descending prime order makes the smallest prime win
                        codes = codes[::-1]
                        primes_rep = primes_rep[::-1]
                        cof_rep = cof_rep[::-1]
                    fresh = self.prime_of[codes] == 0
                    self.prime_of[codes[fresh]] = primes_rep[fresh]
                    self.cof_of[codes[fresh]] = cof_rep[fresh]

    def irreducible_codes(self, d: int) -> np.ndarray:
        if not 1 <= d <= self.max_deg:
            raise ValueError(f"degree {d} outside sieve range")
        return self._primes_by_deg[d]

    def factor_code(self, code: int) -> list[tuple[int, int]]:
        """(prime_code, exponent) pairs, ascending prime code."""
        out: dict[int, int] = {}
        while code != 1:
            p = int(self.prime_of[code])
            if p == 0:
                raise ValueError(f"code {code} not monic or outside sieve")
            out[p] = out.get(p, 0) + 1
            code = int(self.cof_of[code])
        return sorted(out.items())

    def multiplicative_table(
        self, prime_power: Callable[[int, int], int], up_to: int | None = None
    ) -> np.ndarray:
        """int64 table over monic codes: the multiplicative function with the
        given prime-power values.  Entries at non-monic codes are 0.  up_to
        caps the covered degree below the sieve's own range, so a caller
        whose prime_power data stops early never gets asked past it."""
        q = self.q
        top = self.max_deg if up_to is None else min(up_to, self.max_deg)
        val = np.zeros(2 * q**top, dtype=np.int64)
        val[1] = 1
        exp_of = np.zeros_like(val, dtype=np.int32)
        core_of = np.zeros_like(val)
        core_of[1] = 1
        pp_cache: dict[tuple[int, int], int] = {}
        prime_of = self.prime_of
        cof_of = self.cof_of
        for d in range(1, top + 1):
            for code in range(q**d, 2 * q**d):
                p = int(prime_of[code])
                h = int(cof_of[code])
                if int(prime_of[h]) == p:
                    e = int(exp_of[h]) + 1
                    core = int(core_of[h])
                else:
                    e = 1
                    core = h
                exp_of[code] = e
                core_of[code] = core
                key = (p, e)
                pv = pp_cache.get(key)
                if pv is None:
                    pv = prime_power(p, e)
                    pp_cache[key] = pv
                val[code] = pv * val[core]
        return val


_sieves: dict[tuple[int, int], SpfSieve] = {}


def get_sieve(q: int, max_deg: int) -> SpfSieve:
    """Smallest cached sieve covering max_deg (sieves are monotone in cost,
    so reuse any larger one)."""
    for (qq, md), s in _sieves.items():
        if qq == q and md >= max_deg:
            return s
    s = SpfSieve(q, max_deg)
    _sieves[(q, max_deg)] = s
    return s


_MULT_RULES = {
    "tau": lambda p, e: e + 1,
    "tau_square": lambda p, e: 2 * e + 1,
}
_mult_tables: dict[tuple[int, int, str], np.ndarray] = {}


def cached_mult_table(q: int, max_deg: int, kind: str) -> np.ndarray:
    """Shared divisor-count tables; rebuilding one per conductor would
    dominate the sweeps.  Keyed by the backing sieve's actual range so a
    larger sieve serves smaller requests with one table."""
    s = get_sieve(q, max_deg)
    key = (q, s.max_deg, kind)
    tab = _mult_tables.get(key)
    if tab is None:
        tab = s.multiplicative_table(_MULT_RULES[kind])
        _mult_tables[key] = tab
    return tab


def point_count(q: int, Q_code: int, A: Poly, B: Poly) -> int:
    """Naive affine count of y^2 = x^3 + A x + B over the residue field mod Q,
    folded into the trace a_Q = |Q| + 1 - #points(projective); a singular
    point contributes once, which lands multiplicative traces in {-1, 0, 1}
    and additive traces at 0 without case analysis."""
    Q = Poly.from_code(Q_code, q)
    d = Q.deg
    Qv = poly_vec(Q)
    R = residue_matrix(q, d)
    x2 = reduce_mod(mul_full(R, R, q), Qv, q)
    is_sq = np.zeros(q**d, dtype=bool)
    is_sq[mat_codes(x2, q)] = True
    x3 = reduce_mod(mul_full(x2, R, q), Qv, q)
    Ar = poly_vec(A % Q)
    Br = poly_vec(B % Q)
    rhs = x3
    if len(Ar):
        ax = mul_full(R, Ar[None, :].repeat(len(R), 0), q)
        rhs = rhs + reduce_mod(ax, Qv, q)
    if len(Br):
        rhs[:, : len(Br)] += Br[None, :]
    rhs %= q
    rcodes = mat_codes(rhs, q)
    nz = rcodes != 0
    hits = int(np.count_nonzero(is_sq[rcodes] & nz))
    chi_sum = 2 * hits - int(np.count_nonzero(nz))
    return -chi_sum
