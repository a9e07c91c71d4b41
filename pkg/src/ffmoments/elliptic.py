"""Elliptic surfaces y^2 = x^3 + A(t)x + B(t) over F_q(t), their
L-polynomials, and quadratic twists by odd-degree prime conductors.

Traces come from uniform naive point counts over residue fields: a singular
point contributes once, which lands multiplicative traces in {+1, -1} and
additive traces at 0 with no case analysis, and Hasse's bound is asserted at
good primes.  The normalized prime-power values follow the usual rules
(Chebyshev recursion at good primes, a_Q^j at split/nonsplit multiplicative
ones, 0 at additive ones) and extend multiplicatively; the degree bound and
every exact functional equation downstream double-check those conventions.

The finite-prime Dirichlet series of the curve is a polynomial of degree

    n_conductor = deg M + 2 * sum deg(additive primes) - 2,

with M the radical of the multiplicative part of the discriminant.  (The
infinite place's local factor and its conductor contribution cancel to the
uniform -2 across all reduction types at infinity: good, multiplicative and
additive fibers there leave behind a degree-2, degree-1 and degree-0
polynomial factor respectively, exactly offsetting the conductor exponents
0, 1, 2.)  The series is the L-polynomial times that leftover factor at
infinity, so the L-polynomial itself has degree n_conductor minus the
factor's degree; the factor is computed once per curve from the valuations
of (A, B, Delta) in the 1/t coordinate and divided out exactly.  The same
applies to twists: the twisted series always has degree
n_conductor + 2 deg P, but a ramified quadratic twist (odd deg P) can move
the fiber at infinity between reduction types, so the twisted L-degree is
n_conductor + 2 deg P minus the degree of the twisted model's leftover
factor, which depends only on the curve because only the parity of deg P
enters.  Both factors are verified downstream: the degree self-check, the
exact functional equation, the coefficient bound and the root-circle check
all fail loudly on a wrong factor.

Twisted coefficients are summed directly only up to half the degree plus a
little slack; the sign is extracted from the first nonvanishing
coefficient pair, every directly-computed pair is then checked against the
exact integer functional equation B_{D-n} = eps q^{D-2n} B_n, and only the
untouched upper half is completed by reflection.  An exact binomial
coefficient bound and a numeric all-roots-on-the-critical-circle check run
on every constructed twist.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb

import numpy as np

from .dirichlet import chi_values_for_degree
from .ffpoly import FieldSpec, InvariantError, Poly, factor, is_irreducible
from .quadvalue import QuadValue
from .residue import jacobi_symbol
from .tables import get_sieve, mat_codes, mul_full, point_count, poly_vec, reduce_mod, residue_matrix


@dataclass(frozen=True)
class EllipticCurve:
    A: Poly
    B: Poly
    delta: Poly  # monic normalization of 4A^3 + 27B^2
    mult_primes: tuple[tuple[Poly, int], ...]  # (prime, trace sign)
    add_primes: tuple[Poly, ...]
    M: Poly  # product of the multiplicative primes, each once
    n_conductor: int
    inf_type: str  # reduction at infinity of the curve itself
    inf_factor: tuple[int, ...]  # series / L-polynomial quotient at infinity
    twist_inf_type: str  # reduction at infinity after any odd-degree twist
    twist_inf_factor: tuple[int, ...]

    @property
    def q(self) -> int:
        return self.A.q

    def reduction_type(self, Q: Poly) -> str:
        if not (Q.is_monic and is_irreducible(Q)):
            raise ValueError("reduction type needs a monic irreducible prime")
        if not (self.delta % Q).is_zero:
            return "good"
        return "additive" if (self.A % Q).is_zero else "multiplicative"


def _legendre_int(x: int, q: int) -> int:
    x %= q
    if x == 0:
        return 0
    return 1 if pow(x, (q - 1) // 2, q) == 1 else -1


def _inf_local_factor(q: int, A: Poly, B: Poly, delta: Poly, twisted: bool) -> tuple[str, tuple[int, ...]]:
    """Reduction type at the place 1/t and the polynomial factor by which
    the finite-prime series exceeds the L-polynomial there: (1, -a, q) for
    a good fiber with trace a, (1, -a) with a = +-1 for a node, (1,) for an
    additive fiber.

    The minimal model at infinity is found by valuation arithmetic alone:
    with m = max(ceil(deg A / 4), ceil(deg B / 6)), the 1/t-valuations of
    the rescaled (A, B, Delta) are (4m - deg A, 6m - deg B, 12m - deg Delta),
    reduced by (4, 6, 12) while all three stay at least that large (q >= 5,
    so short Weierstrass rescalings are the only moves needed).  Twisting by
    a monic P of odd degree shifts the triple by (2, 3, 6) before reduction,
    independent of which P; the residues of the minimal coefficients are the
    leading coefficients of A and B or zero, so the reduced fiber and its
    trace depend only on the curve."""
    da, db = A.deg, B.deg
    m = max(-(-da // 4), -(-db // 6))
    va, vb, vd = 4 * m - da, 6 * m - db, 12 * m - delta.deg
    if twisted:
        va, vb, vd = va + 2, vb + 3, vd + 6
    while va >= 4 and vb >= 6 and vd >= 12:
        va, vb, vd = va - 4, vb - 6, vd - 12
    a_red = A.coeffs[-1] % q if va == 0 else 0
    b_red = B.coeffs[-1] % q if vb == 0 else 0
    disc_red = (4 * a_red**3 + 27 * b_red**2) % q
    if (vd == 0) != (disc_red != 0):
        raise InvariantError("valuations at infinity inconsistent with the reduced fiber")
    if vd == 0:
        a_inf = -sum(_legendre_int(x**3 + a_red * x + b_red, q) for x in range(q))
        if a_inf * a_inf > 4 * q:
            raise InvariantError(f"fiber at infinity breaks the Hasse bound: {a_inf}")
        return "good", (1, -a_inf, q)
    if va == 0:
        # node at x0 = -3b/(2a); its tangents split iff 3*x0 is a square
        x0 = -3 * b_red * pow(2 * a_red, q - 2, q) % q
        return "multiplicative", (1, -_legendre_int(3 * x0, q))
    return "additive", (1,)


def build_curve(q: int, A, B) -> EllipticCurve:
    """Classify reduction at every prime of the discriminant and assemble
    the conductor bookkeeping.  A and B are coefficient lists or Poly."""
    FieldSpec(q).require_elliptic()
    A = A if isinstance(A, Poly) else Poly.make(A, q)
    B = B if isinstance(B, Poly) else Poly.make(B, q)
    four_a3 = (A * A * A).scale(4)
    delta_raw = four_a3 + (B * B).scale(27)
    if delta_raw.is_zero:
        raise ValueError("discriminant vanishes; the curve is singular")
    if A.is_zero or B.is_zero or four_a3.monic() == delta_raw.monic():
        raise ValueError("isotrivial model (constant j-invariant)")
    delta = delta_raw.monic()
    mult: list[tuple[Poly, int]] = []
    add: list[Poly] = []
    M = Poly.one(q)
    for Q, _e in factor(delta):
        if (A % Q).is_zero:
            if point_count(q, Q.code(), A, B) != 0:
                raise InvariantError(f"additive prime {Q} has nonzero trace")
            add.append(Q)
        else:
            a = point_count(q, Q.code(), A, B)
            if a not in (1, -1):
                raise InvariantError(f"multiplicative prime {Q} has trace {a}, expected a sign")
            mult.append((Q, a))
            M = M * Q
    if M.is_one and not add:
        raise InvariantError("non-isotrivial curve with unramified finite part")
    n_cond = M.deg + 2 * sum(Q.deg for Q in add) - 2
    if n_cond < 0:
        raise InvariantError(f"conductor degree {n_cond} negative; reduction data inconsistent")
    inf_type, inf_factor = _inf_local_factor(q, A, B, delta, twisted=False)
    tw_type, tw_factor = _inf_local_factor(q, A, B, delta, twisted=True)
    return EllipticCurve(
        A=A,
        B=B,
        delta=delta,
        mult_primes=tuple(mult),
        add_primes=tuple(add),
        M=M,
        n_conductor=n_cond,
        inf_type=inf_type,
        inf_factor=inf_factor,
        twist_inf_type=tw_type,
        twist_inf_factor=tw_factor,
    )


def _trace_to_quad(a: int, d: int, q: int) -> QuadValue:
    """a / q^{d/2} as an exact value."""
    return QuadValue.sqrt_q_power(-d, q).scale_int(a)


def lambda_Q(E: EllipticCurve, Q: Poly) -> QuadValue:
    """Normalized trace a_Q / sqrt(|Q|)."""
    if not (Q.is_monic and is_irreducible(Q)):
        raise ValueError("prime expected")
    a = point_count(E.q, Q.code(), E.A, E.B)
    kind = E.reduction_type(Q)
    if kind == "good" and a * a > 4 * E.q**Q.deg:
        raise InvariantError(f"trace {a} breaks the Hasse bound at {Q}")
    return _trace_to_quad(a, Q.deg, E.q)


def atilde_prime_power(E: EllipticCurve, Q: Poly, j: int, a: int | None = None) -> int:
    """Unnormalized multiplicative coefficient at Q^j."""
    if j < 0:
        raise ValueError("exponent must be >= 0")
    if j == 0:
        return 1
    kind = E.reduction_type(Q)
    if a is None:
        a = point_count(E.q, Q.code(), E.A, E.B)
    if kind == "additive":
        return 0
    if kind == "multiplicative":
        return a**j
    norm = E.q**Q.deg
    prev, cur = 1, a
    for _ in range(j - 1):
        prev, cur = cur, a * cur - norm * prev
    return cur


def lambda_f(E: EllipticCurve, f: Poly) -> QuadValue:
    """Normalized coefficient at monic f, multiplicatively from the prime
    powers; API-scale route via trial-division factorization."""
    if not f.is_monic:
        raise ValueError("monic f expected")
    val = 1
    for Q, e in factor(f):
        val *= atilde_prime_power(E, Q, e)
    return _trace_to_quad(val, f.deg, E.q)


_BULK_MIN = 3000  # naive per-prime counting is cheap below this field size


def _bulk_traces_shifted(E: EllipticCurve, d: int, sieve) -> dict[int, int] | None:
    """All degree-d traces at once, for curves whose fiber over a root tau
    of the prime is x^3 + alpha x + (beta0 + beta1 tau) with scalar alpha,
    beta0, beta1 (constant A, linear B).  The trace is then a pure
    additive-group correlation inside one fixed copy of F_{q^d}: histogram
    the values x^3 + alpha x + beta0 over the whole field, correlate against
    the quadratic character table with an FFT over (Z/q)^d, and read a
    single value per Frobenius orbit.  Orbits are matched to prime codes by
    multiplying out their conjugate linear factors into minimal polynomials.

    Per degree this costs a few vectorized passes over q^d elements instead
    of one pass per prime, which is what makes half-degree tables at q = 7
    affordable.  Returns None when the curve shape does not qualify."""
    q = E.q
    if E.A.deg > 0 or E.B.deg != 1:
        return None
    alpha = E.A.coeffs[0] if E.A.coeffs else 0
    beta0, beta1 = E.B.coeffs[0], E.B.coeffs[1]
    N = q**d
    modulus = Poly.from_code(int(sieve.irreducible_codes(d)[0]), q)
    mv = poly_vec(modulus)
    R = residue_matrix(q, d)
    x2 = reduce_mod(mul_full(R, R, q), mv, q)
    x3 = reduce_mod(mul_full(x2, R, q), mv, q)
    w = (x3 + alpha * R) % q
    w[:, 0] = (w[:, 0] + beta0) % q
    h = np.bincount(mat_codes(w, q), minlength=N)
    chi = np.full(N, -1, dtype=np.int64)
    chi[mat_codes(x2, q)] = 1
    chi[0] = 0
    shape = (q,) * d
    corr = np.fft.ifftn(np.fft.fftn(h.reshape(shape)).conj() * np.fft.fftn(chi.reshape(shape)))
    T = np.rint(corr.real).astype(np.int64).reshape(-1)
    # Frobenius x -> x^q as a code permutation (F_q-linear in coefficients)
    frows = np.zeros((d, d), dtype=np.int64)
    for j in range(d):
        img = Poly.make([0] * (q * j) + [1], q) % modulus
        frows[j, : len(img.coeffs)] = img.coeffs
    perm = mat_codes((R.astype(np.int64) @ frows) % q, q)
    pows = [np.arange(N, dtype=np.int64)]
    for _ in range(d):
        pows.append(perm[pows[-1]])
    full_deg = np.ones(N, dtype=bool)
    dd, p = d, 2
    while dd > 1:
        if dd % p == 0:
            full_deg &= pows[d // p] != pows[0]
            while dd % p == 0:
                dd //= p
        p += 1
    best = pows[0].copy()
    for i in range(1, d):
        best = np.minimum(best, pows[i])
    reps = np.nonzero(full_deg & (best == pows[0]))[0]
    conj = np.empty((len(reps), d), dtype=np.int64)
    conj[:, 0] = reps
    for i in range(1, d):
        conj[:, i] = perm[conj[:, i - 1]]
    C = np.zeros((len(reps), 1, d), dtype=np.int16)
    C[:, 0, 0] = 1
    for i in range(d):
        tau = R[conj[:, i]]
        k = C.shape[1]
        flat = C.reshape(len(reps) * k, d)
        prod = reduce_mod(mul_full(flat, np.repeat(tau, k, axis=0), q), mv, q)
        prod = prod.reshape(len(reps), k, d)
        grown = np.zeros((len(reps), k + 1, d), dtype=np.int16)
        grown[:, 1:, :] = C
        grown[:, :k, :] = (grown[:, :k, :] - prod) % q
        C = grown
    if C[:, :, 1:].any():
        raise InvariantError("minimal polynomial coefficients left the base field")
    pcodes = mat_codes(C[:, :, 0], q)
    sigma = mat_codes((R[reps] * beta1) % q, q)
    return {int(c): -int(T[s]) for c, s in zip(pcodes, sigma)}


class TwistEngine:
    """Per-curve bulk tables: traces at all primes up to a degree, the
    multiplicative coefficient table over monic codes, and the direct
    series sums that feed twists.  extend() grows the tables in place."""

    def __init__(self, E: EllipticCurve, max_f_deg: int = 0):
        self.E = E
        self.q = E.q
        self.traces: dict[int, int] = {}
        self._add_codes = {Q.code() for Q in E.add_primes}
        self._mult_signs = {Q.code(): s for Q, s in E.mult_primes}
        self._deg_of: dict[int, int] = {}
        self.max_deg = 0
        self.atilde: np.ndarray | None = None
        self.eps_E: int | None = None
        self.l_coeffs_int: tuple[int, ...] | None = None
        if max_f_deg:
            self.extend(max_f_deg)

    def extend(self, max_f_deg: int) -> None:
        if max_f_deg <= self.max_deg:
            return
        q = self.q
        sieve = get_sieve(q, max_f_deg)
        for d in range(1, max_f_deg + 1):
            codes = sieve.irreducible_codes(d)
            bulk = None
            if q**d >= _BULK_MIN and int(codes[0]) not in self.traces:
                bulk = _bulk_traces_shifted(self.E, d, sieve)
                if bulk is not None and len(bulk) != len(codes):
                    raise InvariantError(f"bulk trace table covers {len(bulk)} of {len(codes)} primes")
            for c in map(int, codes):
                if c in self.traces:
                    continue
                a = bulk[c] if bulk is not None else point_count(q, c, self.E.A, self.E.B)
                if c in self._add_codes:
                    if a != 0:
                        raise InvariantError("additive trace must vanish")
                elif c in self._mult_signs:
                    if a != self._mult_signs[c]:
                        raise InvariantError("multiplicative sign mismatch")
                elif a * a > 4 * q**d:
                    raise InvariantError(f"Hasse bound broken at prime code {c}")
                self.traces[c] = a
                self._deg_of[c] = d
        self.atilde = sieve.multiplicative_table(self._prime_power, up_to=max_f_deg)
        self.max_deg = max_f_deg

    def _prime_power(self, p_code: int, e: int) -> int:
        if p_code in self._add_codes:
            return 0
        a = self.traces[p_code]
        if p_code in self._mult_signs:
            return a**e
        norm = self.q ** self._deg_of[p_code]
        prev, cur = 1, a
        for _ in range(e - 1):
            prev, cur = cur, a * cur - norm * prev
        return cur

    def series_sum(self, n: int, chi_vals: np.ndarray | None = None) -> int:
        """sum over monic f of degree n of atilde(f) [times chi values]."""
        if n > self.max_deg:
            raise ValueError("tables too small; call extend() first")
        if n == 0:
            return 1
        q = self.q
        block = self.atilde[q**n : 2 * q**n]
        if chi_vals is None:
            return int(block.sum(dtype=np.int64))
        return int(np.dot(block, chi_vals.astype(np.int64)))


@dataclass(frozen=True)
class TwistRecord:
    P: Poly
    coeffs: tuple[QuadValue, ...]  # normalized, coeffs[n] = B_n q^{-n/2}
    int_coeffs: tuple[int, ...]  # B_n, the q^{n/2}-scaled integer form
    epsilon: int
    epsilon_deg: int
    rank: int


def _extract_sign(U: dict[int, int], D: int, H: int, q: int) -> int | None:
    """Sign from the first nonvanishing directly-computed pair, or None if
    every pair in the overlap window vanishes."""
    for n in range(max(0, D - H), D // 2 + 1):
        b_lo, b_hi = U[n], U[D - n]
        if 2 * n == D:
            if b_lo != 0:
                return 1
            continue
        if b_lo != 0:
            scale = q ** (D - 2 * n) * b_lo
            if b_hi % scale != 0:
                raise InvariantError(f"functional equation fails at pair ({n}, {D - n})")
            eps = b_hi // scale
            if eps not in (1, -1):
                raise InvariantError(f"sign extraction gave {eps} at pair ({n}, {D - n})")
            return eps
        if b_hi != 0:
            raise InvariantError(f"coefficient {D - n} nonzero while its mirror {n} vanishes")
    return None


def _verify_pairs(U: dict[int, int], D: int, H: int, q: int, eps: int) -> None:
    for n in range(max(0, D - H), D // 2 + 1):
        if 2 * n == D:
            if eps == -1 and U[n] != 0:
                raise InvariantError("middle coefficient must vanish when the sign is -1")
            continue
        if U[D - n] != eps * q ** (D - 2 * n) * U[n]:
            raise InvariantError(f"functional equation fails at pair ({n}, {D - n})")


def _int_to_quad(B: list[int], q: int) -> tuple[QuadValue, ...]:
    return tuple(QuadValue.sqrt_q_power(-n, q).scale_int(b) for n, b in enumerate(B))


def _weil_bound_check(B: list[int], q: int) -> None:
    # inverse roots have modulus q (weight two), so |B_n| <= C(D,n) q^n
    D = len(B) - 1
    for n, b in enumerate(B):
        if b * b > comb(D, n) ** 2 * q ** (2 * n):
            raise InvariantError(f"coefficient {n} breaks the binomial bound")


def _frac_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    # coefficient lists lowest degree first, b nonzero
    r = a[:]
    db, lead = len(b) - 1, b[-1]
    quo = [Fraction(0)] * max(0, len(r) - db)
    for i in range(len(r) - 1, db - 1, -1):
        c = r[i] / lead
        if c:
            quo[i - db] = c
            for j, bj in enumerate(b):
                r[i - db + j] -= c * bj
    while len(r) > 1 and r[-1] == 0:
        r.pop()
    return quo, r


def _squarefree_part(B: list[int]) -> list[float]:
    """B with repeated factors stripped (exact rational gcd with the
    derivative), as floats ready for root extraction."""
    f = [Fraction(c) for c in B]
    a, b = f, [Fraction((n + 1) * B[n + 1]) for n in range(len(B) - 1)]
    while not (len(b) == 1 and b[0] == 0):
        _, r = _frac_divmod(a, b)
        a, b = b, r
    if len(a) > 1:
        f, _ = _frac_divmod(f, a)
    return [float(c) for c in f]


def _critical_circle_check(B: list[int], q: int, tol: float) -> float:
    if len(B) <= 1:
        return 0.0
    # repeated roots wreck the accuracy of numeric root extraction
    # (a root of multiplicity m only comes back to eps^(1/m)), so strip
    # them exactly first; the root set is unchanged
    roots = np.roots(list(reversed(_squarefree_part(B))))
    dev = float(np.max(np.abs(np.abs(roots) - 1.0 / q)))
    if dev > tol:
        raise InvariantError(f"root off the critical circle by {dev:.3e}")
    return dev


def _strip_inf_factor(U: list[int], G: tuple[int, ...]) -> list[int]:
    """Exact power-series division of the finite-prime sums by the leftover
    polynomial factor at infinity (constant term 1, so the quotient stays
    integral)."""
    B: list[int] = []
    for n, u in enumerate(U):
        v = u
        for j in range(1, min(n, len(G) - 1) + 1):
            v -= G[j] * B[n - j]
        B.append(v)
    return B


def ec_l_polynomial(E: EllipticCurve, engine: TwistEngine | None = None) -> tuple[tuple[QuadValue, ...], int]:
    """Direct-summation L-polynomial of the curve itself, with the degree
    self-check margin: the two series coefficients above n_conductor must
    vanish, and after the factor at infinity is divided out the L-degree
    leading coefficient must not."""
    engine = engine or TwistEngine(E)
    n = E.n_conductor
    engine.extend(n + 2)
    U = [engine.series_sum(k) for k in range(n + 3)]
    if U[n + 1] != 0 or U[n + 2] != 0:
        raise InvariantError(
            f"series does not truncate at degree {n} (got {U[n + 1]}, {U[n + 2]} above); "
            "model may be non-minimal or the conductor bookkeeping is off"
        )
    nL = n - (len(E.inf_factor) - 1)
    B = _strip_inf_factor(U[: n + 1], E.inf_factor)
    if any(B[k] != 0 for k in range(nL + 1, n + 1)):
        raise InvariantError(
            f"series does not reduce to degree {nL} after the factor at infinity is removed"
        )
    if B[nL] == 0:
        raise InvariantError(f"leading coefficient at degree {nL} vanishes")
    Bmap = {k: B[k] for k in range(nL + 1)}
    eps = 1 if nL == 0 else _extract_sign(Bmap, nL, nL, E.q)
    if eps is None:  # unreachable: the pair (0, nL) has B[0] = 1
        raise InvariantError("sign extraction failed on a complete coefficient list")
    _verify_pairs(Bmap, nL, nL, E.q, eps)
    engine.eps_E = eps
    engine.l_coeffs_int = tuple(B[: nL + 1])
    return _int_to_quad(B[: nL + 1], E.q), eps


def twist_l_polynomial(
    E: EllipticCurve,
    P: Poly,
    engine: TwistEngine | None = None,
    slack: int = 1,
    rh_tol: float = 1e-6,
) -> TwistRecord:
    """Quadratic twist by the character of a monic irreducible P of odd
    degree coprime to the discriminant."""
    q = E.q
    if P.q != q:
        raise ValueError("mixed fields")
    if not (P.is_monic and P.deg % 2 == 1 and is_irreducible(P)):
        raise ValueError("twist conductor must be monic irreducible of odd degree")
    if (E.delta % P).is_zero:
        raise ValueError(f"twist conductor {P} divides the discriminant")
    engine = engine or TwistEngine(E)
    if engine.eps_E is None:
        ec_l_polynomial(E, engine)
    G = E.twist_inf_factor
    # the twisted series has degree n_conductor + 2 deg P no matter what
    # happens at infinity; the L-polynomial is shorter by deg G
    D = E.n_conductor + 2 * P.deg - (len(G) - 1)
    H = min(D // 2 + max(1, slack), D)
    engine.extend(H)
    U = [engine.series_sum(n, chi_values_for_degree(P, n)) for n in range(H + 1)]
    L = dict(enumerate(_strip_inf_factor(U, G)))
    while True:
        eps = _extract_sign(L, D, H, q)
        if eps is not None:
            break
        # every overlap pair vanished; grow the window (bounded: the pair
        # (0, D) cannot vanish because B_0 = 1)
        H = min(H + 1, D)
        engine.extend(H)
        u = engine.series_sum(H, chi_values_for_degree(P, H))
        L[H] = u - sum(G[j] * L[H - j] for j in range(1, len(G)))
    _verify_pairs(L, D, H, q, eps)
    B = [L[n] if n <= H else eps * q ** (2 * n - D) * L[D - n] for n in range(D + 1)]
    _weil_bound_check(B, q)
    _critical_circle_check(B, q, rh_tol)
    rank = analytic_rank_ints(B, q)
    if rank % 2 != (0 if eps == 1 else 1):
        raise InvariantError(f"rank {rank} has the wrong parity for sign {eps}")
    eps_deg = eps * engine.eps_E * jacobi_symbol(E.M, P)
    return TwistRecord(
        P=P,
        coeffs=_int_to_quad(B, q),
        int_coeffs=tuple(B),
        epsilon=eps,
        epsilon_deg=eps_deg,
        rank=rank,
    )


def analytic_rank_ints(B: list[int] | tuple[int, ...], q: int) -> int:
    """Multiplicity of the central point as a root, by exact rational
    deflation at x = 1/q."""
    coeffs = [Fraction(b) for b in B]
    r = Fraction(1, q)
    rank = 0
    while len(coeffs) > 1:
        val = Fraction(0)
        for c in reversed(coeffs):
            val = val * r + c
        if val != 0:
            break
        deflated = [Fraction(0)] * (len(coeffs) - 1)
        deflated[-1] = coeffs[-1]
        for k in range(len(coeffs) - 2, 0, -1):
            deflated[k - 1] = coeffs[k] + r * deflated[k]
        coeffs = deflated
        rank += 1
    return rank


def analytic_rank(rec: TwistRecord) -> int:
    return rec.rank


def central_derivative(E: EllipticCurve, rec: TwistRecord) -> QuadValue:
    """Derivative at the central point in units of 2 log q, for sign -1
    twists, computed two independent ways that must agree exactly:
    the truncated weighted sum and the direct polynomial derivative."""
    if rec.epsilon != -1:
        raise ValueError("derivative formula applies to sign -1 twists only")
    q = E.q
    B = rec.int_coeffs
    D = len(B) - 1
    K = D // 2
    weighted = sum(Fraction((K - n) * B[n], q**n) for n in range(K + 1))
    direct = -Fraction(1, 2) * sum(Fraction(n * B[n], q**n) for n in range(D + 1))
    if weighted != direct:
        parity = "odd" if D % 2 else "even"
        raise InvariantError(
            f"derivative routes disagree ({weighted} vs {direct}); twisted degree {D} is {parity} "
            "and the truncated identity is exact only for even degree"
        )
    return QuadValue.from_fraction(weighted, q)


@dataclass(frozen=True)
class SearchResult:
    witness: Poly | None
    histogram: dict[int, int]
    skipped_bad: int
    exception_case: bool


def rank_one_search(E: EllipticCurve, g: int, engine: TwistEngine | None = None) -> SearchResult:
    """Scan twists by all degree-(2g+1) primes coprime to the discriminant,
    in ascending code order; record the rank histogram and the first twist
    of rank exactly one."""
    from .ffpoly import enumerate_irreducible

    engine = engine or TwistEngine(E)
    witness = None
    hist: dict[int, int] = {}
    skipped = 0
    eps_deg_seen: set[int] = set()
    for P in enumerate_irreducible(E.q, 2 * g + 1):
        if (E.delta % P).is_zero:
            skipped += 1
            continue
        rec = twist_l_polynomial(E, P, engine)
        hist[rec.rank] = hist.get(rec.rank, 0) + 1
        eps_deg_seen.add(rec.epsilon_deg)
        if witness is None and rec.rank == 1:
            witness = P
    if len(eps_deg_seen) > 1:
        raise InvariantError("degree sign not constant across the population")
    exception = E.M.is_one and bool(eps_deg_seen) and next(iter(eps_deg_seen)) * engine.eps_E == 1
    return SearchResult(witness=witness, histogram=dict(sorted(hist.items())), skipped_bad=skipped, exception_case=exception)
