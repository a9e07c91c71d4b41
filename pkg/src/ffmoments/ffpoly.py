"""Dense univariate polynomial arithmetic over a prime field F_q.

Representation: a polynomial is a tuple of coefficients in [0, q), lowest
degree first, with no trailing zeros; the zero polynomial is the empty tuple
and its degree is the sentinel -inf so that deg(f*g) = deg f + deg g holds
without special cases.  Every coefficient is a Python int, so nothing here
overflows.

Monic polynomials of degree n are enumerated in ascending base-q code order,
code(f) = sum_i f_i q^i; this is lexicographic on coefficient vectors read
from the leading coefficient down, and the code doubles as a compact integer
key for caches and bulk tables.

Irreducibility is decided by the deterministic derandomized test
(x^{q^n} == x mod f, plus gcd(x^{q^{n/p}} - x, f) = 1 for every prime p | n);
a trial-division cross-check backs it in the unit tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd, inf
from typing import Iterator, Sequence


class InvariantError(AssertionError):
    """An internal cross-check failed; the result would not be trustworthy."""


NEG_INF = -inf  # degree of the zero polynomial


@dataclass(frozen=True)
class FieldSpec:
    """Coefficient field F_q, q an odd prime.

    elliptic_ok demands in addition q >= 5 and gcd(q, 6) = 1, the hypothesis
    under which short Weierstrass reduction bookkeeping below is valid.
    """

    q: int

    def __post_init__(self) -> None:
        q = self.q
        if not isinstance(q, int) or q < 3:
            raise ValueError(f"q must be an odd prime >= 3, got {q!r}")
        if q % 2 == 0 or not _is_prime(q):
            raise ValueError(f"q must be an odd prime, got {q}")

    @property
    def elliptic_ok(self) -> bool:
        return self.q >= 5 and gcd(self.q, 6) == 1

    def require_elliptic(self) -> None:
        if not self.elliptic_ok:
            raise ValueError(f"q = {self.q} not coprime to 6; curve arithmetic needs (q, 6) = 1")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Poly:
    """Immutable dense polynomial over F_q. Use Poly.make / from_code."""

    coeffs: tuple[int, ...]
    q: int

    # -- constructors -------------------------------------------------

    @staticmethod
    def make(coeffs: Sequence[int], q: int) -> "Poly":
        c = [x % q for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        return Poly(tuple(c), q)

    @staticmethod
    def zero(q: int) -> "Poly":
        return Poly((), q)

    @staticmethod
    def one(q: int) -> "Poly":
        return Poly((1,), q)

    @staticmethod
    def const(c: int, q: int) -> "Poly":
        return Poly.make([c], q)

    @staticmethod
    def x(q: int) -> "Poly":
        return Poly((0, 1), q)

    @staticmethod
    def from_code(code: int, q: int) -> "Poly":
        if code < 0:
            raise ValueError("polynomial code must be >= 0")
        c = []
        while code:
            code, r = divmod(code, q)
            c.append(r)
        return Poly(tuple(c), q)

    # -- basic queries -------------------------------------------------

    @property
    def degree(self) -> float:
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    @property
    def deg(self) -> int:
        """Degree as an int; raises on the zero polynomial."""
        if not self.coeffs:
            raise ValueError("zero polynomial has no integer degree")
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_one(self) -> bool:
        return self.coeffs == (1,)

    @property
    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    @property
    def leading(self) -> int:
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    @property
    def norm(self) -> int:
        """|f| = q^{deg f} (number of residues mod f); 0 for the zero poly."""
        return 0 if self.is_zero else self.q ** (len(self.coeffs) - 1)

    def code(self) -> int:
        c = 0
        for a in reversed(self.coeffs):
            c = c * self.q + a
        return c

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            a = self.coeffs[i]
            if a == 0:
                continue
            if i == 0:
                parts.append(str(a))
            elif i == 1:
                parts.append("t" if a == 1 else f"{a}*t")
            else:
                parts.append(f"t^{i}" if a == 1 else f"{a}*t^{i}")
        return " + ".join(parts)

    # -- ring operations -----------------------------------------------

    def _check(self, other: "Poly") -> None:
        if self.q != other.q:
            raise ValueError(f"mixed fields F_{self.q} and F_{other.q}")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        c = list(a)
        for i, x in enumerate(b):
            c[i] = (c[i] + x) % self.q
        return Poly.make(c, self.q)

    def __neg__(self) -> "Poly":
        return Poly(tuple((-x) % self.q for x in self.coeffs), self.q)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other: "Poly") -> "Poly":
        self._check(other)
        if self.is_zero or other.is_zero:
            return Poly.zero(self.q)
        a, b = self.coeffs, other.coeffs
        c = [0] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x == 0:
                continue
            for j, y in enumerate(b):
                c[i + j] += x * y
        return Poly(tuple(x % self.q for x in c), self.q)

    def scale(self, k: int) -> "Poly":
        k %= self.q
        if k == 0:
            return Poly.zero(self.q)
        return Poly(tuple((k * x) % self.q for x in self.coeffs), self.q)

    def __divmod__(self, other: "Poly") -> tuple["Poly", "Poly"]:
        self._check(other)
        if other.is_zero:
            raise ZeroDivisionError("polynomial division by zero")
        q = self.q
        rem = list(self.coeffs)
        d = other.deg
        inv_lead = pow(other.coeffs[-1], q - 2, q)
        quo = [0] * max(len(rem) - d, 0)
        for i in range(len(rem) - 1, d - 1, -1):
            c = (rem[i] * inv_lead) % q
            if c == 0:
                continue
            quo[i - d] = c
            for j, y in enumerate(other.coeffs):
                rem[i - d + j] = (rem[i - d + j] - c * y) % q
        return Poly.make(quo, q), Poly.make(rem, q)

    def __mod__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[1]

    def __floordiv__(self, other: "Poly") -> "Poly":
        return divmod(self, other)[0]

    def monic(self) -> "Poly":
        if self.is_zero:
            raise ValueError("zero polynomial cannot be normalized to monic")
        return self.scale(pow(self.leading, self.q - 2, self.q))

    def evaluate(self, x: int) -> int:
        acc = 0
        for a in reversed(self.coeffs):
            acc = (acc * x + a) % self.q
        return acc

    def derivative(self) -> "Poly":
        return Poly.make([(i * a) % self.q for i, a in enumerate(self.coeffs)][1:], self.q)


def poly_gcd(f: Poly, g: Poly) -> Poly:
    """Monic gcd; gcd(0, 0) is the zero polynomial."""
    f._check(g)
    while not g.is_zero:
        f, g = g, f % g
    return f if f.is_zero else f.monic()


def pow_mod(f: Poly, e: int, m: Poly) -> Poly:
    """f^e mod m by square and multiply; e >= 0."""
    if e < 0:
        raise ValueError("negative exponent")
    if m.is_zero:
        raise ZeroDivisionError("reduction modulo zero")
    result = Poly.one(f.q) % m
    base = f % m
    while e:
        if e & 1:
            result = (result * base) % m
        base = (base * base) % m
        e >>= 1
    return result


# -- irreducibility and enumeration -------------------------------------


def _prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def is_irreducible(f: Poly) -> bool:
    """Deterministic irreducibility test; constants and non-monic leading
    coefficients are allowed (irreducibility ignores units)."""
    if f.is_zero or f.degree == 0:
        return False
    n = f.deg
    if n == 1:
        return True
    q = f.q
    x = Poly.x(q)
    # x^{q^n} == x mod f
    xq = x
    for _ in range(n):
        xq = pow_mod(xq, q, f)
    if xq != x % f:
        return False
    for p in _prime_factors(n):
        xqd = x
        for _ in range(n // p):
            xqd = pow_mod(xqd, q, f)
        if not poly_gcd(xqd - x, f).is_one:
            return False
    return True


def is_irreducible_slow(f: Poly) -> bool:
    """Trial division by all monic polynomials of degree <= deg(f)/2.

    Exponentially slow; exists as an independent oracle for the fast test.
    """
    if f.is_zero or f.degree == 0:
        return False
    n = f.deg
    for d in range(1, n // 2 + 1):
        for g in enumerate_monic(f.q, d):
            if (f % g).is_zero:
                return False
    return True


def enumerate_monic(q: int, n: int) -> Iterator[Poly]:
    """All q^n monic polynomials of degree n, ascending code order."""
    if n < 0:
        raise ValueError("degree must be >= 0")
    lead = q**n
    for low in range(lead):
        yield Poly.from_code(lead + low if n > 0 else 1, q)
        if n == 0:
            return


def enumerate_irreducible(q: int, n: int) -> Iterator[Poly]:
    """Monic irreducibles of degree n, ascending code order."""
    if n < 1:
        raise ValueError("irreducible enumeration needs degree >= 1")
    for f in enumerate_monic(q, n):
        if is_irreducible(f):
            yield f


def _mobius(n: int) -> int:
    if n == 1:
        return 1
    mu = 1
    d = 2
    while d * d <= n:
        if n % d == 0:
            n //= d
            if n % d == 0:
                return 0
            mu = -mu
        d += 1
    if n > 1:
        mu = -mu
    return mu


def count_irreducible(q: int, n: int) -> int:
    """|P_n| = (1/n) sum_{d | n} mu(d) q^{n/d}."""
    if n < 1:
        raise ValueError("count needs degree >= 1")
    total = sum(_mobius(d) * q ** (n // d) for d in range(1, n + 1) if n % d == 0)
    if total % n:
        raise InvariantError(f"irreducible count not integral at q={q}, n={n}")
    return total // n


def factor(f: Poly) -> list[tuple[Poly, int]]:
    """Factor into monic irreducibles by trial division, ascending code
    order; the unit (leading coefficient) is discarded.  Fine for the small
    degrees the API-level callers use; bulk work has its own sieve."""
    if f.is_zero:
        raise ValueError("cannot factor the zero polynomial")
    f = f.monic()
    out: list[tuple[Poly, int]] = []
    d = 1
    while f.deg >= 2 * d:
        for p in enumerate_monic(f.q, d):
            if f.deg < 2 * d:
                break
            quo, rem = divmod(f, p)
            if not rem.is_zero:
                continue
            # p has no factor of degree < d, hence irreducible
            e = 1
            f = quo
            while True:
                quo, rem = divmod(f, p)
                if not rem.is_zero:
                    break
                e += 1
                f = quo
            out.append((p, e))
        d += 1
    if f.deg >= 1:
        out.append((f, 1))
    out.sort(key=lambda pe: (pe[0].deg, pe[0].code()))
    return out


def tau(f: Poly) -> int:
    """Number of monic divisors: product of (e_i + 1)."""
    if f.is_zero:
        raise ValueError("tau(0) undefined")
    t = 1
    for _, e in factor(f):
        t *= e + 1
    return t
