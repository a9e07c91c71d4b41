"""Exact arithmetic in Z[sqrt q] localized at q.

Every central value and normalized L-coefficient in this package lives in
q^{-e} * Z[sqrt q], so a value is stored as the triple (a, b, e) meaning
(a + b*sqrt(q)) / q^e with Python big ints.  Canonical form: e >= 0, and
q divides neither a nor b while e > 0 (q is not a square, so q | a and q | b
is the only way a q can be cleared); zero is (0, 0, 0).  With that, equality
of triples is equality of values, sums over half a million terms stay exact,
and float conversion happens once at the edge of a computation, never inside.

Irrationality of sqrt(q) gives an exact sign: a + b*sqrt(q) and a^2 - b^2*q
have comparable signs when a, b differ in sign, and the naive rule applies
otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Iterable


def _canonical(a: int, b: int, e: int, q: int) -> tuple[int, int, int]:
    if a == 0 and b == 0:
        return 0, 0, 0
    while e > 0 and a % q == 0 and b % q == 0:
        a //= q
        b //= q
        e -= 1
    if e < 0:
        a *= q**-e
        b *= q**-e
        e = 0
    return a, b, e


@dataclass(frozen=True)
class QuadValue:
    """(a + b*sqrt(q)) / q^e in canonical form; construct via make()."""

    a: int
    b: int
    e: int
    q: int

    @staticmethod
    def make(a: int, b: int, e: int, q: int) -> "QuadValue":
        if q < 2:
            raise ValueError(f"base q must be >= 2, got {q}")
        if isqrt(q) ** 2 == q:
            raise ValueError(f"q = {q} is a perfect square; sqrt(q) would be rational")
        a, b, e = _canonical(a, b, e, q)
        return QuadValue(a, b, e, q)

    @staticmethod
    def zero(q: int) -> "QuadValue":
        return QuadValue(0, 0, 0, q)

    @staticmethod
    def from_int(n: int, q: int) -> "QuadValue":
        return QuadValue.make(n, 0, 0, q)

    @staticmethod
    def sqrt_q_power(k: int, q: int) -> "QuadValue":
        """q^{k/2} for any integer k, positive or negative."""
        if k % 2 == 0:
            m = k // 2
            return QuadValue.make(1, 0, -m, q) if m < 0 else QuadValue.make(q**m, 0, 0, q)
        m = (k - 1) // 2  # q^{k/2} = q^m * sqrt(q)
        return QuadValue.make(0, 1, -m, q) if m < 0 else QuadValue.make(0, q**m, 0, q)

    @staticmethod
    def from_fraction(x: Fraction, q: int) -> "QuadValue":
        """Exact embed of a rational whose denominator is a power of q."""
        den = x.denominator
        e = 0
        while den % q == 0:
            den //= q
            e += 1
        if den != 1:
            raise ValueError(f"denominator {x.denominator} is not a power of q = {q}")
        return QuadValue.make(x.numerator, 0, e, q)

    # -- ring operations ------------------------------------------------

    def _check(self, other: "QuadValue") -> None:
        if self.q != other.q:
            raise ValueError(f"mixed bases {self.q} and {other.q}")

    def __add__(self, other: "QuadValue") -> "QuadValue":
        self._check(other)
        e = max(self.e, other.e)
        s = self.q ** (e - self.e)
        t = self.q ** (e - other.e)
        return QuadValue.make(self.a * s + other.a * t, self.b * s + other.b * t, e, self.q)

    def __neg__(self) -> "QuadValue":
        return QuadValue(-self.a, -self.b, self.e, self.q)

    def __sub__(self, other: "QuadValue") -> "QuadValue":
        return self + (-other)

    def __mul__(self, other: "QuadValue") -> "QuadValue":
        self._check(other)
        q = self.q
        a = self.a * other.a + self.b * other.b * q
        b = self.a * other.b + self.b * other.a
        return QuadValue.make(a, b, self.e + other.e, q)

    def __pow__(self, n: int) -> "QuadValue":
        if n < 0:
            raise ValueError("negative powers not supported")
        out = QuadValue.from_int(1, self.q)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def scale_int(self, k: int) -> "QuadValue":
        return QuadValue.make(self.a * k, self.b * k, self.e, self.q)

    def div_q_power(self, k: int) -> "QuadValue":
        """Divide by q^k (k may be negative)."""
        return QuadValue.make(self.a, self.b, self.e + k, self.q)

    # -- queries ----------------------------------------------------------

    @property
    def is_zero(self) -> bool:
        return self.a == 0 and self.b == 0

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def rational(self) -> Fraction:
        if self.b != 0:
            raise ValueError("value has an irrational part")
        return Fraction(self.a, self.q**self.e)

    def sign(self) -> int:
        """Exact sign of the real number a + b*sqrt(q) (e is irrelevant)."""
        a, b = self.a, self.b
        if b == 0:
            return (a > 0) - (a < 0)
        if a == 0:
            return (b > 0) - (b < 0)
        if a > 0 and b > 0:
            return 1
        if a < 0 and b < 0:
            return -1
        # opposite signs: compare |a| against |b| sqrt(q) exactly
        d = a * a - b * b * self.q
        if d == 0:
            raise ArithmeticError("a^2 = q b^2 impossible for nonsquare q")
        return (d > 0) - (d < 0) if a > 0 else (d < 0) - (d > 0)

    def to_float(self) -> float:
        q = self.q
        return float(Fraction(self.a, q**self.e)) + float(Fraction(self.b, q**self.e)) * q**0.5

    def as_triple(self) -> tuple[int, int, int]:
        return self.a, self.b, self.e

    def __str__(self) -> str:
        if self.is_zero:
            return "0"
        num = []
        if self.a:
            num.append(str(self.a))
        if self.b:
            num.append(f"{self.b}*sqrt({self.q})" if self.b >= 0 else f"({self.b})*sqrt({self.q})")
        s = " + ".join(num)
        return f"({s})/{self.q}^{self.e}" if self.e else s


def quad_sum(values: Iterable[QuadValue], q: int | None = None) -> QuadValue:
    """Exact sum; accumulates on a shared denominator to avoid re-canonical
    churn term by term.  q is only needed for an empty iterable."""
    a_acc = b_acc = 0
    e_acc = 0
    base = q
    for v in values:
        if base is None:
            base = v.q
        elif v.q != base:
            raise ValueError(f"mixed bases {base} and {v.q}")
        if v.e > e_acc:
            s = base ** (v.e - e_acc)
            a_acc *= s
            b_acc *= s
            e_acc = v.e
        s = base ** (e_acc - v.e)
        a_acc += v.a * s
        b_acc += v.b * s
    if base is None:
        raise ValueError("empty sum needs an explicit q")
    return QuadValue.make(a_acc, b_acc, e_acc, base)


@dataclass(frozen=True)
class ExactAverage:
    """A sum kept next to its census so the average stays exact until the
    final float conversion."""

    total: QuadValue
    census: int

    def to_float(self) -> float:
        if self.census <= 0:
            raise ValueError("census must be positive")
        if self.total.is_rational:
            return float(self.total.rational() / self.census)
        return self.total.to_float() / self.census
