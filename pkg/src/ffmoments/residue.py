"""Quadratic residue symbols in F_q[t], q an odd prime.

euler_symbol(f, P) is the Euler criterion f^{(|P|-1)/2} mod P for monic
irreducible P, mapped to {0, +1, -1}; the power must land on a constant in
{0, 1, q-1} and anything else trips an invariant failure rather than a wrong
answer.

jacobi_symbol(A, m) extends it multiplicatively to monic m without factoring,
through quadratic reciprocity for monic coprime pairs,

    (A/B) (B/A) = (-1)^{((q-1)/2) deg A deg B},

peeling the leading constant c via (c/m) = legendre(c, q)^{deg m} at each
flip.  It agrees with products of euler_symbol values (that agreement is a
unit test, not an assumption).

chi(P, f) is the quadratic character attached to a monic irreducible P of
odd degree.  Two orientations exist in the literature; the default
"f_over_P" reduces f mod P (periodic, fast to tabulate), the alternative
"P_over_f" evaluates the flipped symbol.  For q = 1 (mod 4) they agree on
monic f; for q = 3 (mod 4) they differ by (-1)^{deg f}, which flips the sign
of every odd-degree coefficient of an attached L-polynomial and turns out to
preserve its functional equation, so both pass that check and the choice is
a convention, not a theorem.
"""

from __future__ import annotations

from .ffpoly import InvariantError, Poly

ORIENTATIONS = ("f_over_P", "P_over_f")


def legendre_const(c: int, q: int) -> int:
    """Legendre symbol of the constant c modulo the odd prime q."""
    c %= q
    if c == 0:
        return 0
    s = pow(c, (q - 1) // 2, q)
    if s == 1:
        return 1
    if s == q - 1:
        return -1
    raise InvariantError(f"euler criterion gave {s} mod {q}, expected 1 or {q - 1}")


def euler_symbol(f: Poly, P: Poly) -> int:
    """(f/P) by the Euler criterion; P monic irreducible."""
    if not P.is_monic:
        raise ValueError("modulus must be monic")
    q = P.q
    r = f % P
    if r.is_zero:
        return 0
    from .ffpoly import pow_mod

    s = pow_mod(r, (P.norm - 1) // 2, P)
    if s.degree != 0:
        raise InvariantError(f"euler power non-constant mod {P}")
    c = s.coeffs[0]
    if c == 1:
        return 1
    if c == q - 1:
        return -1
    raise InvariantError(f"euler power {c} not a sign mod {P}")


def jacobi_symbol(A: Poly, m: Poly) -> int:
    """(A/m) for monic m != 0, by reciprocity; no factorization."""
    if m.is_zero:
        raise ValueError("symbol modulus must be nonzero")
    if not m.is_monic:
        raise ValueError("symbol modulus must be monic")
    q = A.q
    half = (q - 1) // 2
    sign = 1
    A = A % m
    while True:
        if m.is_one:
            return sign
        if A.is_zero:
            return 0
        c = A.leading
        if c != 1:
            A = A.monic()
            if m.deg % 2 == 1 and legendre_const(c, q) == -1:
                sign = -sign
        if A.is_one:
            return sign
        if half % 2 == 1 and A.deg % 2 == 1 and m.deg % 2 == 1:
            sign = -sign
        A, m = m % A, A


def chi(P: Poly, f: Poly, orientation: str = "f_over_P") -> int:
    """Quadratic character attached to monic irreducible P, evaluated at
    monic f; orientation as documented in the module docstring."""
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    if orientation == "f_over_P":
        return jacobi_symbol(f, P)
    if not f.is_monic:
        raise ValueError("P_over_f orientation needs monic f")
    return jacobi_symbol(P, f)
