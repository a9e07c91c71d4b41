"""L-polynomials of quadratic characters attached to odd-degree irreducibles.

For monic irreducible P of degree 2g+1 the character chi_P is quadratic and
even-ish in the function-field sense, and

    L(u) = sum_{n=0}^{2g} c_n u^n,   c_n = sum_{deg f = n, f monic} chi_P(f),

an integer polynomial of degree exactly 2g satisfying the exact symmetry
c_{2g-n} = q^{g-n} c_n.  Everything downstream (central values, moments,
divisor-weighted squares) consumes the integer coefficient list; nothing
here ever rounds.

Three construction routes exist on purpose: a bulk character table (fast,
used by sweeps), per-polynomial reciprocity symbols, and per-polynomial
Euler criterion powers (slow, the cross-validation oracle).  They must agree
and the test suite pins that.

The squared approximate identity is checked literally coefficient by
coefficient: expanding L(u)^2 term by term must reproduce the divisor-
weighted sums T_k = sum_{deg f = k} tau(f) chi_P(f) on the low half and
their functional-equation reflection q^{k-2g} T_{4g-k} on the high half.
Both sides are integers, so the comparison is ==, not a tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .ffpoly import InvariantError, Poly, is_irreducible
from .quadvalue import QuadValue, quad_sum
from .residue import ORIENTATIONS, chi
from .tables import cached_mult_table, chi_table, mat_codes, monic_matrix, reduce_mod, poly_vec

METHODS = ("table", "jacobi", "euler")


@dataclass(frozen=True)
class LPolynomial:
    P: Poly
    genus: int
    coeffs: tuple[int, ...]  # c_0 .. c_{2g}
    orientation: str = "f_over_P"

    @property
    def q(self) -> int:
        return self.P.q


def _validate_conductor(P: Poly) -> int:
    if not (P.is_monic and not P.is_zero and P.deg % 2 == 1):
        raise ValueError("conductor must be monic of odd degree")
    if not is_irreducible(P):
        raise ValueError(f"conductor {P} is not irreducible")
    return (P.deg - 1) // 2


def l_coefficients(P: Poly, orientation: str = "f_over_P", method: str = "table") -> LPolynomial:
    """Coefficient list of the attached L-polynomial; length 2g+1."""
    if orientation not in ORIENTATIONS:
        raise ValueError(f"orientation must be one of {ORIENTATIONS}")
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    g = _validate_conductor(P)
    q = P.q
    if method == "jacobi":
        # literal symbol evaluation in the requested orientation
        from .ffpoly import enumerate_monic

        c = [sum(chi(P, f, orientation) for f in enumerate_monic(q, n)) for n in range(2 * g + 1)]
    else:
        if method == "table":
            c = _coeffs_by_table(P, g)
        else:
            from .ffpoly import enumerate_monic
            from .residue import euler_symbol

            c = [sum(euler_symbol(f, P) for f in enumerate_monic(q, n)) for n in range(2 * g + 1)]
        if orientation == "P_over_f" and (q - 1) // 2 % 2 == 1:
            # reciprocity: flipped symbol is (f/P) * (-1)^{deg f} on monic f
            # when (q-1)/2 is odd (deg P odd throughout)
            c = [x if n % 2 == 0 else -x for n, x in enumerate(c)]
    if c[0] != 1:
        raise InvariantError("constant coefficient must be 1")
    if c[2 * g] != q**g:
        raise InvariantError("leading coefficient must be q^g")
    return LPolynomial(P=P, genus=g, coeffs=tuple(int(x) for x in c), orientation=orientation)


def _coeffs_by_table(P: Poly, g: int) -> list[int]:
    q = P.q
    arr = chi_table(q, P.code())
    # degree-(2g+1) sanity: summing chi over every residue gives 0, which is
    # the same cancellation that kills the coefficient at u^{2g+1}
    if int(arr.sum()) != 0:
        raise InvariantError("character sum over residues must vanish")
    out = [1]
    for n in range(1, 2 * g + 1):
        out.append(int(arr[q**n : 2 * q**n].sum(dtype=np.int64)))
    return out


def verify_functional_equation(L: LPolynomial) -> bool:
    """Exact integer symmetry c_{2g-n} = q^{g-n} c_n for 0 <= n <= g."""
    g, q, c = L.genus, L.q, L.coeffs
    if len(c) != 2 * g + 1:
        return False
    return all(c[2 * g - n] == q ** (g - n) * c[n] for n in range(g + 1))


def coefficient_bound_ok(L: LPolynomial) -> bool:
    """|c_n| <= binom(2g, n) q^{n/2}, exactly (squared integer comparison)."""
    g, q = L.genus, L.q
    return all(c * c <= comb(2 * g, n) ** 2 * q**n for n, c in enumerate(L.coeffs))


def central_value(L: LPolynomial) -> QuadValue:
    """L at the central point, sum_n c_n q^{-n/2}, exact."""
    q, g = L.q, L.genus
    a = sum(c * q ** (g - n // 2) for n, c in enumerate(L.coeffs) if n % 2 == 0)
    b = sum(c * q ** (g - (n + 1) // 2) for n, c in enumerate(L.coeffs) if n % 2 == 1)
    return QuadValue.make(a, b, g, q)


def rh_roots(L: LPolynomial) -> tuple[np.ndarray, float]:
    """Numeric roots and the worst distance of |root| from q^{-1/2}."""
    c = L.coeffs
    if len(c) == 1:
        return np.zeros(0, dtype=complex), 0.0
    roots = np.roots(list(reversed(c)))
    dev = float(np.max(np.abs(np.abs(roots) - L.q**-0.5)))
    return roots, dev


def divisor_weighted_sums(L: LPolynomial) -> list[int]:
    """T_k = sum_{deg f = k} tau(f) chi_P(f) for 0 <= k <= 2g."""
    P, g, q = L.P, L.genus, L.q
    arr = chi_table(q, P.code()).astype(np.int64)
    if L.orientation == "P_over_f" and (q - 1) // 2 % 2 == 1:
        signs = [1 if k % 2 == 0 else -1 for k in range(2 * g + 1)]
    else:
        signs = [1] * (2 * g + 1)
    tau_tab = cached_mult_table(q, max(2 * g, 1), "tau")
    out = []
    for k in range(2 * g + 1):
        if k == 0:
            out.append(1)
            continue
        lo, hi = q**k, 2 * q**k
        out.append(signs[k] * int(np.dot(tau_tab[lo:hi], arr[lo:hi])))
    return out


def afe_square_check(L: LPolynomial) -> bool:
    """Literal coefficientwise identity for the squared L-polynomial:
    low half against divisor-weighted sums, high half against their exact
    reflection.  Integer equalities throughout."""
    g, q, c = L.genus, L.q, L.coeffs
    T = divisor_weighted_sums(L)
    for k in range(4 * g + 1):
        lhs = sum(c[i] * c[k - i] for i in range(max(0, k - 2 * g), min(k, 2 * g) + 1))
        rhs = T[k] if k <= 2 * g else q ** (k - 2 * g) * T[4 * g - k]
        if lhs != rhs:
            return False
    return True


def afe_central_identity(L: LPolynomial) -> bool:
    """central_value^2 equals the two truncated divisor sums at u = q^{-1/2},
    exactly in QuadValue arithmetic."""
    q = L.q
    T = divisor_weighted_sums(L)
    lhs = central_value(L)
    lhs = lhs * lhs
    terms = []
    for k, t in enumerate(T):
        w = QuadValue.sqrt_q_power(-k, q).scale_int(t)
        terms.append(w)
        if k <= 2 * L.genus - 1:
            terms.append(w)
    return lhs == quad_sum(terms, q)


def chi_values_for_degree(P: Poly, n: int, orientation: str = "f_over_P") -> np.ndarray:
    """chi_P over all monic f of degree n, ascending code order, as int8."""
    q = P.q
    arr = chi_table(q, P.code())
    if n < P.deg:
        vals = arr[q**n : 2 * q**n].copy()
    else:
        codes = mat_codes(reduce_mod(monic_matrix(q, n), poly_vec(P), q), q)
        vals = arr[codes]
    if orientation == "P_over_f" and (q - 1) // 2 % 2 == 1 and n % 2 == 1:
        vals = -vals
    return vals
