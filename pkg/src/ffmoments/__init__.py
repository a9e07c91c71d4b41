"""Exact moment computations for quadratic Dirichlet characters and
elliptic-curve twists over rational function fields.

Everything averaged is computed in exact arithmetic (integers, Fractions,
and the a + b*sqrt(q) ring); floats appear only in reports and root
locations.
"""

from .analytics import (
    FeasibilityError,
    MomentReport,
    diagonal_sum,
    divisor_gf_check,
    ec_first_derivative_moment,
    euler_coefficient_check,
    moment_bound_spotcheck,
    second_moment,
    sym2_constant,
    tail_sum_E1,
    weil_avg_check,
    weil_ratio_sweep,
    zeta_q,
)
from .dirichlet import (
    LPolynomial,
    afe_central_identity,
    afe_square_check,
    central_value,
    coefficient_bound_ok,
    divisor_weighted_sums,
    l_coefficients,
    rh_roots,
    verify_functional_equation,
)
from .elliptic import (
    EllipticCurve,
    TwistEngine,
    TwistRecord,
    analytic_rank,
    build_curve,
    central_derivative,
    ec_l_polynomial,
    lambda_Q,
    lambda_f,
    rank_one_search,
    twist_l_polynomial,
)
from .ffpoly import (
    FieldSpec,
    InvariantError,
    Poly,
    count_irreducible,
    enumerate_irreducible,
    enumerate_monic,
    factor,
    is_irreducible,
    tau,
)
from .quadvalue import ExactAverage, QuadValue, quad_sum
from .residue import chi, euler_symbol, jacobi_symbol

__version__ = "0.1.0"

__all__ = [
    "EllipticCurve",
    "ExactAverage",
    "FeasibilityError",
    "FieldSpec",
    "InvariantError",
    "LPolynomial",
    "MomentReport",
    "Poly",
    "QuadValue",
    "TwistEngine",
    "TwistRecord",
    "afe_central_identity",
    "afe_square_check",
    "analytic_rank",
    "build_curve",
    "central_derivative",
    "central_value",
    "chi",
    "coefficient_bound_ok",
    "count_irreducible",
    "diagonal_sum",
    "divisor_gf_check",
    "divisor_weighted_sums",
    "ec_first_derivative_moment",
    "ec_l_polynomial",
    "enumerate_irreducible",
    "enumerate_monic",
    "euler_coefficient_check",
    "euler_symbol",
    "factor",
    "is_irreducible",
    "jacobi_symbol",
    "l_coefficients",
    "lambda_Q",
    "lambda_f",
    "moment_bound_spotcheck",
    "quad_sum",
    "rank_one_search",
    "rh_roots",
    "second_moment",
    "sym2_constant",
    "tail_sum_E1",
    "tau",
    "twist_l_polynomial",
    "verify_functional_equation",
    "weil_avg_check",
    "weil_ratio_sweep",
    "zeta_q",
]
