"""Command-line front end: one subcommand per experiment, CSV/JSON artifacts
with provenance headers, and a JSON-lines cache for the expensive sweeps.

Exit codes: 0 success, 2 invalid configuration, 3 infeasible size (the error
record carries a machine-readable runtime estimate), 4 invariant violation
(always fatal: the identities are theorems, a single failure poisons every
averaged number downstream), 5 cache error.

Determinism contract: the same configuration produces byte-identical
artifacts at any thread count, except for the runtime_seconds line.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time
from fractions import Fraction
from pathlib import Path

from . import __version__
from .analytics import (
    MOMENT_DEG_CAPS,
    FeasibilityError,
    diagonal_sum,
    divisor_gf_check,
    ec_first_derivative_moment,
    euler_coefficient_check,
    moment_bound_spotcheck,
    second_moment,
    sweep_l_records,
    tail_sum_E1,
    weil_avg_check,
    weil_ratio_sweep,
)
from .dirichlet import (
    LPolynomial,
    coefficient_bound_ok,
    l_coefficients,
    rh_roots,
    verify_functional_equation,
)
from .elliptic import (
    EllipticCurve,
    TwistEngine,
    TwistRecord,
    analytic_rank_ints,
    ec_l_polynomial,
    rank_one_search,
    twist_l_polynomial,
)
from .ffpoly import InvariantError, Poly, count_irreducible, enumerate_irreducible
from .quadvalue import QuadValue
from .tables import get_sieve

CACHE_DIR_ENV = "FFMOMENTS_CACHE_DIR"

SAMPLE_CURVES = {
    "e1": (5, (1,), (0, 1)),
    "e2": (5, (0, 0, 1), (0, 0, 1)),
    "e3": (5, (0, 0, 1), (0, 1)),
    "e4": (7, (1,), (0, 1)),
    "e5": (7, (1,), (0, 0, 1)),
    "e6": (5, (0, 1), (1,)),
}


class ConfigError(ValueError):
    pass


class CacheError(RuntimeError):
    pass


# -- parsing helpers -------------------------------------------------------


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as e:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}") from e


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip() != ""]
    except ValueError as e:
        raise ConfigError(f"expected a comma-separated float list, got {text!r}") from e


def _resolve_curve(args) -> EllipticCurve:
    from .elliptic import build_curve

    if getattr(args, "curve", None):
        name = args.curve.lower()
        if name not in SAMPLE_CURVES:
            raise ConfigError(f"unknown sample curve {args.curve!r}; have {sorted(SAMPLE_CURVES)}")
        q, A, B = SAMPLE_CURVES[name]
        if args.q is not None and args.q != q:
            raise ConfigError(f"sample curve {name} lives over q={q}, not q={args.q}")
        if getattr(args, "A", None) or getattr(args, "B", None):
            raise ConfigError("--curve conflicts with --A/--B")
        return build_curve(q, list(A), list(B))
    if args.q is None or not getattr(args, "A", None) or not getattr(args, "B", None):
        raise ConfigError("need --curve, or --q with --A and --B")
    return build_curve(_need_q(args), _int_list(args.A), _int_list(args.B))


def _need_q(args) -> int:
    if args.q is None:
        raise ConfigError("--q is required")
    q = args.q
    if q < 3 or q % 2 == 0 or any(q % p == 0 for p in range(3, int(q**0.5) + 1, 2)):
        raise ConfigError(f"--q must be an odd prime, got {q}")
    return q


def _genus(args) -> int:
    """--g wins; --deg must be odd and maps to (deg-1)/2."""
    if args.g is not None and args.deg is not None and args.deg != 2 * args.g + 1:
        raise ConfigError("--g and --deg disagree")
    if args.g is not None:
        return args.g
    if args.deg is not None:
        if args.deg % 2 == 0:
            raise ConfigError("conductor degree must be odd")
        return (args.deg - 1) // 2
    raise ConfigError("need --g or --deg")


def _cache_path(args, default_name: str) -> Path | None:
    if getattr(args, "cache", None):
        return Path(args.cache)
    env = os.environ.get(CACHE_DIR_ENV)
    if env:
        return Path(env) / default_name
    return None


# -- artifact output -------------------------------------------------------


def _cell(v) -> str:
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, Fraction):
        return str(v)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


def _provenance(args) -> dict[str, str]:
    skip = {"func"}
    prov = {"tool": "ffmoments", "version": __version__, "command": args.command}
    for k in sorted(vars(args)):
        if k in skip or k in prov:
            continue
        prov[k] = _cell(vars(args)[k])
    return prov


def _emit(args, rows: list[dict], runtime_seconds: float | None = None) -> None:
    prov = _provenance(args)
    if args.format == "json":
        doc = {"provenance": prov, "rows": rows}
        if runtime_seconds is not None:
            doc["runtime_seconds"] = runtime_seconds
        text = json.dumps(doc, indent=1, default=_cell) + "\n"
    else:
        lines = [f"# {k}={v}" for k, v in prov.items()]
        cols = list(rows[0].keys()) if rows else []
        lines.append(",".join(cols))
        for r in rows:
            lines.append(",".join(_cell(r[c]) for c in cols))
        if runtime_seconds is not None:
            lines.append(f"# runtime_seconds={runtime_seconds!r}")
        text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


# -- JSON-lines cache ------------------------------------------------------


def _cache_write(path: Path, kind: str, records: list[dict]) -> None:
    lines = [json.dumps(r, sort_keys=True, separators=(",", ":")) + "\n" for r in records]
    body = "".join(lines)
    header = json.dumps(
        {"v": 1, "kind": kind, "sha256": hashlib.sha256(body.encode()).hexdigest()},
        sort_keys=True,
        separators=(",", ":"),
    )
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(header + "\n" + body)
    os.replace(tmp, path)


def _cache_read(path: Path, kind: str) -> list[dict]:
    try:
        text = path.read_text()
    except OSError as e:
        raise CacheError(f"cannot read cache {path}: {e}") from e
    nl = text.find("\n")
    if nl < 0:
        raise CacheError(f"cache {path} has no header line")
    try:
        header = json.loads(text[:nl])
        if not isinstance(header, dict):
            raise ValueError("header is not an object")
    except ValueError as e:
        raise CacheError(f"cache {path} header is not valid JSON: {e}") from e
    if header.get("v") != 1:
        raise CacheError(f"cache {path} has schema version {header.get('v')!r}, this build reads 1; regenerate the file")
    if header.get("kind") != kind:
        raise CacheError(f"cache {path} holds {header.get('kind')!r} records, expected {kind!r}")
    body = text[nl + 1 :]
    if hashlib.sha256(body.encode()).hexdigest() != header.get("sha256"):
        raise CacheError(f"cache {path} failed its checksum; refusing to load")
    out = []
    for i, line in enumerate(body.splitlines()):
        try:
            rec = json.loads(line)
        except ValueError as e:
            raise CacheError(f"cache {path} record {i} is not valid JSON: {e}") from e
        out.append(rec)
    return out


def _load_dirichlet_cache(path: Path, q: int, g: int) -> dict[int, tuple[int, ...]]:
    """Records for this (q, g), keyed by conductor code, functional equation
    re-verified before use."""
    found: dict[int, tuple[int, ...]] = {}
    for rec in _cache_read(path, "dirichlet"):
        if rec.get("v") != 1 or rec.get("q") != q or rec.get("g") != g:
            continue
        try:
            P = Poly.make(rec["P"], q)
            coeffs = tuple(int(c) for c in rec["c"])
        except (KeyError, TypeError, ValueError) as e:
            raise CacheError(f"malformed dirichlet record in {path}: {e}") from e
        L = LPolynomial(P=P, genus=g, coeffs=coeffs)
        if not verify_functional_equation(L):
            raise CacheError(f"cached coefficients for {P} violate the functional equation")
        found[P.code()] = coeffs
    return found


def _save_dirichlet_cache(path: Path, q: int, g: int, records: list[tuple[int, tuple[int, ...]]]) -> None:
    existing = []
    if path.exists():
        existing = [r for r in _cache_read(path, "dirichlet") if not (r.get("q") == q and r.get("g") == g)]
    for code, coeffs in sorted(records):
        existing.append({"v": 1, "q": q, "P": list(Poly.from_code(code, q).coeffs), "g": g, "c": list(coeffs)})
    _cache_write(path, "dirichlet", existing)


def _twist_fe_ok(coeffs: tuple[QuadValue, ...], eps: int, q: int) -> bool:
    D = len(coeffs) - 1
    return all(coeffs[D - n] == (coeffs[n] * QuadValue.sqrt_q_power(D - 2 * n, q)).scale_int(eps) for n in range(D + 1))


def _load_twist_cache(path: Path, E: EllipticCurve, engine: TwistEngine) -> dict[int, TwistRecord]:
    from .residue import jacobi_symbol

    q = E.q
    A_l, B_l = list(E.A.coeffs), list(E.B.coeffs)
    found: dict[int, TwistRecord] = {}
    for rec in _cache_read(path, "twist"):
        if rec.get("v") != 1 or rec.get("q") != q or rec.get("A") != A_l or rec.get("B") != B_l:
            continue
        try:
            P = Poly.make(rec["P"], q)
            eps = int(rec["eps"])
            rank = int(rec["rank"])
            coeffs = tuple(QuadValue.make(a, b, e, q) for a, b, e in rec["L"])
        except (KeyError, TypeError, ValueError) as e:
            raise CacheError(f"malformed twist record in {path}: {e}") from e
        if eps not in (1, -1) or not _twist_fe_ok(coeffs, eps, q):
            raise CacheError(f"cached twist at {P} violates the functional equation")
        ints = []
        for n, c in enumerate(coeffs):
            v = (c * QuadValue.sqrt_q_power(n, q)).rational()
            if v.denominator != 1:
                raise CacheError(f"cached twist at {P} has a non-integer scaled coefficient")
            ints.append(int(v))
        if analytic_rank_ints(ints, q) != rank:
            raise CacheError(f"cached twist at {P} carries rank {rank}, recomputation disagrees")
        eps_deg = eps * engine.eps_E * jacobi_symbol(E.M, P)
        found[P.code()] = TwistRecord(
            P=P, coeffs=coeffs, int_coeffs=tuple(ints), epsilon=eps, epsilon_deg=eps_deg, rank=rank
        )
    return found


def _save_twist_cache(path: Path, E: EllipticCurve, records: dict[int, TwistRecord]) -> None:
    q = E.q
    A_l, B_l = list(E.A.coeffs), list(E.B.coeffs)
    existing = []
    if path.exists():
        existing = [
            r
            for r in _cache_read(path, "twist")
            if not (r.get("q") == q and r.get("A") == A_l and r.get("B") == B_l)
        ]
    for code in sorted(records):
        rec = records[code]
        existing.append(
            {
                "v": 1,
                "q": q,
                "A": A_l,
                "B": B_l,
                "P": list(rec.P.coeffs),
                "eps": rec.epsilon,
                "rank": rec.rank,
                "L": [list(c.as_triple()) for c in rec.coeffs],
            }
        )
    _cache_write(path, "twist", existing)


def _twist_population(E: EllipticCurve, g: int, cache: Path | None) -> tuple[list[TwistRecord], TwistEngine]:
    """All twists by degree-(2g+1) primes coprime to the discriminant, in
    ascending conductor order, resuming from the cache when one is given."""
    engine = TwistEngine(E)
    ec_l_polynomial(E, engine)
    cached: dict[int, TwistRecord] = {}
    if cache is not None and cache.exists():
        cached = _load_twist_cache(cache, E, engine)
    out = []
    changed = False
    for P in enumerate_irreducible(E.q, 2 * g + 1):
        if (E.delta % P).is_zero:
            continue
        rec = cached.get(P.code())
        if rec is None:
            rec = twist_l_polynomial(E, P, engine)
            cached[P.code()] = rec
            changed = True
        out.append(rec)
    if cache is not None and changed:
        _save_twist_cache(cache, E, cached)
    return out, engine


# -- subcommands -----------------------------------------------------------


def cmd_primes(args) -> int:
    q = _need_q(args)
    if args.deg is None:
        raise ConfigError("need --deg")
    n = args.deg
    if n < 1:
        raise ConfigError("--deg must be >= 1")
    if q**n > 12_000_000:
        raise FeasibilityError(f"sieve over q^deg = {q**n} codes exceeds the desk budget", q**n * 5e-8)
    t0 = time.perf_counter()
    formula = count_irreducible(q, n)
    enumerated = len(get_sieve(q, n).irreducible_codes(n))
    if formula != enumerated:
        raise InvariantError(f"census mismatch at q={q}, deg={n}: formula {formula}, sieve {enumerated}")
    _emit(
        args,
        [{"q": q, "deg": n, "census_formula": formula, "census_enumerated": enumerated, "match": True}],
        time.perf_counter() - t0,
    )
    return 0


def cmd_lpoly(args) -> int:
    q = _need_q(args)
    if not args.P:
        raise ConfigError("need --P (comma-separated coefficients, constant first)")
    P = Poly.make(_int_list(args.P), q)
    t0 = time.perf_counter()
    L = l_coefficients(P, orientation=args.orientation, method=args.method)
    fe = verify_functional_equation(L)
    bound = coefficient_bound_ok(L)
    if not fe:
        raise InvariantError(f"functional equation fails at {P}")
    _, dev = rh_roots(L)
    _emit(
        args,
        [
            {
                "q": q,
                "P": ";".join(map(str, P.coeffs)),
                "genus": L.genus,
                "coeffs": ";".join(map(str, L.coeffs)),
                "fe_ok": fe,
                "weil_bound_ok": bound,
                "rh_deviation": dev,
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_sweep_moment2(args) -> int:
    q = _need_q(args)
    g = _genus(args)
    cap = MOMENT_DEG_CAPS.get(q, 5)
    est = count_irreducible(q, 2 * g + 1) * q ** (2 * g + 1) * 2e-8
    if 2 * g + 1 > cap and (args.budget_seconds is None or est > args.budget_seconds):
        raise FeasibilityError(
            f"degree {2 * g + 1} over q={q} is past the default cap {cap}; estimated {est:.0f} s "
            "(pass --budget-seconds to authorize)",
            est,
        )
    cache = _cache_path(args, f"dirichlet_q{q}.jsonl")
    records = None
    if cache is not None and cache.exists():
        have = _load_dirichlet_cache(cache, q, g)
        records = []
        missing = []
        for P in enumerate_irreducible(q, 2 * g + 1):
            code = P.code()
            if code in have:
                records.append((code, have[code]))
            else:
                missing.append(code)
        for code in missing:
            records.append((code, l_coefficients(Poly.from_code(code, q)).coeffs))
        records.sort()
        if missing:
            _save_dirichlet_cache(cache, q, g, records)
    else:
        records = sweep_l_records(q, g, threads=args.threads)
        if cache is not None:
            _save_dirichlet_cache(cache, q, g, records)
    rep = second_moment(q, g, threads=args.threads, records=records, max_deg=2 * g + 1)
    a, b, e = rep.empirical.total.as_triple()
    _emit(
        args,
        [
            {
                "q": q,
                "g": g,
                "census": rep.census,
                "total_a": a,
                "total_b": b,
                "total_e": e,
                "empirical": rep.empirical_float,
                "predicted_main": rep.predicted_main,
                "predicted_secondary": rep.predicted_secondary,
                "residual": rep.residual,
            }
        ],
        rep.runtime_seconds,
    )
    return 0


def cmd_afe_check(args) -> int:
    from .dirichlet import afe_central_identity, afe_square_check

    q = _need_q(args)
    g = _genus(args)
    _gate(count_irreducible(q, 2 * g + 1) * q ** (2 * g + 1) * 2e-6, args.budget_seconds, "conductor sweep")
    t0 = time.perf_counter()
    population = 0
    square_ok = 0
    central_ok = 0
    for P in enumerate_irreducible(q, 2 * g + 1):
        L = l_coefficients(P)
        population += 1
        if afe_square_check(L):
            square_ok += 1
        else:
            raise InvariantError(f"coefficientwise identity fails at {P}")
        if afe_central_identity(L):
            central_ok += 1
        else:
            raise InvariantError(f"central specialization fails at {P}")
    _emit(
        args,
        [{"q": q, "deg": 2 * g + 1, "population": population, "square_ok": square_ok, "central_ok": central_ok}],
        time.perf_counter() - t0,
    )
    return 0


def cmd_rh_check(args) -> int:
    q = _need_q(args)
    g = _genus(args)
    _gate(count_irreducible(q, 2 * g + 1) * q ** (2 * g + 1) * 2e-6, args.budget_seconds, "conductor sweep")
    t0 = time.perf_counter()
    worst = 0.0
    population = 0
    bounds = True
    for P in enumerate_irreducible(q, 2 * g + 1):
        L = l_coefficients(P)
        _, dev = rh_roots(L)
        worst = max(worst, dev)
        bounds = bounds and coefficient_bound_ok(L)
        population += 1
    if not bounds:
        raise InvariantError("coefficient bound violated")
    _emit(
        args,
        [{"q": q, "deg": 2 * g + 1, "population": population, "max_root_deviation": worst, "weil_bounds_ok": bounds}],
        time.perf_counter() - t0,
    )
    return 0


def cmd_diagonal(args) -> int:
    q = _need_q(args)
    if args.X is None:
        raise ConfigError("need --X")
    t0 = time.perf_counter()
    rep = diagonal_sum(q, args.X)
    _emit(
        args,
        [
            {
                "q": q,
                "X": rep.X,
                "exact": rep.exact,
                "series_route": rep.series_route,
                "predicted": rep.predicted,
                "diff": rep.diff,
                "c_ratio": rep.c_ratio,
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_gf_check(args) -> int:
    q = _need_q(args)
    t0 = time.perf_counter()
    ok = divisor_gf_check(q, args.n_max)
    if not ok:
        raise InvariantError(f"generating-function routes disagree at q={q}")
    _emit(args, [{"q": q, "n_max": args.n_max, "routes_agree": ok}], time.perf_counter() - t0)
    return 0


def cmd_weil_check(args) -> int:
    q = _need_q(args)
    g = _genus(args)
    t0 = time.perf_counter()
    if args.f:
        rep = weil_avg_check(q, g, Poly.make(_int_list(args.f), q))
        _emit(
            args,
            [
                {
                    "q": q,
                    "g": g,
                    "f": ";".join(map(str, _int_list(args.f))),
                    "census": rep.census,
                    "average": rep.average,
                    "bound": rep.bound,
                    "ratio": rep.ratio,
                }
            ],
            time.perf_counter() - t0,
        )
        return 0
    sweep = weil_ratio_sweep(q, g)
    if not sweep.square_controls_exceed:
        raise InvariantError("a square control landed under the bound; the hypothesis check is broken")
    _emit(
        args,
        [
            {
                "q": q,
                "g": g,
                "max_ratio": sweep.max_ratio,
                "argmax_code": sweep.argmax_code,
                "square_controls_exceed": sweep.square_controls_exceed,
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_tail_e1(args) -> int:
    q = _need_q(args)
    g = _genus(args)
    if args.X is None:
        raise ConfigError("need --X")
    t0 = time.perf_counter()
    rep = tail_sum_E1(q, g, args.X)
    if not rep.decomposition_ok:
        raise InvariantError("head + tail failed to reproduce the full sum")
    a, b, e = rep.tail.total.as_triple()
    _emit(
        args,
        [
            {
                "q": q,
                "g": g,
                "X": rep.X,
                "census": rep.census,
                "tail_a": a,
                "tail_b": b,
                "tail_e": e,
                "tail_float": rep.tail_float,
                "predicted": rep.predicted,
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_euler_check(args) -> int:
    q = _need_q(args)
    t0 = time.perf_counter()
    rep = euler_coefficient_check(q, args.D)
    _emit(
        args,
        [
            {
                "q": q,
                "D": rep.truncation_degree,
                "A_value": rep.A_value,
                "zeta_target": rep.zeta_target,
                "a_ok": rep.a_ok,
                "derivative_exact": rep.derivative_exact,
                "derivative_target": rep.derivative_target,
                "derivative_ok": rep.derivative_ok,
                "identity_lhs": rep.coefficient_identity_lhs,
                "identity_rhs": rep.coefficient_identity_rhs,
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_ec_lpoly(args) -> int:
    E = _resolve_curve(args)
    t0 = time.perf_counter()
    coeffs, eps = ec_l_polynomial(E)
    _emit(
        args,
        [
            {
                "q": E.q,
                "A": ";".join(map(str, E.A.coeffs)),
                "B": ";".join(map(str, E.B.coeffs)),
                "conductor_deg": E.n_conductor,
                "inf_reduction": E.inf_type,
                "twist_inf_reduction": E.twist_inf_type,
                "eps": eps,
                "coeffs": ";".join("{}:{}:{}".format(*c.as_triple()) for c in coeffs),
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_ec_twist(args) -> int:
    E = _resolve_curve(args)
    if not args.P:
        raise ConfigError("need --P")
    P = Poly.make(_int_list(args.P), E.q)
    t0 = time.perf_counter()
    rec = twist_l_polynomial(E, P)
    _emit(
        args,
        [
            {
                "q": E.q,
                "P": ";".join(map(str, P.coeffs)),
                "eps": rec.epsilon,
                "eps_deg": rec.epsilon_deg,
                "rank": rec.rank,
                "int_coeffs": ";".join(map(str, rec.int_coeffs)),
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def _twist_sweep_estimate(E: EllipticCurve, g: int) -> float:
    """Dominant cost is the trace pass over all primes up to the half-range
    H: per-prime point counting at degree d is ~q^{2d} d elementary cell
    operations, but curves with constant A and linear B take the bulk
    whole-degree path at ~q^d d cost.  The per-twist character sweeps add
    ~(number of conductors) * sum q^n for n <= H."""
    q = E.q
    D = E.n_conductor + 2 * (2 * g + 1) - (len(E.twist_inf_factor) - 1)
    H = min(D // 2 + 1, D)
    bulk = E.A.deg <= 0 and E.B.deg == 1
    trace = sum((q**d * d * 200 if bulk else q ** (2 * d) * d * 3.5) for d in range(1, H + 1))
    sweeps = q ** (2 * g + 1) / (2 * g + 1) * sum(q**n for n in range(1, H + 1)) * 25
    return (trace + sweeps) * 1e-8


def _gate(est: float, budget: float | None, what: str) -> None:
    if est > 120 and (budget is None or est > budget):
        raise FeasibilityError(f"{what} estimated {est:.0f} s (pass --budget-seconds to authorize)", est)


def cmd_ec_moment(args) -> int:
    E = _resolve_curve(args)
    g = _genus(args)
    _gate(_twist_sweep_estimate(E, g), args.budget_seconds, f"twist sweep at degree {2 * g + 1}")
    cache = _cache_path(args, f"twists_q{E.q}.jsonl")
    t0 = time.perf_counter()
    records, engine = _twist_population(E, g, cache)
    rep = ec_first_derivative_moment(E, g, D_trunc=args.D, engine=engine, records=records)
    _emit(
        args,
        [
            {
                "q": rep.q,
                "g": rep.g,
                "census": rep.census,
                "terms": rep.terms,
                "odd_sign_terms": rep.odd_sign_terms,
                "empirical": rep.empirical,
                "empirical_float": rep.empirical_float,
                "predicted": rep.predicted,
                "ratio": rep.ratio,
                "sign": rep.sign,
                "exception_case": rep.exception_case,
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_rank_search(args) -> int:
    E = _resolve_curve(args)
    g = _genus(args)
    _gate(_twist_sweep_estimate(E, g), args.budget_seconds, f"rank search at degree {2 * g + 1}")
    t0 = time.perf_counter()
    res = rank_one_search(E, g)
    _emit(
        args,
        [
            {
                "q": E.q,
                "g": g,
                "witness": ";".join(map(str, res.witness.coeffs)) if res.witness else "none",
                "histogram": ";".join(f"{r}:{n}" for r, n in res.histogram.items()),
                "skipped_bad": res.skipped_bad,
                "exception_case": res.exception_case,
            }
        ],
        time.perf_counter() - t0,
    )
    return 0


def cmd_bound_spotcheck(args) -> int:
    from math import pi

    q = _need_q(args)
    g = _genus(args)
    thetas = _float_list(args.thetas) if args.thetas else [0.0, pi / 2, pi, 3 * pi / 2]
    t0 = time.perf_counter()
    rows = moment_bound_spotcheck(q, g, thetas)
    _emit(
        args,
        [{"theta": r.theta, "empirical": r.empirical, "reference": r.reference} for r in rows],
        time.perf_counter() - t0,
    )
    return 0


# -- wiring ----------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ffmoments", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_text, **extra_flags):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--q", type=int, default=None, help="field size (odd prime)")
        sp.add_argument("--g", type=int, default=None, help="genus; conductor degree is 2g+1")
        sp.add_argument("--deg", type=int, default=None, help="degree (conductor or census)")
        sp.add_argument("--threads", type=int, default=1)
        sp.add_argument("--cache", type=str, default=None, help=f"cache file (default dir: ${CACHE_DIR_ENV})")
        sp.add_argument("--out", type=str, default=None, help="artifact path (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")
        sp.add_argument("--budget-seconds", dest="budget_seconds", type=float, default=None)
        for flag, kw in extra_flags.items():
            sp.add_argument(flag, **kw)
        sp.set_defaults(func=fn)
        return sp

    add("primes", cmd_primes, "census of monic irreducibles: closed form vs sieve enumeration")
    add(
        "lpoly",
        cmd_lpoly,
        "build and verify one quadratic-character L-polynomial",
        **{
            "--P": dict(type=str, default=None, help="conductor coefficients, constant first"),
            "--orientation": dict(choices=("f_over_P", "P_over_f"), default="f_over_P"),
            "--method": dict(choices=("table", "jacobi", "euler"), default="table"),
        },
    )
    add("sweep-moment2", cmd_sweep_moment2, "second moment of central values over all conductors of degree 2g+1")
    add("afe-check", cmd_afe_check, "exact finite functional-equation identities over a full conductor population")
    add("rh-check", cmd_rh_check, "root locations and coefficient bounds over a full conductor population")
    add("diagonal", cmd_diagonal, "diagonal divisor sum: enumeration vs series vs closed form", **{"--X": dict(type=int, default=None)})
    add("gf-check", cmd_gf_check, "divisor generating-function coefficients, two integer routes", **{"--n-max": dict(dest="n_max", type=int, default=12)})
    add("weil-check", cmd_weil_check, "character-average decay ratio R(f), single f or full sweep", **{"--f": dict(type=str, default=None, help="numerator coefficients, constant first")})
    add("tail-e1", cmd_tail_e1, "tail of the divisor-weighted first sum past degree 2X", **{"--X": dict(type=int, default=None)})
    add("euler-check", cmd_euler_check, "truncated Euler products and the exact coefficient identity", **{"--D": dict(type=int, default=12)})

    curve_flags = {
        "--curve": dict(type=str, default=None, help=f"named sample curve: {', '.join(sorted(SAMPLE_CURVES))}"),
        "--A": dict(type=str, default=None, help="short-model A coefficients, constant first"),
        "--B": dict(type=str, default=None, help="short-model B coefficients, constant first"),
    }
    add("ec-lpoly", cmd_ec_lpoly, "L-polynomial and sign of a sample elliptic curve", **curve_flags)
    add("ec-twist", cmd_ec_twist, "one quadratic twist: coefficients, sign, rank", **curve_flags, **{"--P": dict(type=str, default=None)})
    add("ec-moment", cmd_ec_moment, "first derivative moment over odd-sign twists", **curve_flags, **{"--D": dict(type=int, default=6, help="Euler truncation degree")})
    add("rank-search", cmd_rank_search, "scan twists for a rank-one witness and the rank histogram", **curve_flags)
    add("bound-spotcheck", cmd_bound_spotcheck, "shifted second moment on the critical circle vs the envelope", **{"--thetas": dict(type=str, default=None, help="comma-separated angles in [0, 2pi)")})
    return p


def _fail(code: int, kind: str, message: str, **extra) -> int:
    rec = {"error": kind, "message": message}
    rec.update(extra)
    print(json.dumps(rec, sort_keys=True), file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        return _fail(2, "config", str(e))
    except FeasibilityError as e:
        return _fail(3, "infeasible", str(e), estimate_seconds=e.estimate_seconds)
    except InvariantError as e:
        return _fail(4, "invariant", str(e))
    except CacheError as e:
        return _fail(5, "cache", str(e))
    except ValueError as e:
        return _fail(2, "config", str(e))
    except OSError as e:
        return _fail(2, "config", str(e))


if __name__ == "__main__":
    raise SystemExit(main())
