"""Acceptance gate: one test per shipped claim, full populations, pinned
tolerances and runtime budgets.

Each test name states the claim; a FAILED line here means the claim does
not hold as stated on the computed evidence, never that the computation
was skipped or sampled down.  Frozen regression values live in
tests/fixtures/v1/ and are regenerated only by scripts/generate_fixtures.py.
"""

import json
import time
from fractions import Fraction

from conftest import FIXDIR, load_fixture

from ffmoments.analytics import (
    diagonal_sum,
    divisor_gf_check,
    ec_first_derivative_moment,
    euler_coefficient_check,
    second_moment,
    weil_ratio_sweep,
)
from ffmoments.dirichlet import (
    afe_central_identity,
    afe_square_check,
    coefficient_bound_ok,
    rh_roots,
    verify_functional_equation,
)
from ffmoments.elliptic import central_derivative, rank_one_search
from ffmoments.ffpoly import count_irreducible, enumerate_irreducible
from ffmoments import tables


def _canon(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def test_c01_census_matches_closed_form_under_10s():
    tables._sieves.clear()  # time cold builds, not cache hits
    t0 = time.perf_counter()
    for q in (3, 5, 7):
        sieve = tables.get_sieve(q, 8)
        for n in range(1, 9):
            enumerated = len(sieve.irreducible_codes(n))
            assert enumerated == count_irreducible(q, n), (q, n)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0, f"census took {elapsed:.2f} s"


def test_c02_functional_equation_exact_on_full_populations(dirichlet_pops):
    for q, degs in ((3, (3, 5, 7)), (5, (3, 5))):
        for d in degs:
            pop, _ = dirichlet_pops[(q, d)]
            assert len(pop) == count_irreducible(q, d)  # no sampling
            for L in pop:
                assert verify_functional_equation(L), (q, d, L.P)
    build = sum(dirichlet_pops[k][1] for k in ((3, 3), (3, 5), (3, 7), (5, 3), (5, 5)))
    assert build < 300.0, f"population sweeps took {build:.1f} s"


def test_c03_afe_identities_exact(dirichlet_pops):
    t0 = time.perf_counter()
    for d in (3, 5):
        pop, _ = dirichlet_pops[(3, d)]
        for L in pop:
            assert afe_square_check(L), ("coefficientwise", d, L.P)
    pop7, _ = dirichlet_pops[(3, 7)]
    assert len(pop7) == 312
    for L in pop7:
        assert afe_central_identity(L), ("u=1 specialization", L.P)
    elapsed = time.perf_counter() - t0 + dirichlet_pops[(3, 7)][1]
    assert elapsed < 600.0, f"AFE checks took {elapsed:.1f} s"


def test_c04_rh_roots_within_1e9_and_exact_weil_bound(dirichlet_pops):
    worst = 0.0
    for d in (1, 3, 5, 7):
        pop, _ = dirichlet_pops[(3, d)]
        for L in pop:
            _, dev = rh_roots(L)
            worst = max(worst, dev)
            assert coefficient_bound_ok(L), (d, L.P)
    assert worst < 1e-9, f"worst root deviation {worst:.3e}"


def test_c05_gf_integer_identity_and_stable_diagonal_constant():
    for q in (3, 5):
        assert divisor_gf_check(q, 12), f"series identity fails at q={q}"
        ratios = [abs(diagonal_sum(q, X).c_ratio) for X in range(3, 9)]
        assert all(r > 0 for r in ratios)
        spread = max(ratios) / min(ratios)
        assert spread <= 2, f"diagonal constant drifts by {float(spread):.3f}x at q={q}"


def test_c06_second_moment_trend_and_thread_reproducibility(moment_reports_q3):
    reports = moment_reports_q3
    # (a) exact value identical across thread counts, and byte-identical
    # to the frozen fixture
    recomputed = {}
    for g, rep in reports.items():
        rep2 = second_moment(3, g, threads=2)
        assert rep2.empirical.total == rep.empirical.total, f"thread count changed g={g}"
        assert rep2.census == rep.census
        a, b, e = rep.empirical.total.as_triple()
        recomputed[str(g)] = {
            "census": rep.census,
            "total": [a, b, e],
            "empirical_float": rep.empirical_float,
        }
    frozen = (FIXDIR / "second_moment_q3.json").read_text()
    assert _canon(recomputed) == frozen, "exact moments diverge from frozen fixture"
    # (b) adding the secondary term strictly improves the fit for g >= 3
    for g in (3, 4):
        rep = reports[g]
        with_sec = abs(rep.empirical_float - rep.predicted_main - rep.predicted_secondary)
        without = abs(rep.empirical_float - rep.predicted_main)
        assert with_sec < without, f"secondary term does not improve the fit at g={g}"
    # (c) residual scaled by g^2 shrinks from g=2 to g=4
    r2 = abs(reports[2].empirical_float - reports[2].predicted_main - reports[2].predicted_secondary) / 4
    r4 = abs(reports[4].empirical_float - reports[4].predicted_main - reports[4].predicted_secondary) / 16
    assert r4 < r2, f"residual/g^2 grew: {r4:.4f} at g=4 vs {r2:.4f} at g=2"
    total_runtime = sum(rep.runtime_seconds for rep in reports.values())
    assert total_runtime < 7200.0


def test_c07_weil_average_decay_consistency():
    sweeps = {g: weil_ratio_sweep(3, g) for g in (1, 2, 3)}
    for g, s in sweeps.items():
        assert s.square_controls_exceed, f"square control fell below bound at g={g}"
    recomputed = {
        str(g): {
            "max_ratio": s.max_ratio,
            "argmax_code": s.argmax_code,
            "square_controls_exceed": s.square_controls_exceed,
        }
        for g, s in sweeps.items()
    }
    frozen = (FIXDIR / "weil_q3.json").read_text()
    assert _canon(recomputed) == frozen, "sweep maxima diverged from fixture"
    # decay consistency clause, asserted as stated: the g=3 maximum must
    # stay within twice the g=1 maximum.  The g=1 grid (non-square f of
    # degree <= 2 against the 8 cubic conductors) averages to exactly zero
    # for every admissible f, so this inequality cannot hold unless the
    # larger grids vanish too; the measured maxima are reported verbatim.
    assert sweeps[3].max_ratio <= 2 * sweeps[1].max_ratio, (
        f"max R(g=3) = {sweeps[3].max_ratio} > 2 x max R(g=1) = "
        f"{2 * sweeps[1].max_ratio}; the g=1 grid vanishes identically "
        "(its character L-polynomials have at most one inverse root, pinned "
        "to {-1, 0, 1} by the root bound, which forces zero prime sums)"
    )


def test_c08_euler_coefficient_identity_and_truncated_products():
    t0 = time.perf_counter()
    for q in (3, 5, 7, 11, 13, 17, 19, 23, 29, 31):
        r = euler_coefficient_check(q, 4)
        assert r.coefficient_identity_lhs == r.coefficient_identity_rhs == Fraction(3, 2) + Fraction(1, 2 * q)
    for q in (3, 5):
        r = euler_coefficient_check(q, 12)
        assert abs(r.A_value - (1 - 1 / q)) < 1e-6, f"A product off at q={q}"
        dev = abs(r.derivative_exact - r.derivative_target)
        assert dev < Fraction(1, 10**6), (
            f"derivative sum at q={q}, truncation 12: exact deviation "
            f"{float(dev):.6e} exceeds 1e-6 (the omitted degree-13 block "
            f"alone contributes ~1.25e-6 at q=3)"
        )
    elapsed = time.perf_counter() - t0
    assert elapsed < 60.0, f"Euler checks took {elapsed:.1f} s"


def test_c09_twist_structure_exact_on_full_populations(curves, twist_pops):
    profiles = set()
    total_seconds = 0.0
    fields = set()
    for name in ("e1", "e6", "e4"):
        E, eng = curves[name]
        q = E.q
        fields.add(q)
        profiles.add((q, len(E.add_primes), len(E.mult_primes), E.M.deg))
        assert eng.eps_E in (-1, 1)
        for g in (1, 2):
            recs, secs = twist_pops(name, g)
            total_seconds += secs
            expected = sum(
                1
                for P in enumerate_irreducible(q, 2 * g + 1)
                if not (E.delta % P).is_zero
            )
            assert len(recs) == expected  # every coprime conductor, no sampling
            eps_deg_values = set()
            for rec in recs:
                D = E.n_conductor + 2 * rec.P.deg
                assert len(rec.int_coeffs) == D + 1  # degree formula, exact
                assert rec.epsilon in (-1, 1)
                assert all(isinstance(c, int) for c in rec.int_coeffs)
                for n in range(D // 2 + 1):  # twisted functional equation
                    assert rec.int_coeffs[D - n] == rec.epsilon * rec.int_coeffs[n] * q ** (D - 2 * n)
                assert (-1) ** rec.rank == rec.epsilon  # rank parity
                eps_deg_values.add(rec.epsilon_deg)
            assert len(eps_deg_values) == 1, f"sign not constant: {name} g={g}"
    assert len(profiles) == 3 and fields == {5, 7}
    frozen = load_fixture("curves.json")
    for name in ("e1", "e6", "e4"):
        E, eng = curves[name]
        assert frozen[name]["n_conductor"] == E.n_conductor
        assert frozen[name]["eps"] == eng.eps_E
        assert frozen[name]["untwisted"] == list(eng.l_coeffs_int)
    assert total_seconds < 1800.0, f"twist sweeps took {total_seconds:.0f} s"


def test_c10_derivative_dual_route_identity_on_all_odd_twists(curves, twist_pops):
    checked = 0
    for name in ("e1", "e6", "e4"):
        E, _ = curves[name]
        for g in (1, 2):
            recs, _ = twist_pops(name, g)
            for rec in recs:
                if rec.epsilon != -1:
                    continue
                # raises if the weighted sum and the formal derivative differ
                val = central_derivative(E, rec)
                assert (rec.rank == 1) == (not val.is_zero)
                checked += 1
    assert checked > 2000, f"population unexpectedly small: {checked}"


def test_c11_rank_one_witness_and_frozen_histograms(curves):
    E, eng = curves["e1"]
    assert not E.M.is_one
    recomputed = {}
    for g in (1, 2):
        res = rank_one_search(E, g, engine=eng)
        assert res.witness is not None, f"no rank-1 twist found at g={g}"
        recomputed[str(g)] = {
            "witness": list(res.witness.coeffs),
            "histogram": {str(k): v for k, v in sorted(res.histogram.items())},
            "skipped": res.skipped_bad,
            "exception": res.exception_case,
        }
    frozen = (FIXDIR / "rank1_e1.json").read_text()
    assert _canon(recomputed) == frozen, "witness or histogram diverged from fixture"


def test_c12_derivative_moment_trend_reproduces_fixture(curves, twist_pops):
    E, eng = curves["e1"]
    recomputed = {}
    for g in (1, 2):
        recs, _ = twist_pops("e1", g)
        rep = ec_first_derivative_moment(E, g, engine=eng, records=recs)
        assert not rep.exception_case
        assert rep.predicted > 0
        # odd-sign filter: +1 twists contribute exactly zero to the sum
        odd_total = sum(
            central_derivative(E, rec).rational() for rec in recs if rec.epsilon == -1
        )
        assert rep.empirical == odd_total / rep.census
        recomputed[str(g)] = {
            "census": rep.census,
            "terms": rep.terms,
            "odd_sign_terms": rep.odd_sign_terms,
            "empirical": str(rep.empirical),
            "empirical_float": rep.empirical_float,
            "predicted": rep.predicted,
            "ratio": rep.ratio,
            "sign": rep.sign,
            "exception": rep.exception_case,
        }
    frozen = (FIXDIR / "ec_moment_e1.json").read_text()
    assert _canon(recomputed) == frozen, "derivative moment diverged from fixture"
