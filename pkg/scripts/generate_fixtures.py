"""Regenerate the frozen regression fixtures under tests/fixtures/v1/.

    python3 scripts/generate_fixtures.py

Each value is measured once from a full population sweep and then frozen;
the test suite recomputes the same quantities and compares against these
files byte for byte.  Regenerating on an unchanged tree must be a no-op.
"""

import json
import sys
import time
from pathlib import Path

from ffmoments.analytics import (
    ec_first_derivative_moment,
    second_moment,
    weil_ratio_sweep,
)
from ffmoments.elliptic import (
    TwistEngine,
    build_curve,
    ec_l_polynomial,
    rank_one_search,
    twist_l_polynomial,
)
from ffmoments.ffpoly import enumerate_irreducible

OUT = Path(__file__).resolve().parent.parent / "tests" / "fixtures" / "v1"

CURVES = {
    "e1": (5, (1,), (0, 1)),
    "e6": (5, (0, 1), (1,)),
    "e4": (7, (1,), (0, 1)),
}


def dump(name: str, obj) -> None:
    OUT.mkdir(parents=True, exist_ok=True)
    path = OUT / name
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n")
    print(f"wrote {path}")


def main() -> int:
    t0 = time.time()

    moments = {}
    for g in (1, 2, 3, 4):
        r = second_moment(3, g)
        a, b, e = r.empirical.total.as_triple()
        moments[str(g)] = {
            "census": r.census,
            "total": [a, b, e],
            "empirical_float": r.empirical_float,
        }
    dump("second_moment_q3.json", moments)

    weil = {}
    for g in (1, 2, 3):
        s = weil_ratio_sweep(3, g)
        weil[str(g)] = {
            "max_ratio": s.max_ratio,
            "argmax_code": s.argmax_code,
            "square_controls_exceed": s.square_controls_exceed,
        }
    dump("weil_q3.json", weil)

    curves = {}
    engines = {}
    for name, (q, A, B) in CURVES.items():
        E = build_curve(q, A, B)
        eng = TwistEngine(E)
        _, eps = ec_l_polynomial(E, eng)
        engines[name] = (E, eng)
        curves[name] = {
            "q": q,
            "A": list(A),
            "B": list(B),
            "n_conductor": E.n_conductor,
            "eps": eps,
            "untwisted": list(eng.l_coeffs_int),
            "deg_M": E.M.deg,
            "n_additive": len(E.add_primes),
            "n_multiplicative": len(E.mult_primes),
        }
    dump("curves.json", curves)

    E, eng = engines["e1"]
    ranks = {}
    for g in (1, 2):
        res = rank_one_search(E, g, engine=eng)
        ranks[str(g)] = {
            "witness": list(res.witness.coeffs) if res.witness else None,
            "histogram": {str(k): v for k, v in sorted(res.histogram.items())},
            "skipped": res.skipped_bad,
            "exception": res.exception_case,
        }
    dump("rank1_e1.json", ranks)

    ec = {}
    for g in (1, 2):
        recs = [
            twist_l_polynomial(E, P, engine=eng)
            for P in enumerate_irreducible(E.q, 2 * g + 1)
            if not (E.delta % P).is_zero
        ]
        r = ec_first_derivative_moment(E, g, engine=eng, records=recs)
        ec[str(g)] = {
            "census": r.census,
            "terms": r.terms,
            "odd_sign_terms": r.odd_sign_terms,
            "empirical": str(r.empirical),
            "empirical_float": r.empirical_float,
            "predicted": r.predicted,
            "ratio": r.ratio,
            "sign": r.sign,
            "exception": r.exception_case,
        }
    dump("ec_moment_e1.json", ec)

    print(f"total {time.time() - t0:.1f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
