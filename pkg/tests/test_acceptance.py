"""Acceptance gate: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline, or as a
script. The lines are also collected into the terminal summary.
"""

import math

import pytest

from helpers import ACCEPTANCE_LINES, full_scan
from signedturan.constructions import gamma_construction
from signedturan.graph import are_switching_isomorphic
from signedturan.search import c3_bounds, c3_reports_from, edges_report, index_report, lemma_summary
from signedturan.spectra import gamma_cubic
from signedturan.suites import (
    gamma_checks,
    nonneg_eigenvector_suite,
    perturbation_suite,
)

TOL = 1e-9
GRID = [(4, 3), (5, 3), (5, 4), (6, 3), (6, 4), (6, 5)]
PAIRS = [(n, r) for n in range(5, 31) for r in range(3, n)]


def record(key, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {key}: {detail}"
    ACCEPTANCE_LINES[key] = line
    print(line)
    return ok


def test_criterion_1_edge_bound():
    rows = []
    for n, r in GRID:
        rep = edges_report(full_scan(n), r)
        rows.append((n, r, rep.best, n * (n - 1) // 2 - (n - r), rep.holds))
    ok = all(best == expected and isinstance(best, int) and holds for _, _, best, expected, holds in rows)
    record("1", ok, "max edges " + ", ".join(f"({n},{r})={b}/{e}" for n, r, b, e, _ in rows))
    assert ok, rows


def test_criterion_2_index_bound():
    rows = []
    for n, r in GRID:
        rep = index_report(full_scan(n), r)
        gamma = gamma_construction(n, r)
        iso = all(are_switching_isomorphic(g, gamma) for g in rep.maximizers)
        err = abs(rep.best - rep.expected)
        rows.append((n, r, rep.best, err, iso, len(rep.maximizers)))
    ok = all(err <= TOL and iso and classes == 1 for _, _, _, err, iso, classes in rows)
    worst = max(err for _, _, _, err, _, _ in rows)
    record("2", ok, f"max index matches Gamma on {len(rows)} cases, worst error {worst:.1e}, "
                    "every maximizer switching-isomorphic to Gamma")
    assert ok, rows


def test_criterion_3_closed_form():
    rows = [gamma_checks(n, r, structural=n <= 10) for n, r in PAIRS]
    keys = ("root_matches", "in_range", "charpoly_identity", "quotient_matches", "f_nonpositive_at_n_minus_2")
    bad = [(row["n"], row["r"], k) for row in rows for k in keys if not row[k]]
    worst = max(row["abs_error"] for row in rows)
    ok = not bad and worst <= TOL
    record("3a", ok, f"{len(rows)} pairs n=5..30: root error <= {worst:.1e}, n-2 <= index < n-1, "
                     "char_poly(Q1) = (x+1)f exactly, f(n-2) <= 0")
    assert ok, bad[:10]


def test_criterion_3_exact_value_of_f_at_n_minus_2():
    # exact value from the coefficients, in integer arithmetic
    exact = {(n, r): gamma_cubic(n, r)(n - 2) for n, r in PAIRS}
    assert all(v == -((r - 3) ** 2) for (n, r), v in exact.items())
    stated = [(n, r) for (n, r), v in exact.items() if v != -(r - 3)]
    ok = not stated
    detail = (
        f"stated f(n-2) = -(r-3) holds at {len(PAIRS) - len(stated)}/{len(PAIRS)} pairs; "
        f"exact value is -(r-3)^2, first mismatch (n,r)={stated[0] if stated else None}"
    )
    record("3b", ok, detail)
    assert ok, detail


def test_criterion_4_negative_triangle_free():
    rows = []
    for n in (4, 5, 6):
        e_rep, r_rep = c3_reports_from(full_scan(n))
        edge_bound, radius_bound = c3_bounds(n)
        assert radius_bound == (math.sqrt(n * n - 8) + n - 4) / 2
        rows.append((n, e_rep.best, edge_bound, r_rep.best, radius_bound))
    ok = all(e == eb and abs(rho - rb) <= TOL for _, e, eb, rho, rb in rows)
    record("4", ok, ", ".join(f"n={n}: e={e}/{eb} rho={rho:.10f}/{rb:.10f}" for n, e, eb, rho, rb in rows))
    assert ok, rows


def test_criterion_5_base_cases():
    rows = []
    for n in (5, 6):
        res = full_scan(n)
        e_rep = edges_report(res, 3)
        i_rep = index_report(res, 3)
        unique = len(i_rep.maximizers) == 1 and are_switching_isomorphic(
            i_rep.maximizers[0], gamma_construction(n, 3)
        )
        rows.append((n, e_rep.best, n * (n - 1) // 2 - (n - 3), i_rep.best, unique))
    ok = all(e == eb and abs(lam - (n - 2)) <= TOL and u for n, e, eb, lam, u in rows)
    record("5", ok, ", ".join(f"n={n}: e={e}/{eb} index={lam:.10f} unique={u}" for n, e, eb, lam, u in rows))
    assert ok, rows


def test_criterion_6_perturbations():
    res = perturbation_suite(trials=1000, seed=0)
    kinds = res["kinds"]
    ok = all(
        s["trials"] == 1000 and not s["monotone_failures"] and s["max_rayleigh_error"] <= TOL
        for s in kinds.values()
    )
    detail = "; ".join(
        f"{k}: held {s['precondition_held']}/1000 min delta {s['min_delta_when_held']:.1e} "
        f"rayleigh err {s['max_rayleigh_error']:.1e}"
        for k, s in kinds.items()
    )
    record("6", ok, detail)
    assert ok, detail


def test_criterion_7_lemma_suite():
    summaries = [lemma_summary(full_scan(n)) for n in range(1, 7)]
    nonneg = nonneg_eigenvector_suite(trials=1000, seed=0)
    ok = all(s["passed"] for s in summaries) and nonneg["passed"]
    classes = sum(s["classes_checked"] for s in summaries)
    worst = min(v for s in summaries for v in s["worst_slack"].values())
    record("7", ok, f"{classes} classes n<=6, no bound violated (min slack {worst:.1e}), "
                    f"index n-1 only at the balanced complete graph; non-negative eigenvector "
                    f"on {nonneg['trials']} random graphs")
    assert ok, [s["violation_count"] for s in summaries]


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-s", "-q"]))
