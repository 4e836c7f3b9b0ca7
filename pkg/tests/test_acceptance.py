"""Acceptance suite: each criterion at its stated tolerance, one pass/fail line each."""

from __future__ import annotations

import random
import time
from fractions import Fraction
from functools import lru_cache

import pytest

from symsos import approx, duals
from symsos import blekherman as bk
from symsos import pstellensatz as ps
from symsos import quantum as q
from symsos.duals import random_poly
from symsos.hypercube import brute_weight_average, fk_poly, reduce_multilinear

THIRDS = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))


def _knapsack_cells():
    for n in range(1, 11):
        for k in range(0, 4):
            if 2 * k <= n:
                for frac in THIRDS:
                    yield n, k, k + frac


def test_criterion_1_knapsack_refutations(criterion):
    start = time.perf_counter()
    bad = []
    for n, k, r in _knapsack_cells():
        check = ps.verify_refutation(ps.knapsack_refutation(n, k, r, expand=True), "expand")
        # with fewer than k+2 variables the sos part cancels and the degree drops
        degree_ok = check.degree == 2 * k + 4 if k + 2 <= n else check.degree <= 2 * k + 4
        if not (check.ok and degree_ok):
            bad.append((n, k, r, check.degree))
    elapsed = time.perf_counter() - start
    ok = criterion("1", not bad and elapsed < 60, f"{elapsed:.1f}s, failures={bad[:3]}")
    assert ok


def _grig_cells():
    for n in range(2, 13):
        for k in range(0, n):
            if 2 * (k + 1) > n:
                continue
            fracs = THIRDS if n <= 10 else (Fraction(1, 2),)
            for frac in fracs:
                yield n, k, k + frac


def test_criterion_2_grigoriev_duality(criterion):
    bad, tight = [], 0
    for n, k, r in _grig_cells():
        rep = duals.grig_property_report(n, r, k, trials=200, seed=n * 100 + k)
        if not rep.ok:
            bad.append((n, k, r, rep.failures[:1]))
            continue
        if n <= 10 and k <= 3:
            # G_r is nonnegative on squares of degree <= k+1 and vanishes on the
            # ideal, so no refutation has degree below 2k+4; the construction
            # reaches 2k+4
            ref = ps.verify_refutation(ps.knapsack_refutation(n, k, r, expand=True), "expand")
            if ref.ok and ref.degree == 2 * k + 4:
                tight += 1
            else:
                bad.append((n, k, r, "not tight"))
    ok = criterion("2", not bad and tight > 0, f"tight cells={tight}, failures={bad[:2]}")
    assert ok


def test_criterion_3_blekherman_round_trip(criterion):
    bad = []
    for n in range(1, 9):
        for t in range(0, n // 2 + 1):
            rng = random.Random(1000 * n + t)
            for _ in range(200):
                p = reduce_multilinear(random_poly(n, t, rng, terms=5))
                d = bk.blekherman_decompose([p], t)
                square = reduce_multilinear(p * p)
                rec = d.recombine()
                if not (
                    bk.verify_blekherman(d, bk.sym_square_target([p])).ok
                    and all(term.ldl.psd for term in d.terms)
                    and all(rec(w) == brute_weight_average(square, w) for w in range(n + 1))
                ):
                    bad.append((n, t, p))
                    break
    for n in range(1, 11):
        for t in range(0, n // 2 + 1):
            if not (bk.verify_johnson_spectrum(n, t) and bk.verify_kernel_basis(n, t)):
                bad.append(("spectrum/kernel", n, t))
            if len(bk.kernel_basis(n, t)) != bk.kernel_dimension(n, t):
                bad.append(("kernel dimension", n, t))
    ok = criterion("3", not bad, f"failures={bad[:2]}")
    assert ok


L1_CELLS = [(513, Fraction(1, 4)), (513, Fraction(1249, 5000)), (1025, Fraction(1, 4)), (1025, Fraction(6, 25))]


@lru_cache(maxsize=None)
def _l1(n, delta):
    return approx.l1_approx_build(n, delta)


@pytest.mark.slow
def test_criterion_4a_l1_error_within_budget(criterion):
    rows = []
    for n, delta in L1_CELLS:
        cert = _l1(n, delta)
        rows.append((n, delta, cert.l1_error <= delta * 2**n, float(cert.l1_error / 2**n)))
    checks = approx.verify_l1_cert(_l1(*L1_CELLS[0]))
    ok = all(r[2] for r in rows) and all(checks.values())
    detail = ", ".join(f"n={n} delta={d}: avg error {e:.4f}" for n, d, _, e in rows)
    assert criterion("4a", ok, detail)


@pytest.mark.slow
@pytest.mark.xfail(
    strict=True,
    reason="the construction's half-degree exceeds the stated ceiling with constant 3 "
    "(it fits the ceiling with constant 6); recorded in the decisions ledger",
)
def test_criterion_4b_l1_half_degree_claim(criterion):
    rows = [(n, delta, _l1(n, delta).half_degree, approx.l1_degree_claim(n, delta)) for n, delta in L1_CELLS]
    ok = all(approx.l1_degree_within_claim(n, delta, d) for n, delta, d, _ in rows)
    detail = ", ".join(f"n={n} delta={delta}: d*={d} claim={c}" for n, delta, d, c in rows)
    assert criterion("4b", ok, detail)


def test_criterion_5_lower_bound_witness(criterion):
    bad = []
    for n in range(3, 14, 2):
        pd = duals.pseudo_density_build(n)
        f = fk_poly(n, n // 2)
        a = abs(pd.ratio)
        for delta in (a / 2, a * Fraction(999, 1000)):
            if not duals.witness_check(duals.witness_from_density(pd, delta), f).ok:
                bad.append((n, delta))
        if duals.witness_check(duals.witness_from_density(pd, a), f).correlation_ok:
            bad.append((n, "threshold"))
    pd3 = duals.pseudo_density_build(3)
    exact = (pd3.e_df, pd3.sup, pd3.ratio) == (Fraction(-1, 4), Fraction(3, 2), Fraction(-1, 6))
    # -1/6 < -1/(4 sqrt 3)  <=>  (1/6)^2 > 1/48 with both sides negative
    beats = pd3.ratio < 0 and pd3.ratio**2 > Fraction(1, 48) and pd3.beats_sqrt_bound
    ok = criterion("5", not bad and exact and beats, f"n=3: E[Df]={pd3.e_df}, sup={pd3.sup}, ratio={pd3.ratio}")
    assert ok


def test_criterion_6_linf_bound(criterion):
    values = duals.appendix_d_A(1) == Fraction(5, 4) and duals.appendix_d_A(2) == Fraction(89, 64)
    bounds = [duals.linf_error_lower(n) for n in range(3, 52, 2)]
    identity = all(b.identity_ok for b in bounds)
    gaps = [b.display_relative_gap for b in bounds]
    gap_ok = gaps[0] <= 0.2 and gaps[-1] < 0.02 and all(x >= y for x, y in zip(gaps, gaps[1:]))
    ok = criterion(
        "6",
        values and identity and bounds[0].bound == Fraction(1, 5) and gap_ok,
        f"gap n=3: {gaps[0]:.4f}, gap n=51: {gaps[-1]:.5f}",
    )
    assert ok


@pytest.mark.slow
def test_criterion_7_quantum_envelope(criterion):
    bad, cells = [], 0
    for n in (8, 16, 32, 64):
        for k in range(1, 5):
            if k > n - 2:
                continue
            for eps in (Fraction(1, 4), Fraction(1, 8)):
                env = q.main_simulate(n, k, eps)
                cells += 1
                if not env.ok or any(
                    abs(row.lo - row.target) > eps or abs(row.hi - row.target) > eps for row in env.rows
                ):
                    bad.append((n, k, eps, env.violations[:1]))
    ratios = [
        Fraction(q.query_budget(4 * n, k, eps), q.query_budget(n, k, eps))
        for n in (64, 256, 1024, 4096)
        for k in range(1, 5)
        for eps in (Fraction(1, 4), Fraction(1, 8))
    ]
    worst = max(ratios)
    ok = criterion("7", not bad and worst <= Fraction(5, 2), f"{cells} envelopes, worst budget ratio {float(worst):.3f}")
    assert ok


def _middle_cells():
    for n in (32, 47, 64, 100, 128, 201):
        for eps in (Fraction(1, 4), Fraction(1, 16), Fraction(1, 100)):
            for a_sq in sorted({Fraction(1, 2), max(Fraction(1, 2), Fraction(n, 128)), Fraction(n, 64)}):
                # the smallest a^2 with the smallest eps gives degrees near 400 at n=201;
                # keep that corner to n <= 64 so the sweep stays at desk scale
                if eps == Fraction(1, 100) and a_sq == Fraction(1, 2) and n > 64:
                    continue
                yield approx.MiddleParams(n, eps, a_sq)


@pytest.mark.slow
def test_criterion_8_middle_polynomial(criterion):
    bad, cells = [], 0
    for params in _middle_cells():
        rep = approx.verify_middle(params, samples=200)
        cells += 1
        if not (rep.nonneg and rep.nonneg_full is not False and rep.small_on_outer and rep.bounded_by_two
                and rep.degree_bound_ok):
            bad.append((params, rep.d))
    ok = criterion("8", not bad, f"{cells} parameter cells, failures={bad[:2]}")
    assert ok
