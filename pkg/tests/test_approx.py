"""The Chebyshev middle polynomial, the l1 construction and sampling approximations."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from symsos import approx
from symsos.hypercube import fk_poly, hyper_error
from symsos.polycore import UniPoly, cheb_value


def _params(n, eps, a_sq):
    return approx.MiddleParams(n, Fraction(eps), Fraction(a_sq))


def test_parameter_ranges():
    with pytest.raises(ValueError):
        _params(64, Fraction(1, 2), 1)
    with pytest.raises(ValueError):
        _params(64, Fraction(1, 8), Fraction(1, 4))
    with pytest.raises(ValueError):
        _params(9, Fraction(1, 8), Fraction(1, 2))  # a^2 above n/64


@pytest.mark.parametrize("n,eps,a_sq", [(64, "1/8", 1), (101, "1/4", "3/2"), (201, "1/10", 3)])
def test_middle_poly_properties(n, eps, a_sq):
    params = _params(n, Fraction(eps), Fraction(a_sq))
    p, d = approx.middle_poly(params)
    assert p.degree == 2 * d and d % 2 == 0
    rep = approx.verify_middle(params, p, d, samples=200)
    assert rep.ok, rep
    assert rep.worst_outer <= params.eps
    assert d <= rep.degree_ceiling


def test_chebyshev_degree_is_least_even_degree():
    """Oracle: T_d(y) = cosh(d arccosh y) in floating point, away from the threshold."""
    for n, eps, a_sq in [(64, Fraction(1, 8), 1), (150, Fraction(1, 20), 2)]:
        d = approx.chebyshev_degree(n, eps, a_sq)
        y = approx.s_of_u(n, a_sq, Fraction(1, 4))
        target = 1 / (4 * eps)
        assert cheb_value(d, y) >= target > cheb_value(d - 2, y)
        assert math.cosh(d * math.acosh(float(y))) >= float(target) * (1 - 1e-9)
        assert math.cosh((d - 2) * math.acosh(float(y))) < float(target)


@given(st.fractions(-40, 40, max_denominator=9))
@settings(max_examples=60)
def test_coefficients_match_value_recurrence(z):
    params = _params(64, Fraction(1, 8), 1)
    p, d = _middle_cache(params)
    assert p(z) == approx.middle_value(params, d, z)
    assert p(z) >= Fraction(1, 4) - z * z


_CACHE = {}


def _middle_cache(params):
    if params not in _CACHE:
        _CACHE[params] = approx.middle_poly(params)
    return _CACHE[params]


@given(
    st.integers(32, 201),
    st.sampled_from([Fraction(1, 4), Fraction(1, 8), Fraction(1, 16), Fraction(1, 50)]),
    st.fractions(Fraction(1, 2), Fraction(25, 8), max_denominator=8),
)
@settings(max_examples=40, deadline=None)
def test_degree_never_exceeds_ceiling_plus_one(n, eps, a_sq):
    assume(a_sq <= Fraction(n, 64))
    params = approx.MiddleParams(n, eps, a_sq)
    d = approx.chebyshev_degree(n, eps, a_sq)
    assert approx.middle_degree_within_bound(params, d)
    assert d <= approx.middle_degree_ceiling(params)


def test_reduced_certificate_detects_tampering():
    params = _params(64, Fraction(1, 8), 1)
    p, d = approx.middle_poly(params)
    rc = approx.certify_middle_reduced(params, d)
    assert approx.check_reduced_cert(rc, p)
    assert not approx.check_reduced_cert(rc, p + Fraction(1, 10**9))
    # degree 0 gives p = eps < 1/4 at z = 0, so nonnegativity must fail
    assert not approx.certify_middle_reduced(params, 0)


def test_l1_hypothesis_and_claimed_degree():
    with pytest.raises(ValueError):
        approx.check_l1_hypothesis(512, Fraction(1, 4))  # n even
    with pytest.raises(ValueError):
        approx.check_l1_hypothesis(511, Fraction(1, 4))  # 8/sqrt(2n) > delta
    approx.check_l1_hypothesis(513, Fraction(1, 4))
    # ceil(3 sqrt(513) ln 4 / (sqrt 2 / 4)) = ceil(266.4...)
    assert approx.l1_degree_claim(513, Fraction(1, 4)) == 267
    assert approx.l1_degree_within_claim(513, Fraction(1, 4), 267)
    assert not approx.l1_degree_within_claim(513, Fraction(1, 4), 268)


# ---------------------------------------------------------------------------
# sampling construction
# ---------------------------------------------------------------------------


def test_sampling_exhaustive_query_is_exact():
    n, k = 12, 3
    s = approx.sampling_approx_build(n, k, Fraction(1, 10**6), n, value="estimate")
    assert s.queries == n
    assert s.l1_error == 0


def test_sampling_accepting_nothing():
    n, k = 20, 4
    s = approx.sampling_approx_build(n, k, Fraction(1, 8), 3, value="constant", threshold=-1)
    assert s.h.is_zero()
    assert s.l1_error == sum(math.comb(n, i) * fk_poly(n, k)(i) for i in range(n + 1))


def test_sampling_tuned_example():
    s = approx.sampling_approx_build(20, 4, Fraction(1, 8), 6, value="estimate")
    assert s.l1_ok
    assert s.l1_error == hyper_error(s.h, fk_poly(20, 4), 20)[1]


@given(st.integers(10, 40), st.integers(0, 4), st.integers(1, 4))
@settings(max_examples=30, deadline=None)
def test_sampling_constant_rule_bounded_by_v(n, k, c):
    assume(100 * k < 49 * n)
    s = approx.sampling_approx_build(n, k, Fraction(1, 8), c, value="constant")
    v = Fraction(n * n, 4)
    for w in range(n + 1):
        assert 0 <= s.h(w) <= v
    # hypergeometric probabilities sum to one
    total = sum((approx.hypergeometric_poly(n, s.queries, j) for j in range(s.queries + 1)), UniPoly())
    assert total == UniPoly.const(1)


def test_sampling_rejects_middle_k():
    with pytest.raises(ValueError):
        approx.sampling_approx_build(20, 10, Fraction(1, 8), 3)
