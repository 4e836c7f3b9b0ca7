"""Exact univariate arithmetic, Sturm counting and nonnegativity certificates."""

from __future__ import annotations

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symsos.polycore import (
    UniPoly,
    as_rational,
    ceil_exact,
    certify_nonneg,
    cheb_poly,
    cheb_value,
    check_nonneg_cert,
    falling_factorial,
    lagrange_basis,
    log_enclosure,
    pi_enclosure,
    poly_divide,
    poly_gcd,
    sos_two_squares,
    sqrt_enclosure,
    squarefree_decomposition,
    sturm_count,
)

small_q = st.fractions(min_value=-6, max_value=6, max_denominator=7)
coeff_lists = st.lists(st.integers(-9, 9), min_size=1, max_size=7)


def _poly(coeffs):
    return UniPoly([Fraction(c) for c in coeffs])


def test_as_rational_accepts_strings_and_rejects_floats():
    assert as_rational("3/4") == Fraction(3, 4)
    assert as_rational(" -2 ") == -2
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_basic_arithmetic():
    z = UniPoly.z()
    p = (z - 1) * (z + 1)
    assert p == UniPoly((-1, 0, 1))
    assert p(Fraction(1, 2)) == Fraction(-3, 4)
    q, r = poly_divide(p, z - 1)
    assert q == z + 1 and r.is_zero()
    assert poly_gcd(p, (z - 1) ** 3) == z - 1


@given(coeff_lists, coeff_lists)
def test_division_identity(a, b):
    num, den = _poly(a), _poly(b)
    if den.is_zero():
        return
    q, r = poly_divide(num, den)
    assert q * den + r == num
    assert r.is_zero() or r.degree < den.degree


@given(st.lists(small_q, min_size=1, max_size=5), st.integers(0, 2), small_q, small_q)
@settings(max_examples=150)
def test_sturm_count_matches_known_roots(roots, n_quadratics, lo, hi):
    """Oracle: the polynomial is built from its roots plus root-free quadratics."""
    if lo > hi:
        lo, hi = hi, lo
    p = UniPoly.from_roots(roots)
    for j in range(n_quadratics):
        p = p * UniPoly((j + 1, 0, 1))
    ints, _ = p.to_int()
    want = len({x for x in roots if lo < x <= hi})
    assert sturm_count(ints, lo, hi)[0] == want
    assert sturm_count(ints)[0] == len(set(roots))


@given(st.lists(st.tuples(small_q, st.integers(1, 3)), min_size=1, max_size=4))
@settings(max_examples=100)
def test_squarefree_decomposition_recombines(factors):
    p = UniPoly.const(Fraction(3, 2))
    for root, mult in factors:
        p = p * (UniPoly((-root, 1)) ** mult)
    c, parts = squarefree_decomposition(p)
    rebuilt = UniPoly.const(c)
    for i, a in enumerate(parts, start=1):
        rebuilt = rebuilt * a**i
        if a.degree > 0:
            assert poly_gcd(a, a.derivative()).degree == 0
    assert rebuilt == p


@given(st.lists(small_q, min_size=0, max_size=3), st.lists(st.integers(1, 5), min_size=0, max_size=2))
@settings(max_examples=100)
def test_squares_times_positive_are_certified(roots, shifts):
    p = UniPoly.const(1)
    for r in roots:
        p = p * UniPoly((-r, 1)) ** 2
    for s in shifts:
        p = p * UniPoly((s, 0, 1))
    cert = certify_nonneg(p)
    assert cert and check_nonneg_cert(p, cert)


@given(small_q)
def test_simple_real_root_refuted(r):
    p = UniPoly((-r, 1)) * UniPoly((1, 0, 1))
    fail = certify_nonneg(p)
    assert not fail
    assert fail.negative_point is not None and p(fail.negative_point) < 0


def test_interval_certificate():
    z = UniPoly.z()
    p = (z - 2) * (z - 3)  # negative on (2, 3)
    assert certify_nonneg(p, hi=1)
    assert certify_nonneg(p, lo=4)
    # a root exactly at a finite endpoint is conservatively not certified,
    # but it is never reported as a negative value
    edge = certify_nonneg(p, hi=2)
    assert not edge and edge.negative_point is None
    assert not certify_nonneg(p, lo=0, hi=Fraction(5, 2))
    cert = certify_nonneg(p, lo=-5, hi=1)
    assert check_nonneg_cert(p, cert)
    assert not check_nonneg_cert(p + 1, cert)


def test_chebyshev_against_cosine():
    """Oracle: T_d(cos t) = cos(d t)."""
    for d in range(12):
        t = cheb_poly(d)
        assert t.degree == d
        for x in (Fraction(-1), Fraction(1, 3), Fraction(1)):
            assert t(x) == cheb_value(d, x)
        theta = 0.7
        assert abs(float(t(Fraction(math.cos(theta)))) - math.cos(d * theta)) < 1e-9


def test_falling_factorial_and_lagrange():
    assert falling_factorial(3) == UniPoly.from_roots((0, 1, 2))
    assert falling_factorial(0) == UniPoly.const(1)
    for n in range(1, 6):
        for k in range(n + 1):
            lk = lagrange_basis(n, k)
            assert [lk(i) for i in range(n + 1)] == [int(i == k) for i in range(n + 1)]


def test_enclosures_bracket_constants():
    lo, hi = sqrt_enclosure(2)
    assert lo * lo <= 2 <= hi * hi
    lo, hi = pi_enclosure()
    assert lo < Fraction(math.pi) + Fraction(1, 10**12) and hi > Fraction(math.pi) - Fraction(1, 10**12)
    lo, hi = log_enclosure(Fraction(1, 4))
    assert lo <= Fraction(math.log(0.25)) + Fraction(1, 10**12) and hi >= Fraction(math.log(0.25)) - Fraction(1, 10**12)
    assert ceil_exact(lambda b: sqrt_enclosure(2, b)) == 2
    assert ceil_exact(lambda b: pi_enclosure(b)) == 4


def test_two_squares_split():
    z = UniPoly.z()
    p = (z * z + 1) * ((z - 2) ** 2 + 3)
    a, b, residual = sos_two_squares(p)
    assert residual < Fraction(1, 10**6)
