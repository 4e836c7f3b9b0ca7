"""Multivariate polynomials on the cube, symmetrization and symmetric profiles."""

from __future__ import annotations

import itertools
import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symsos.duals import random_poly
from symsos.hypercube import (
    ExponentCapError,
    MAX_EXPONENT,
    MultiPoly,
    SymProfile,
    brute_weight_average,
    cube_points,
    elementary_symmetric,
    fk_poly,
    hyper_error,
    is_symmetric,
    reduce_multilinear,
    substitute_sum,
    sym_uni,
    symmetrize,
)
from symsos.polycore import UniPoly


def _random(n, degree, seed, max_exp=2):
    return random_poly(n, degree, random.Random(seed), terms=4, max_exp=max_exp)


@given(st.integers(1, 6), st.integers(0, 3), st.integers(0, 10**6))
@settings(max_examples=60)
def test_multilinear_reduction_agrees_on_cube(n, degree, seed):
    p = _random(n, degree, seed)
    q = reduce_multilinear(p)
    assert q.is_multilinear()
    for x in cube_points(n):
        assert p.eval_cube(x) == q.eval_cube(x)


@given(st.integers(1, 6), st.integers(0, 3), st.integers(0, 10**6))
@settings(max_examples=60)
def test_sym_uni_matches_weight_averages(n, degree, seed):
    """Oracle: brute-force averages over each Hamming-weight layer."""
    p = _random(n, degree, seed)
    u = sym_uni(p)
    for w in range(n + 1):
        assert u(w) == brute_weight_average(p, w)


@given(st.integers(1, 5), st.integers(0, 3), st.integers(0, 10**6))
@settings(max_examples=40)
def test_symmetrize_is_symmetric_and_preserves_layers(n, degree, seed):
    p = _random(n, degree, seed)
    s = symmetrize(p)
    assert is_symmetric(s)
    for w in range(n + 1):
        assert brute_weight_average(s, w) == brute_weight_average(p, w)


def test_elementary_symmetric_and_substitution():
    e2 = elementary_symmetric(4, 2)
    assert len(e2) == 6
    s = substitute_sum(UniPoly((0, 0, 1)), 4)
    for x in cube_points(4):
        assert s.eval_cube(x) == sum(x) ** 2
    assert e2(list(range(1, 5))) == 35


def test_exponent_cap():
    MultiPoly.var(2, 0, MAX_EXPONENT)
    with pytest.raises(ExponentCapError):
        MultiPoly.var(2, 0, MAX_EXPONENT + 1)


def test_profile_expectation_and_errors():
    prof = SymProfile(3, (1, 1, 1, 1))
    assert prof.expectation() == 1
    assert prof.expectation(lambda w: w) == Fraction(3, 2)
    f = fk_poly(5, 2)
    assert f == UniPoly.from_roots((2, 3))
    linf, l1 = hyper_error(f, f, 5)
    assert linf == 0 and l1 == 0
    linf, l1 = hyper_error(f + 1, f, 5)
    assert linf == 1 and l1 == 32


@given(st.integers(1, 7), st.lists(st.fractions(-3, 3, max_denominator=5), min_size=8, max_size=8))
def test_profile_expectation_matches_brute_force(n, vals):
    prof = SymProfile(n, vals[: n + 1])
    brute = sum((prof[sum(x)] for x in itertools.product((0, 1), repeat=n)), Fraction(0)) / 2**n
    assert prof.expectation() == brute
    assert prof.scaled(2).expectation() == 2 * brute
    assert math.isclose(float(prof.sup_norm()), max(abs(float(v)) for v in vals[: n + 1]))
