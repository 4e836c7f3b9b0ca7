"""Kernel bases, Johnson spectra and decompositions of symmetrized squares."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from symsos import blekherman as bk
from symsos.duals import random_poly
from symsos.hypercube import MultiPoly, brute_weight_average, reduce_multilinear


def _ps(n, t, seed, count=2):
    rng = random.Random(seed)
    return [reduce_multilinear(random_poly(n, t, rng, terms=5)) for _ in range(count)]


@pytest.mark.parametrize("n", range(2, 9))
def test_johnson_spectrum_against_numpy(n):
    """Oracle: floating eigenvalues of the explicit adjacency matrix."""
    for t in range(0, n // 2 + 1):
        a = np.array(bk.johnson_adjacency(n, t), dtype=float)
        eig = np.sort(np.linalg.eigvalsh(a)) if len(a) else np.array([])
        claimed = sorted(float(lam) for lam, m in bk.johnson_spectrum(n, t) for _ in range(m))
        assert np.allclose(eig, claimed)
        # the closed form (t-i)(n-t-i) - i
        for i, (lam, _) in enumerate(bk.johnson_spectrum(n, t)):
            assert lam == (t - i) * (n - t - i) - i


@pytest.mark.parametrize("n,t", [(4, 2), (5, 2), (6, 3), (7, 2)])
def test_kernel_basis_and_spectrum_exact(n, t):
    assert bk.verify_johnson_spectrum(n, t)
    assert bk.verify_kernel_basis(n, t)
    assert len(bk.kernel_basis(n, t)) == bk.kernel_dimension(n, t)


def test_wrong_spectrum_rejected(monkeypatch):
    true = bk.johnson_spectrum
    moved = lambda n, t: [(lam + (i == 1), m) for i, (lam, m) in enumerate(true(n, t))]
    monkeypatch.setattr(bk, "johnson_spectrum", moved)
    assert not bk.verify_johnson_spectrum(6, 2)
    swapped = lambda n, t: [(lam, m) for (lam, _), (_, m) in zip(true(n, t), reversed(true(n, t)))]
    monkeypatch.setattr(bk, "johnson_spectrum", swapped)
    assert not bk.verify_johnson_spectrum(6, 3)


def test_kernel_square_closed_form():
    n, t = 6, 2
    basis = bk.kernel_basis(n, t)
    for p in basis[:3]:
        u, ip = bk.sym_kernel_product(p, p)
        assert ip == bk.inner(p, p) > 0
        for w in range(n + 1):
            assert u(w) == brute_weight_average(reduce_multilinear(p * p), w)
    # different levels are orthogonal after symmetrization
    low = bk.kernel_basis(n, 1)[0]
    u, ip = bk.sym_kernel_product(low, basis[0])
    assert u.is_zero() and ip == 0


@given(st.integers(2, 7), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_homogeneous_decomposition_round_trip(n, seed):
    t = n // 2
    rng = random.Random(seed)
    p = MultiPoly(n)
    for s in rng.sample(bk.subsets(n, t), min(3, len(bk.subsets(n, t)))):
        p = p + MultiPoly.monomial(n, s, Fraction(rng.randint(-4, 4), rng.randint(1, 3)))
    if p.is_zero():
        return
    comps = bk.decompose_homogeneous(p)
    for i, c in enumerate(comps):
        assert bk.in_kernel(c, t - i)
    assert bk.recombine_homogeneous(comps) == p


@given(st.integers(2, 7), st.integers(0, 10**6))
@settings(max_examples=40, deadline=None)
def test_decomposition_matches_brute_force_layers(n, seed):
    """Oracle: the recombined polynomial equals the layer averages of sum p_i^2."""
    t = n // 2
    ps = _ps(n, t, seed)
    d = bk.blekherman_decompose(ps, t)
    assert bk.verify_blekherman(d, bk.sym_square_target(ps)).ok
    rec = d.recombine()
    for w in range(n + 1):
        want = sum((brute_weight_average(reduce_multilinear(p * p), w) for p in ps), Fraction(0))
        assert rec(w) == want
    for term in d.terms:
        assert term.ldl.psd


def test_tampered_gram_rejected():
    ps = _ps(5, 2, 7)
    d = bk.blekherman_decompose(ps, 2)
    term = d.terms[0]
    term.gram[0][0] -= 1000
    term.poly = bk.gram_to_poly(term.gram)
    res = bk.verify_blekherman(d, bk.sym_square_target(ps))
    assert not res.ok and res.messages


def test_degree_above_half_rejected():
    with pytest.raises(ValueError):
        bk.blekherman_decompose(_ps(4, 3, 1), 3)
