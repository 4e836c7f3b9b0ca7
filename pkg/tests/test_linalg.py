"""Exact rational linear algebra and the pivoted LDL semidefiniteness test."""

from __future__ import annotations

from fractions import Fraction

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from symsos.linalg import identity, int_rank, inverse, is_nsd, is_psd, ldl_psd, matmul, nullspace, rank, solve, transpose

entries = st.integers(-5, 5)


def _mat(rows):
    return [[Fraction(x) for x in row] for row in rows]


@given(st.integers(1, 4), st.integers(1, 5), st.data())
@settings(max_examples=100)
def test_gram_matrices_are_psd(rows, cols, data):
    """Oracle: B^T B is PSD by construction."""
    b = _mat(data.draw(st.lists(st.lists(entries, min_size=cols, max_size=cols), min_size=rows, max_size=rows)))
    g = matmul(transpose(b), b)
    rec = ldl_psd(g)
    assert rec.psd
    assert all(d >= 0 for d in rec.pivots)
    assert sum(1 for d in rec.pivots if d) == rank(g)


@given(st.integers(1, 4), st.data())
@settings(max_examples=100)
def test_negative_direction_detected(size, data):
    b = _mat(data.draw(st.lists(st.lists(entries, min_size=size, max_size=size), min_size=size, max_size=size)))
    g = matmul(transpose(b), b)
    v = data.draw(st.integers(0, size - 1))
    g[v][v] -= g[v][v] + 1  # e_v^T g e_v = -1
    assert not is_psd(g)
    assert is_nsd([[-x for x in row] for row in matmul(transpose(b), b)])


@given(st.lists(st.lists(entries, min_size=4, max_size=4), min_size=4, max_size=4))
@settings(max_examples=60)
def test_psd_agrees_with_numpy_eigenvalues(rows):
    a = np.array(rows, dtype=float)
    sym = a + a.T
    exact = is_psd(_mat(sym.astype(int).tolist()))
    eig = np.linalg.eigvalsh(sym)
    if eig.min() > 1e-9:
        assert exact
    if eig.min() < -1e-9:
        assert not exact


def test_zero_pivot_with_offdiagonal_is_not_psd():
    assert not is_psd(_mat([[0, 1], [1, 0]]))
    assert is_psd(_mat([[0, 0], [0, 0]]))
    assert not ldl_psd(_mat([[1, 2], [3, 4]])).psd  # asymmetric


def test_solve_inverse_nullspace():
    a = _mat([[2, 1], [1, 3]])
    x = solve(a, [Fraction(3), Fraction(5)])
    assert x == [Fraction(4, 5), Fraction(7, 5)]
    assert matmul(a, inverse(a)) == identity(2)
    k = nullspace(_mat([[1, 1, 1], [2, 2, 2]]))
    assert len(k) == 2


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=6))
def test_integer_rank_matches_rational_rank(rows):
    assert int_rank(rows) == rank(_mat(rows))
