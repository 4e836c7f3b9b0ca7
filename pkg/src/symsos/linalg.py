"""Exact dense linear algebra over the rationals.

Matrices are lists of rows of :class:`fractions.Fraction`.  The routines are
plain Gaussian elimination; sizes in this package stay in the low hundreds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from gmpy2 import mpq

Matrix = list


def to_matrix(rows) -> Matrix:
    return [[Fraction(x) for x in row] for row in rows]


def zeros(r: int, c: int) -> Matrix:
    return [[Fraction(0)] * c for _ in range(r)]


def identity(n: int) -> Matrix:
    m = zeros(n, n)
    for i in range(n):
        m[i][i] = Fraction(1)
    return m


def transpose(a: Matrix) -> Matrix:
    return [list(col) for col in zip(*a)] if a else []


def matmul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum((x * col[k] for k, x in nz), Fraction(0)) for col in bt])
    return out


def matvec(a: Matrix, v: Sequence) -> list:
    return [sum((x * v[k] for k, x in enumerate(row) if x), Fraction(0)) for row in a]


def _rref(a: Matrix) -> tuple[Matrix, list]:
    m = [list(r) for r in a]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(a: Matrix) -> int:
    if not a or not a[0]:
        return 0
    return len(_rref(a)[1])


def int_rank(a) -> int:
    """Rank of an integer matrix by fraction-free (Bareiss) elimination."""
    m = [[int(x) for x in row] for row in a]
    rows, cols = len(m), (len(m[0]) if m else 0)
    r, prev = 0, 1
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        p = m[r][c]
        for i in range(r + 1, rows):
            f = m[i][c]
            m[i] = [(p * m[i][j] - f * m[r][j]) // prev for j in range(cols)]
        prev, r = p, r + 1
        if r == rows:
            break
    return r


def nullspace(a: Matrix) -> list:
    """Basis of ``{v : a v = 0}`` (one vector per free column)."""
    cols = len(a[0]) if a else 0
    if not a:
        return [[Fraction(int(i == j)) for i in range(cols)] for j in range(cols)]
    m, pivots = _rref(a)
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * cols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence) -> list:
    """Solve square nonsingular ``a x = b`` exactly."""
    n = len(a)
    aug = [list(a[i]) + [Fraction(b[i])] for i in range(n)]
    m, pivots = _rref(aug)
    if pivots != list(range(n)):
        raise ValueError("matrix is singular")
    return [m[i][n] for i in range(n)]


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + [Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    m, pivots = _rref(aug)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular")
    return [row[n:] for row in m]


@dataclass
class LDLRecord:
    """Outcome of an exact symmetric-pivoted LDL^T factorization.

    ``perm`` lists the pivot order, ``pivots`` the diagonal entries of D in
    that order.  ``psd`` is True iff every pivot is >= 0 and the residual
    block left when pivots run out is identically zero.
    """

    psd: bool
    perm: list = field(default_factory=list)
    pivots: list = field(default_factory=list)
    reason: str = ""


def ldl_psd(a: Matrix) -> LDLRecord:
    """Decide positive semidefiniteness exactly by pivoted LDL^T.

    At each step the largest remaining diagonal entry is the pivot.  A
    negative pivot, or a zero maximal diagonal with a nonzero remaining
    row, proves the matrix is not PSD.
    """
    n = len(a)
    # gmpy2 rationals: same exact arithmetic, much cheaper than Fraction
    m = [[mpq(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in a]
    for i in range(n):
        for j in range(i):
            if m[i][j] != m[j][i]:
                return LDLRecord(False, reason=f"not symmetric at ({i},{j})")
    remaining = list(range(n))
    perm, pivots = [], []
    while remaining:
        k = max(remaining, key=lambda i: m[i][i])
        d = m[k][k]
        d = Fraction(int(d.numerator), int(d.denominator))
        if d < 0:
            return LDLRecord(False, perm, pivots + [d], f"negative pivot {d}")
        if d == 0:
            for i in remaining:
                for j in remaining:
                    if m[i][j] != 0:
                        return LDLRecord(False, perm, pivots, f"zero pivot with nonzero entry at ({i},{j})")
            return LDLRecord(True, perm + remaining, pivots + [Fraction(0)] * len(remaining))
        remaining.remove(k)
        perm.append(k)
        pivots.append(d)
        rowk = m[k]
        col = [(i, rowk[i] / rowk[k]) for i in remaining if rowk[i]]
        for i, li in col:
            mi = m[i]
            for j in remaining:
                if rowk[j]:
                    mi[j] -= li * rowk[j]
    return LDLRecord(True, perm, pivots)


def is_psd(a: Matrix) -> bool:
    return ldl_psd(a).psd


def is_nsd(a: Matrix) -> bool:
    return ldl_psd([[-x for x in row] for row in a]).psd
