"""Symmetrized squares on the hypercube via the operators ``W_t``.

Homogeneous multilinear polynomials of degree ``t`` (the space ``L_t``) are
vectors indexed by the ``t``-subsets of ``[n]`` in lexicographic order.  The
operator ``W_t = sum_i d/dx_i`` maps ``L_t -> L_{t-1}``; its adjoint acts on
the cube as multiplication by ``|x| - t + 1``.  Splitting
``L_t = Ker(W_t) + Im(W_t^T)`` repeatedly decomposes any polynomial into
kernel pieces, and symmetrizing a square then produces a sum of univariate
sums of squares weighted by ``prod_{i<j} (z - i)(n - z - i)``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from . import linalg
from .hypercube import MultiPoly, reduce_multilinear, sym_uni
from .polycore import UniPoly

#: Dense subset-indexed matrices are only built up to this n.
MAX_N = 12


def _check_n(n: int):
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n > MAX_N:
        raise OverflowError(f"subset-indexed matrices support n <= {MAX_N}, got {n}")


@lru_cache(maxsize=None)
def subsets(n: int, t: int) -> tuple:
    """All ``t``-subsets of ``range(n)`` in lexicographic order."""
    return tuple(itertools.combinations(range(n), t))


@lru_cache(maxsize=None)
def _subset_index(n: int, t: int) -> dict:
    return {s: i for i, s in enumerate(subsets(n, t))}


# ---------------------------------------------------------------------------
# Vectors in L_t  <->  MultiPoly
# ---------------------------------------------------------------------------


def to_vector(p: MultiPoly, t: int) -> list:
    """Coefficient vector of a homogeneous multilinear degree-``t`` polynomial."""
    idx = _subset_index(p.n, t)
    v = [Fraction(0)] * len(idx)
    for e, c in p.items():
        if any(x > 1 for x in e) or sum(e) != t:
            raise ValueError(f"polynomial is not homogeneous multilinear of degree {t}")
        v[idx[tuple(i for i, x in enumerate(e) if x)]] = c
    return v


def from_vector(n: int, t: int, v) -> MultiPoly:
    terms = {}
    for s, c in zip(subsets(n, t), v):
        if c:
            e = [0] * n
            for i in s:
                e[i] = 1
            terms[tuple(e)] = c
    return MultiPoly(n, terms)


def inner(p: MultiPoly, q: MultiPoly) -> Fraction:
    """Coefficient inner product ``<p|q> = sum_S p_S q_S``."""
    return sum((c * q.coeff(e) for e, c in p.items()), Fraction(0))


# ---------------------------------------------------------------------------
# W_t and the Johnson scheme
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubsetMatrix:
    """Inclusion matrix of ``(t-1)``-subsets (rows) in ``t``-subsets (columns)."""

    n: int
    t: int
    rows: tuple
    cols: tuple
    matrix: tuple

    def as_lists(self) -> list:
        return [list(r) for r in self.matrix]

    def apply(self, p: MultiPoly) -> MultiPoly:
        """``W_t p`` for ``p`` in ``L_t``."""
        return from_vector(self.n, self.t - 1, linalg.matvec(self.as_lists(), to_vector(p, self.t)))

    def apply_transpose(self, p: MultiPoly) -> MultiPoly:
        """``W_t^T p`` for ``p`` in ``L_{t-1}``."""
        return from_vector(self.n, self.t, linalg.matvec(linalg.transpose(self.as_lists()), to_vector(p, self.t - 1)))


@lru_cache(maxsize=None)
def w_operator(n: int, t: int) -> SubsetMatrix:
    """Matrix of ``W_t : L_t -> L_{t-1}``; entry 1 iff row-set is inside column-set."""
    _check_n(n)
    if not 1 <= t <= n:
        raise ValueError(f"need 1 <= t <= n, got n={n}, t={t}")
    rows, cols = subsets(n, t - 1), subsets(n, t)
    mat = tuple(tuple(Fraction(int(set(r) <= set(c))) for c in cols) for r in rows)
    return SubsetMatrix(n, t, rows, cols, mat)


def johnson_adjacency(n: int, t: int) -> list:
    """Adjacency matrix of the Johnson graph ``J(n, t)``."""
    _check_n(n)
    vs = subsets(n, t)
    return [[Fraction(int(len(set(a) & set(b)) == t - 1)) for b in vs] for a in vs]


def johnson_spectrum(n: int, t: int) -> list:
    """``[(t(n-t) - i(n+1-i), C(n,i) - C(n,i-1)) for i = 0..t]``."""
    if t < 0 or 2 * t > n + 1:
        raise ValueError(f"need 0 <= t <= (n+1)/2, got n={n}, t={t}")
    out = []
    for i in range(t + 1):
        mult = math.comb(n, i) - (math.comb(n, i - 1) if i else 0)
        out.append((Fraction(t * (n - t) - i * (n + 1 - i)), mult))
    return out


def verify_johnson_spectrum(n: int, t: int) -> bool:
    """Check the spectrum against the explicit adjacency matrix.

    ``A`` is symmetric, hence diagonalizable, so it suffices that every
    claimed eigenvalue ``lam`` with multiplicity ``m`` has
    ``rank(A - lam I) = N - m`` and that the multiplicities sum to ``N``:
    the eigenspaces then fill the whole space and leave no room for
    another eigenvalue.
    """
    a = johnson_adjacency(n, t)
    size = len(a)
    if any(a[i][j] != a[j][i] for i in range(size) for j in range(i)):
        return False
    spec = [(lam, m) for lam, m in johnson_spectrum(n, t) if m > 0]
    if sum(m for _, m in spec) != size:
        return False
    for lam, m in spec:
        if lam.denominator != 1:
            return False
        shifted = [[a[i][j] - (lam if i == j else 0) for j in range(size)] for i in range(size)]
        if linalg.int_rank(shifted) != size - m:
            return False
    return True


# ---------------------------------------------------------------------------
# Kernel bases
# ---------------------------------------------------------------------------


def standard_tableaux(n: int, t: int) -> list:
    """Standard Young tableaux of shape ``(n-t, t)`` as ``(top_row, bottom_row)``."""
    if t < 0 or 2 * t > n:
        raise ValueError(f"need 0 <= t <= n/2, got n={n}, t={t}")
    out = []

    def rec(v: int, top: tuple, bottom: tuple):
        if v == n:
            out.append((top, bottom))
            return
        if len(top) < n - t:
            rec(v + 1, top + (v,), bottom)
        if len(bottom) < t and len(bottom) < len(top):
            rec(v + 1, top, bottom + (v,))

    rec(0, (), ())
    return out


def tableau_poly(n: int, tableau) -> MultiPoly:
    """``prod_i (x_{top[i]} - x_{bottom[i]})`` over the length-2 columns."""
    top, bottom = tableau
    p = MultiPoly.const(n, 1)
    for a, b in zip(top, bottom):
        p = p * (MultiPoly.var(n, a) - MultiPoly.var(n, b))
    return p


def kernel_basis(n: int, t: int) -> list:
    """Tableau basis of ``Ker(W_t)``; ``C(n,t) - C(n,t-1)`` polynomials."""
    _check_n(n)
    return [tableau_poly(n, tab) for tab in standard_tableaux(n, t)]


def kernel_nullspace(n: int, t: int) -> list:
    """Basis of ``Ker(W_t)`` from exact Gaussian elimination (as vectors)."""
    if t == 0:
        return [[Fraction(1)]]
    return linalg.nullspace(w_operator(n, t).as_lists())


def kernel_dimension(n: int, t: int) -> int:
    return math.comb(n, t) - (math.comb(n, t - 1) if t else 0)


def in_kernel(p: MultiPoly, t: int) -> bool:
    if p.is_zero():
        return True
    if t == 0:
        return p.degree == 0
    try:
        v = to_vector(p, t)
    except ValueError:
        return False
    return all(x == 0 for x in linalg.matvec(w_operator(p.n, t).as_lists(), v))


def verify_kernel_basis(n: int, t: int) -> bool:
    """Tableau basis: right size, annihilated by ``W_t``, independent, same span as the nullspace."""
    basis = kernel_basis(n, t)
    if len(basis) != kernel_dimension(n, t):
        return False
    if not all(in_kernel(p, t) for p in basis):
        return False
    vecs = [to_vector(p, t) for p in basis]
    null = kernel_nullspace(n, t)
    r = linalg.rank(vecs) if vecs else 0
    return r == len(basis) == len(null) and (not vecs or linalg.rank(vecs + null) == r)


# ---------------------------------------------------------------------------
# Decompositions
# ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _projection_data(n: int, t: int):
    """``(W_t, W_t^T, (W_t W_t^T)^{-1})`` as plain lists."""
    w = w_operator(n, t).as_lists()
    wt = linalg.transpose(w)
    return w, wt, linalg.inverse(linalg.matmul(w, wt))


def _split(n: int, t: int, v: list) -> tuple[list, list]:
    """``v = ker + W^T h`` with ``ker`` in ``Ker(W_t)``; returns ``(ker, h)``."""
    w, wt, inv = _projection_data(n, t)
    h = linalg.matvec(inv, linalg.matvec(w, v))
    image = linalg.matvec(wt, h)
    return [a - b for a, b in zip(v, image)], h


def _decompose_vector(n: int, t: int, v: list) -> list:
    """Vectors ``[v_t, v_{t-1}, ..., v_0]`` with ``v_j`` in ``Ker(W_j)``."""
    if t == 0:
        return [list(v)]
    ker, h = _split(n, t, v)
    return [ker] + _decompose_vector(n, t - 1, h)


def _check_half_degree(n: int, t: int):
    if 2 * t > n:
        raise ValueError(f"degree {t} exceeds n/2 = {Fraction(n, 2)}")


def decompose_homogeneous(p: MultiPoly) -> list:
    """Components ``[p_t, p_{t-1}, ..., p_0]`` with ``p_{t-i}`` in ``Ker(W_{t-i})`` and

    ``p = p_t + sum_{i>=1} p_{t-i} * prod_{j=1..i} (|x| - t + j)`` on the cube.
    """
    if p.is_zero():
        return [p]
    if not p.is_multilinear() or not p.is_homogeneous():
        raise ValueError("input must be homogeneous and multilinear")
    t = p.degree
    _check_half_degree(p.n, t)
    vecs = _decompose_vector(p.n, t, to_vector(p, t))
    return [from_vector(p.n, t - i, v) for i, v in enumerate(vecs)]


def _sum_prefactor(t: int, i: int) -> UniPoly:
    """``prod_{j=1..i} (z - t + j)``."""
    return UniPoly.from_roots(t - j for j in range(1, i + 1))


def _weight_times(p: MultiPoly, u: UniPoly) -> MultiPoly:
    """Multilinear form of ``u(|x|) * p(x)`` on the cube."""
    s = MultiPoly.linear_sum(p.n)
    acc = MultiPoly(p.n)
    for c in reversed(u.coeffs):
        acc = reduce_multilinear(acc * s) + p * c
    return reduce_multilinear(acc)


def recombine_homogeneous(components: list) -> MultiPoly:
    t = len(components) - 1
    out = components[0]
    for i in range(1, t + 1):
        out = out + _weight_times(components[i], _sum_prefactor(t, i))
    return reduce_multilinear(out)


@dataclass
class GeneralDecomp:
    """``p = sum_j q_j`` with ``q_j = sum_k |x|^k p_kj`` and ``p_kj`` in ``Ker(W_j)``.

    ``parts[j][k]`` holds ``p_kj`` (for ``k = 0..t-j``).
    """

    n: int
    t: int
    parts: dict = field(default_factory=dict)

    def q(self, j: int) -> MultiPoly:
        out = MultiPoly(self.n)
        for k, pkj in enumerate(self.parts[j]):
            out = out + _weight_times(pkj, UniPoly.z() ** k)
        return reduce_multilinear(out)

    def recombine(self) -> MultiPoly:
        out = MultiPoly(self.n)
        for j in self.parts:
            out = out + self.q(j)
        return reduce_multilinear(out)


def _general_vectors(p: MultiPoly, t: int) -> dict:
    """``{j: [vector of p_kj for k = 0..t-j]}`` for multilinear ``p`` of degree <= t."""
    n = p.n
    parts = {j: [[Fraction(0)] * len(subsets(n, j)) for _ in range(t - j + 1)] for j in range(t + 1)}
    for i in range(t + 1):
        hom = p.homogeneous_part(i)
        if hom.is_zero():
            continue
        vecs = _decompose_vector(n, i, to_vector(hom, i))
        for s, v in enumerate(vecs):  # v lies in Ker(W_{i-s}) with prefactor of length s
            j = i - s
            pref = _sum_prefactor(i, s)
            for k, c in enumerate(pref.coeffs):
                if c:
                    target = parts[j][k]
                    for idx, x in enumerate(v):
                        if x:
                            target[idx] += c * x
    return parts


def decompose_general(p: MultiPoly, t: int | None = None) -> GeneralDecomp:
    """Split multilinear ``p`` (degree ``<= t <= n/2``) into kernel pieces by level."""
    if not p.is_multilinear():
        raise ValueError("input must be multilinear (apply reduce_multilinear first)")
    t = max(p.degree, 0) if t is None else t
    if p.degree > t:
        raise ValueError("polynomial degree exceeds t")
    _check_half_degree(p.n, t)
    vecs = _general_vectors(p, t)
    parts = {j: [from_vector(p.n, j, v) for v in vs] for j, vs in vecs.items()}
    return GeneralDecomp(p.n, t, parts)


def level_prefactor(n: int, j: int) -> UniPoly:
    """``prod_{0<=i<j} (z - i)(n - z - i)``."""
    out = UniPoly.const(1)
    for i in range(j):
        out = out * UniPoly((-i, 1)) * UniPoly((n - i, -1))
    return out


def kernel_square_constant(n: int, t: int) -> Fraction:
    """``(n - 2t)! / n!``."""
    return Fraction(math.factorial(n - 2 * t), math.factorial(n))


def sym_kernel_product(p: MultiPoly, q: MultiPoly) -> tuple[UniPoly, Fraction]:
    """``Sym(pq)`` for kernel elements, returned as ``(univariate form, <p|q>)``.

    Same level ``t``: ``<p|q> (n-2t)!/n! prod_{i<t} (z-i)(n-z-i)``.  Different
    levels: the zero polynomial (inner product reported as 0).
    """
    if p.n != q.n:
        raise ValueError("variable counts differ")
    tp, tq = max(p.degree, 0), max(q.degree, 0)
    if not in_kernel(p, tp) or not in_kernel(q, tq):
        raise ValueError("inputs must lie in Ker(W_t)")
    if 2 * max(tp, tq) > p.n:
        raise ValueError("kernel level exceeds n/2")
    if p.is_zero() or q.is_zero() or tp != tq:
        return UniPoly(), Fraction(0)
    ip = inner(p, q)
    return level_prefactor(p.n, tp) * (ip * kernel_square_constant(p.n, tp)), ip


# ---------------------------------------------------------------------------
# Decomposition of symmetrized squares
# ---------------------------------------------------------------------------


@dataclass
class BlekhermanTerm:
    """Level ``j``: ``poly(z) = v(z)^T gram v(z)`` with ``v = (1, z, ..., z^{t-j})``."""

    j: int
    gram: list
    poly: UniPoly
    ldl: linalg.LDLRecord | None = None


@dataclass
class BlekhermanDecomp:
    n: int
    t: int
    terms: list

    def recombine(self) -> UniPoly:
        out = UniPoly()
        for term in self.terms:
            out = out + term.poly * level_prefactor(self.n, term.j)
        return out


def gram_to_poly(gram: list) -> UniPoly:
    size = len(gram)
    coeffs = [Fraction(0)] * (2 * size - 1 if size else 0)
    for k in range(size):
        for l in range(size):
            coeffs[k + l] += gram[k][l]
    return UniPoly(coeffs)


def sym_square_target(ps: list) -> UniPoly:
    """``sum_i Sym^uni(p_i^2)`` by expansion and multilinear reduction."""
    out = UniPoly()
    for p in ps:
        out = out + sym_uni(reduce_multilinear(p * p))
    return out


def blekherman_decompose(ps, t: int | None = None) -> BlekhermanDecomp:
    """Decompose ``sum_i Sym(p_i^2)`` as ``sum_j q_{t-j}(z) prod_{i<j} (z-i)(n-z-i)``.

    Each ``q_{t-j}`` comes with its Gram matrix (entries ``<p_kj|p_lj>``
    summed over the inputs and scaled by ``(n-2j)!/n!``), certified PSD by
    exact pivoted LDL.
    """
    if isinstance(ps, MultiPoly):
        ps = [ps]
    ps = [reduce_multilinear(p) for p in ps]
    if not ps:
        raise ValueError("need at least one polynomial")
    n = ps[0].n
    if any(p.n != n for p in ps):
        raise ValueError("variable counts differ")
    deg = max(max(p.degree, 0) for p in ps)
    t = deg if t is None else t
    if deg > t:
        raise ValueError("polynomial degree exceeds t")
    _check_half_degree(n, t)
    grams = {j: [[Fraction(0)] * (t - j + 1) for _ in range(t - j + 1)] for j in range(t + 1)}
    for p in ps:
        vecs = _general_vectors(p, t)
        for j, vs in vecs.items():
            g = grams[j]
            for k in range(len(vs)):
                for l in range(k, len(vs)):
                    ip = sum((a * b for a, b in zip(vs[k], vs[l]) if a and b), Fraction(0))
                    g[k][l] += ip
                    if l != k:
                        g[l][k] += ip
    terms = []
    for j in range(t + 1):
        c = kernel_square_constant(n, j)
        gram = [[c * x for x in row] for row in grams[j]]
        poly = gram_to_poly(gram)
        if all(x == 0 for row in gram for x in row):
            continue
        terms.append(BlekhermanTerm(j, gram, poly, linalg.ldl_psd(gram)))
    return BlekhermanDecomp(n, t, terms)


@dataclass
class VerifyResult:
    ok: bool
    messages: list = field(default_factory=list)

    def __bool__(self):
        return self.ok


def verify_blekherman(d: BlekhermanDecomp, target: UniPoly) -> VerifyResult:
    """Recombination equals ``target`` identically and every Gram matrix is PSD."""
    msgs = []
    for term in d.terms:
        if gram_to_poly(term.gram) != term.poly:
            msgs.append(f"level {term.j}: polynomial does not match its Gram matrix")
        rec = linalg.ldl_psd(term.gram)
        if not rec.psd:
            msgs.append(f"level {term.j}: Gram matrix not PSD ({rec.reason})")
        if len(term.gram) != d.t - term.j + 1:
            msgs.append(f"level {term.j}: Gram matrix has wrong size")
    diff = d.recombine() - target
    if not diff.is_zero():
        msgs.append(f"recombination differs from target by {diff}")
    return VerifyResult(not msgs, msgs)
