"""Polynomials in n Boolean variables, symmetrization and error functionals.

A :class:`MultiPoly` is a sparse map from exponent vectors to rationals.
On the cube ``{0,1}^n`` every polynomial agrees with its multilinear
reduction (replace each positive exponent by 1); symmetric functions are
described by their values on Hamming weights (:class:`SymProfile`) or by a
univariate polynomial in ``z = |x|`` (:func:`sym_uni`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .polycore import UniPoly, as_rational, falling_factorial

#: Largest exponent allowed on any single variable.  The refutation
#: construction multiplies squared-variable terms by linear forms, so
#: per-variable exponents reach ``k + 2`` before any reduction.
MAX_EXPONENT = 6

#: Largest n accepted by :func:`symmetrize`.
SYMMETRIZE_MAX_N = 10


class ExponentCapError(ValueError):
    """A construction produced a per-variable exponent above MAX_EXPONENT."""


class MultiPoly:
    """Immutable sparse polynomial in variables ``x_1..x_n`` over Q."""

    __slots__ = ("n", "_t", "_hash")

    def __init__(self, n: int, terms: Mapping | Iterable = ()):
        if n < 0:
            raise ValueError("n must be nonnegative")
        self.n = n
        items = terms.items() if isinstance(terms, Mapping) else terms
        t: dict = {}
        for e, c in items:
            e = tuple(e)
            if len(e) != n:
                raise ValueError(f"exponent vector {e} has length != {n}")
            if any(x < 0 for x in e):
                raise ValueError("negative exponent")
            if any(x > MAX_EXPONENT for x in e):
                raise ExponentCapError(f"exponent vector {e} exceeds cap {MAX_EXPONENT}")
            c = as_rational(c)
            if c:
                s = t.get(e, 0) + c
                if s:
                    t[e] = s
                else:
                    t.pop(e, None)
        self._t = t
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, n: int, c) -> "MultiPoly":
        return cls(n, {(0,) * n: c})

    @classmethod
    def var(cls, n: int, i: int, power: int = 1) -> "MultiPoly":
        """The variable ``x_i`` (0-based index) raised to ``power``."""
        e = [0] * n
        e[i] = power
        return cls(n, {tuple(e): 1})

    @classmethod
    def monomial(cls, n: int, subset: Iterable[int], coeff=1, power: int = 1) -> "MultiPoly":
        """``coeff * prod_{i in subset} x_i**power``."""
        e = [0] * n
        for i in subset:
            e[i] += power
        return cls(n, {tuple(e): coeff})

    @classmethod
    def linear_sum(cls, n: int, coeff=1) -> "MultiPoly":
        """``coeff * (x_1 + ... + x_n)``."""
        return cls(n, {tuple(int(j == i) for j in range(n)): coeff for i in range(n)})

    # -- accessors -----------------------------------------------------------
    @property
    def terms(self) -> dict:
        return dict(self._t)

    def items(self):
        return self._t.items()

    def is_zero(self) -> bool:
        return not self._t

    def __len__(self):
        return len(self._t)

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._t), default=-1)

    def max_exponent(self) -> int:
        return max((max(e, default=0) for e in self._t), default=0)

    def is_multilinear(self) -> bool:
        return all(x <= 1 for e in self._t for x in e)

    def is_homogeneous(self) -> bool:
        return len({sum(e) for e in self._t}) <= 1

    def coeff(self, e) -> Fraction:
        return self._t.get(tuple(e), Fraction(0))

    # -- arithmetic ------------------------------------------------------------
    def _check(self, other: "MultiPoly"):
        if other.n != self.n:
            raise ValueError("variable counts differ")

    def _coerce(self, other) -> "MultiPoly":
        if isinstance(other, MultiPoly):
            self._check(other)
            return other
        return MultiPoly.const(self.n, other)

    def __add__(self, other):
        o = self._coerce(other)
        t = dict(self._t)
        for e, c in o._t.items():
            s = t.get(e, 0) + c
            if s:
                t[e] = s
            else:
                t.pop(e, None)
        return MultiPoly._raw(self.n, t)

    __radd__ = __add__

    def __neg__(self):
        return MultiPoly._raw(self.n, {e: -c for e, c in self._t.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, MultiPoly):
            k = as_rational(other)
            if k == 0:
                return MultiPoly(self.n)
            return MultiPoly._raw(self.n, {e: k * c for e, c in self._t.items()})
        self._check(other)
        t: dict = {}
        for e1, c1 in self._t.items():
            for e2, c2 in other._t.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                t[e] = t.get(e, 0) + c1 * c2
        return MultiPoly(self.n, t)

    __rmul__ = __mul__

    def __truediv__(self, k):
        k = as_rational(k)
        return self * (1 / k)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        out = MultiPoly.const(self.n, 1)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, MultiPoly):
            return self.n == other.n and self._t == other._t
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self._t.items())))
        return self._hash

    @classmethod
    def _raw(cls, n: int, t: dict) -> "MultiPoly":
        obj = cls.__new__(cls)
        obj.n = n
        obj._t = {e: c for e, c in t.items() if c}
        obj._hash = None
        return obj

    # -- evaluation and transformations ------------------------------------
    def __call__(self, x: Sequence) -> Fraction:
        if len(x) != self.n:
            raise ValueError("point has wrong dimension")
        xs = [as_rational(v) for v in x]
        total = Fraction(0)
        for e, c in self._t.items():
            term = c
            for xi, ei in zip(xs, e):
                if ei:
                    term *= xi**ei
                    if not term:
                        break
            total += term
        return total

    def eval_cube(self, bits: Sequence[int]) -> Fraction:
        """Evaluate at a 0/1 point (fast path)."""
        total = Fraction(0)
        for e, c in self._t.items():
            if all(b or not ei for b, ei in zip(bits, e)):
                total += c
        return total

    def permute(self, perm: Sequence[int]) -> "MultiPoly":
        """Substitute ``x_i -> x_{perm[i]}``."""
        t = {}
        for e, c in self._t.items():
            ne = [0] * self.n
            for i, ei in enumerate(e):
                ne[perm[i]] = ei
            t[tuple(ne)] = c
        return MultiPoly._raw(self.n, t)

    def homogeneous_part(self, d: int) -> "MultiPoly":
        return MultiPoly._raw(self.n, {e: c for e, c in self._t.items() if sum(e) == d})

    def support_subsets(self) -> dict:
        """For a multilinear polynomial, map ``frozenset(S) -> coefficient``."""
        if not self.is_multilinear():
            raise ValueError("polynomial is not multilinear")
        return {frozenset(i for i, x in enumerate(e) if x): c for e, c in self._t.items()}

    def __repr__(self):
        return f"MultiPoly(n={self.n}, {self})"

    def __str__(self):
        if not self._t:
            return "0"
        parts = []
        for e, c in sorted(self._t.items(), key=lambda kv: (-sum(kv[0]), [-x for x in kv[0]])):
            mono = "*".join(f"x{i + 1}" + (f"^{x}" if x > 1 else "") for i, x in enumerate(e) if x)
            parts.append(f"{c}*{mono}" if mono else str(c))
        return " + ".join(parts)


# ---------------------------------------------------------------------------
# Basic constructions
# ---------------------------------------------------------------------------


def elementary_symmetric(n: int, k: int, variables: Sequence[int] | None = None, power: int = 1) -> MultiPoly:
    """``e_k`` of ``x_i**power`` over the given variable indices (default all)."""
    idx = list(range(n)) if variables is None else list(variables)
    if k < 0:
        return MultiPoly(n)
    t = {}
    for s in itertools.combinations(idx, k):
        e = [0] * n
        for i in s:
            e[i] = power
        t[tuple(e)] = Fraction(1)
    return MultiPoly(n, t)


def substitute_sum(u: UniPoly, n: int) -> MultiPoly:
    """Compose a univariate polynomial with ``z = x_1 + ... + x_n``."""
    s = MultiPoly.linear_sum(n)
    acc = MultiPoly(n)
    for c in reversed(u.coeffs):
        acc = acc * s + c
    return acc


def reduce_multilinear(p: MultiPoly) -> MultiPoly:
    """Replace each positive exponent by 1 (agrees with ``p`` on the cube)."""
    t: dict = {}
    for e, c in p.items():
        r = tuple(1 if x else 0 for x in e)
        t[r] = t.get(r, 0) + c
    return MultiPoly(p.n, t)


def _distinct_permutations(e: tuple) -> Iterable[tuple]:
    """All distinct rearrangements of a tuple (multiset permutations)."""
    n = len(e)
    counts: dict = {}
    for x in e:
        counts[x] = counts.get(x, 0) + 1
    values = sorted(counts)

    def rec(free: tuple, vi: int):
        if vi == len(values):
            yield {}
            return
        v = values[vi]
        for pos in itertools.combinations(free, counts[v]):
            rest = tuple(i for i in free if i not in pos)
            for assign in rec(rest, vi + 1):
                assign = dict(assign)
                for i in pos:
                    assign[i] = v
                yield assign

    for assign in rec(tuple(range(n)), 0):
        yield tuple(assign[i] for i in range(n))


def symmetrize(p: MultiPoly) -> MultiPoly:
    """``(1/n!) sum_sigma p(sigma x)`` computed via orbit sums."""
    if p.n > SYMMETRIZE_MAX_N:
        raise OverflowError(f"symmetrize supports n <= {SYMMETRIZE_MAX_N}, got {p.n}")
    t: dict = {}
    for e, c in p.items():
        orbit = list(_distinct_permutations(e))
        share = c / len(orbit)
        for o in orbit:
            t[o] = t.get(o, 0) + share
    return MultiPoly(p.n, t)


def is_symmetric(p: MultiPoly) -> bool:
    for i in range(p.n - 1):
        perm = list(range(p.n))
        perm[i], perm[i + 1] = perm[i + 1], perm[i]
        if p.permute(perm) != p:
            return False
    return True


def monomial_sym_uni(n: int, s: int) -> UniPoly:
    """Univariate form of ``Sym(x_S)`` for ``|S| = s``: ``(z)_s / (n)_s``."""
    if s > n:
        raise ValueError("monomial larger than the variable count")
    return falling_factorial(s) * Fraction(1, math.perm(n, s))


def sym_uni(p: MultiPoly) -> UniPoly:
    """Univariate ``q`` with ``q(|x|) = Sym(p)(x)`` on the cube."""
    q = reduce_multilinear(p)
    by_size: dict = {}
    for e, c in q.items():
        s = sum(e)
        by_size[s] = by_size.get(s, 0) + c
    out = UniPoly()
    for s, c in by_size.items():
        out = out + monomial_sym_uni(p.n, s) * c
    return out


def fk_poly(n: int, k: int) -> UniPoly:
    """``f_k(z) = (z - k)(z - k - 1)``."""
    if not 0 <= k <= n - 1:
        raise ValueError(f"need 0 <= k <= n-1, got n={n}, k={k}")
    return UniPoly.from_roots((k, k + 1))


def hyper_error(h: UniPoly, f: UniPoly, n: int) -> tuple[Fraction, Fraction]:
    """Exact ``(max_w |h(w)-f(w)|, sum_w C(n,w) |h(w)-f(w)|)`` over weights 0..n."""
    diffs = [abs(a - b) for a, b in zip(h.eval_many(range(n + 1)), f.eval_many(range(n + 1)))]
    linf = max(diffs)
    l1 = sum((math.comb(n, w) * d for w, d in enumerate(diffs)), Fraction(0))
    return linf, l1


# ---------------------------------------------------------------------------
# Symmetric profiles
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SymProfile:
    """A symmetric function on ``{0,1}^n`` given by its value at each weight."""

    n: int
    values: tuple

    def __post_init__(self):
        vals = tuple(as_rational(v) for v in self.values)
        if len(vals) != self.n + 1:
            raise ValueError(f"profile needs {self.n + 1} values, got {len(vals)}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def from_unipoly(cls, u: UniPoly, n: int) -> "SymProfile":
        return cls(n, tuple(u.eval_many(range(n + 1))))

    def __getitem__(self, w: int) -> Fraction:
        return self.values[w]

    def expectation(self, weight_fn=None) -> Fraction:
        """``E_x[psi(x) g(|x|)]`` under the uniform cube measure."""
        total = Fraction(0)
        for w, v in enumerate(self.values):
            g = 1 if weight_fn is None else as_rational(weight_fn(w))
            total += math.comb(self.n, w) * v * g
        return total / 2**self.n

    def sup_norm(self) -> Fraction:
        return max(abs(v) for v in self.values)

    def scaled(self, c) -> "SymProfile":
        c = as_rational(c)
        return SymProfile(self.n, tuple(c * v for v in self.values))


def cube_points(n: int):
    return itertools.product((0, 1), repeat=n)


def brute_weight_average(p: MultiPoly, w: int) -> Fraction:
    """Average of ``p`` over the cube points of Hamming weight ``w`` (brute force)."""
    total = Fraction(0)
    count = 0
    for s in itertools.combinations(range(p.n), w):
        bits = [0] * p.n
        for i in s:
            bits[i] = 1
        total += p.eval_cube(bits)
        count += 1
    return total / count
