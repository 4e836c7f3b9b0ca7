"""Positivstellensatz refutations of the unit-weight knapsack system.

The system ``sum_i x_i = r, x_i^2 = x_i`` has no solution when ``r`` is not
an integer.  A refutation is a tuple ``(g, g_1..g_n, h)`` with ``h`` a sum
of squares and

    g * (sum x_i - r) + sum_i g_i * (x_i^2 - x_i) = 1 + h

as an identity of polynomials.  For ``k < r < k+1`` one of degree
``2k+4`` comes from the falling factorial ``A_{k+2}(|x|)``:

* ``A_K(x) = sum_i (x_i^2 - x_i) a_i(x) + K! e_K(x_1^2, ..., x_n^2)``, built by
  the recursion ``A_{j+1} = A_j (e_1 - j)`` followed by a telescoping lift
  of each multilinear monomial to its square;
* ``A_K(z) + b`` vanishes at ``z = r`` for ``b = -r(r-1)...(r-K+1) > 0``,
  so ``g(z) = (A_K(z) + b) / (z - r)`` is an exact polynomial quotient.

Expansion into exponent-vector polynomials is only done for small ``n``;
the same certificate can be evaluated pointwise through the recursions
for any ``n``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .hypercube import MultiPoly, elementary_symmetric, substitute_sum
from .polycore import UniPoly, as_rational, falling_factorial, poly_divide

EXPAND_MAX_N = 10
RANDOM_POINTS = 64


# ---------------------------------------------------------------------------
# A_k as (ideal part) + k! e_k(x^2)
# ---------------------------------------------------------------------------


def _ideal_generator(n: int, i: int) -> MultiPoly:
    return MultiPoly.var(n, i, 2) - MultiPoly.var(n, i)


def _lift_multipliers(n: int, k: int) -> list:
    """``G_j`` with ``e_k(x) = e_k(x^2) - sum_j (x_j^2 - x_j) G_j``.

    For each ``k``-set ``S``, ``prod_S x_i^2 - prod_S x_i`` telescopes to
    ``sum_{j in S} (x_j^2 - x_j) prod_{i in S, i<j} x_i prod_{i in S, i>j} x_i^2``.
    """
    out = []
    for j in range(n):
        terms = {}
        if k >= 1:
            others = [i for i in range(n) if i != j]
            for rest in itertools.combinations(others, k - 1):
                e = [0] * n
                for i in rest:
                    e[i] = 1 if i < j else 2
                terms[tuple(e)] = terms.get(tuple(e), 0) + 1
        out.append(MultiPoly(n, terms))
    return out


def _a_k_multipliers(n: int, k: int) -> list:
    """Multipliers ``g_i``; valid for every ``k >= 1`` (``e_k = 0`` once ``k > n``)."""
    e1 = MultiPoly.linear_sum(n)
    # falling-factorial recursion: A_j = sum (x_i^2-x_i) g_i + j! e_j(x)
    g = [MultiPoly(n) for _ in range(n)]
    for j in range(1, k):
        shift = e1 - j
        fact = math.factorial(j)
        g = [
            g[i] * shift + elementary_symmetric(n, j - 1, [v for v in range(n) if v != i]) * fact
            for i in range(n)
        ]
    # telescoping lift: e_k(x) -> e_k(x^2)
    lift = _lift_multipliers(n, k)
    fk = math.factorial(k)
    return [g[i] - lift[i] * fk for i in range(n)]


def a_k_decomposition(n: int, k: int) -> tuple[list, MultiPoly]:
    """``(g_list, e_k(x^2))`` with ``A_k(|x|) = sum (x_i^2-x_i) g_i + k! e_k(x^2)``."""
    if k < 0 or k > n:
        raise ValueError("need 0 <= k <= n")
    if k == 0:
        return [], MultiPoly.const(n, 1)
    return _a_k_multipliers(n, k), elementary_symmetric(n, k, power=2)


# ---------------------------------------------------------------------------
# pointwise evaluation of the same construction (any n)
# ---------------------------------------------------------------------------


def _elem_values(ys, top: int) -> list:
    """``[e_0(ys), ..., e_top(ys)]``."""
    e = [Fraction(1)] + [Fraction(0)] * top
    for y in ys:
        for m in range(top, 0, -1):
            e[m] += y * e[m - 1]
    return e


def _prefix_elem(ys, top: int) -> list:
    """``out[i] = [e_0..e_top]`` of ``ys[:i]`` for ``i = 0..len(ys)``."""
    e = [Fraction(1)] + [Fraction(0)] * top
    out = [list(e)]
    for y in ys:
        for m in range(top, 0, -1):
            e[m] += y * e[m - 1]
        out.append(list(e))
    return out


def a_k_multipliers_at(x, k: int) -> list:
    """Values ``g_i(x)`` of :func:`a_k_decomposition`'s multipliers at a point.

    Uses ``e_m(x without x_i) = e_m(x) - x_i e_{m-1}(x without x_i)`` for the
    recursion and prefix/suffix tables for the mixed lift sums, so one
    point costs ``O(n k^2)`` operations.
    """
    n = len(x)
    x = [as_rational(v) for v in x]
    if k == 0:
        return []
    full = _elem_values(x, k)
    drop = []  # drop[i][m] = e_m(x without x_i)
    for xi in x:
        d = [Fraction(1)]
        for m in range(1, k):
            d.append(full[m] - xi * d[m - 1])
        drop.append(d)
    e1 = full[1]
    g = [Fraction(0)] * n
    for j in range(1, k):
        fact = math.factorial(j)
        g = [g[i] * (e1 - j) + fact * drop[i][j - 1] for i in range(n)]
    fk = math.factorial(k)
    top = k - 1
    pre = _prefix_elem(x, top)
    suf = _prefix_elem([v * v for v in reversed(x)], top)
    out = []
    for i in range(n):
        lo, hi = pre[i], suf[n - 1 - i]
        lift = sum((lo[a] * hi[top - a] for a in range(top + 1)), Fraction(0))
        out.append(g[i] - fk * lift)
    return out


# ---------------------------------------------------------------------------
# refutations
# ---------------------------------------------------------------------------


@dataclass
class HSos:
    """``h = scale * sum_S (x^S)^2`` over all ``S`` with ``|S| = size``.

    ``squares`` lists the bases ``x^S`` explicitly for small ``n``;
    ``scale`` is a positive multiplier kept outside the squares when it
    is not the square of a rational (positive multiple of sos is sos).
    """

    scale: Fraction
    size: int
    squares: list | None = None

    def expand(self, n: int) -> MultiPoly:
        if self.squares is None:
            raise ValueError("explicit squares not stored")
        acc = MultiPoly(n)
        for s in self.squares:
            acc = acc + s * s
        return acc * self.scale

    def value_at(self, x) -> Fraction:
        sq = [as_rational(v) ** 2 for v in x]
        return self.scale * _elem_values(sq, self.size)[self.size] if self.size <= len(sq) else Fraction(0)


@dataclass
class Refutation:
    n: int
    k: int
    r: Fraction
    b: Fraction
    level: int
    g_uni: UniPoly
    h_sos: HSos
    g: MultiPoly | None = None
    g_list: list | None = None
    h: MultiPoly | None = None

    @property
    def expanded(self) -> bool:
        return self.g is not None

    def parts_at(self, x) -> tuple[Fraction, list, Fraction]:
        """``(g(x), [g_i(x)], h(x))``, from stored polynomials when present."""
        x = [as_rational(v) for v in x]
        if self.expanded:
            return self.g(x), [gi(x) for gi in self.g_list], self.h(x)
        gi = [-v / self.b for v in a_k_multipliers_at(x, self.level)]
        return self.g_uni(sum(x, Fraction(0))), gi, self.h_sos.value_at(x)


def _rational_sqrt(q: Fraction):
    num, den = q.numerator, q.denominator
    if num < 0:
        return None
    a, c = math.isqrt(num), math.isqrt(den)
    return Fraction(a, c) if a * a == num and c * c == den else None


def knapsack_b(r, level: int) -> Fraction:
    """``b = -r(r-1)...(r-level+1)``, the constant making ``A_level(z)+b`` vanish at ``r``."""
    return -falling_factorial(level)(as_rational(r))


def candidate_refutation(n: int, level: int, r, expand: bool | None = None) -> Refutation:
    """Refutation attempt from ``A_level``; genuine only when ``b > 0``."""
    r = as_rational(r)
    if r.denominator == 1:
        raise ValueError("r must not be an integer")
    if not 0 <= level:
        raise ValueError("level must be nonnegative")
    b = knapsack_b(r, level)
    if b == 0:
        raise ValueError("b vanished")
    num = falling_factorial(level) + b
    q, rem = poly_divide(num, UniPoly([-r, 1]))
    if not rem.is_zero():
        raise AssertionError("A(z) + b not divisible by z - r")
    g_uni = q / b
    scale = Fraction(math.factorial(level)) / b
    expand = n <= EXPAND_MAX_N if expand is None else expand
    ref = Refutation(n, level - 2, r, b, level, g_uni, HSos(scale, level))
    if expand:
        root = _rational_sqrt(scale)
        sq = [MultiPoly.monomial(n, s) for s in itertools.combinations(range(n), level)] if level <= n else []
        if root is not None:
            ref.h_sos = HSos(Fraction(1), level, [s * root for s in sq])
        else:
            ref.h_sos = HSos(scale, level, sq)
        gl = _a_k_multipliers(n, level) if level else []
        ref.g = substitute_sum(g_uni, n)
        ref.g_list = [-gi / b for gi in gl] if gl else [MultiPoly(n)] * n
        ref.h = elementary_symmetric(n, level, power=2) * scale if level <= n else MultiPoly(n)
    return ref


def knapsack_refutation(n: int, k: int, r, expand: bool | None = None) -> Refutation:
    """Degree-``2k+4`` refutation for ``k < r < k+1``."""
    r = as_rational(r)
    if not (isinstance(k, int) and 0 <= 2 * k <= n):
        raise ValueError("need integer 0 <= k <= n/2")
    if not k < r < k + 1:
        raise ValueError("need k < r < k+1 with r non-integral")
    ref = candidate_refutation(n, k + 2, r, expand)
    if ref.b <= 0:
        raise AssertionError("b must be positive")
    return ref


# ---------------------------------------------------------------------------
# verification
# ---------------------------------------------------------------------------


@dataclass
class RefutationCheck:
    ok: bool
    degree: int | None = None
    reason: str = ""
    soundness: str = ""
    details: dict = field(default_factory=dict)

    def __bool__(self):
        return self.ok


def refutation_degree(ref: Refutation) -> int:
    """``max(deg(g (sum x - r)), max_i deg(g_i (x_i^2 - x_i)), deg h)`` for this refutation."""
    if ref.expanded:
        n = ref.n
        lhs = (ref.g * (MultiPoly.linear_sum(n) - ref.r)).degree
        mult = max(((gi * _ideal_generator(n, i)).degree for i, gi in enumerate(ref.g_list)), default=-1)
        return max(lhs, mult, ref.h.degree)
    # symbolic: h is homogeneous of degree 2 level and nonzero when level <= n,
    # and no other part exceeds that degree
    if ref.level <= ref.n:
        return 2 * ref.level
    # level > n only happens for tiny n, where cancellations lower the degree
    return refutation_degree(candidate_refutation(ref.n, ref.level, ref.r, expand=True))


def _lhs_minus_rhs_expanded(ref: Refutation) -> MultiPoly:
    n = ref.n
    lhs = ref.g * (MultiPoly.linear_sum(n) - ref.r)
    for i, gi in enumerate(ref.g_list):
        lhs = lhs + gi * _ideal_generator(n, i)
    return lhs - 1 - ref.h


def verify_refutation(ref: Refutation, mode: str = "expand", seed: int = 0) -> RefutationCheck:
    """Check the refutation identity, that ``h`` is an explicit sos, and its degree."""
    n = ref.n
    if ref.h_sos.scale <= 0:
        return RefutationCheck(False, reason=f"h scale {ref.h_sos.scale} is not positive")
    degree = refutation_degree(ref)
    details = {}
    if mode == "expand":
        if not ref.expanded:
            return RefutationCheck(False, degree, "expand mode needs stored polynomials (small n)")
        diff = _lhs_minus_rhs_expanded(ref)
        if not diff.is_zero():
            e, c = min(diff.items())
            return RefutationCheck(False, degree, f"identity fails at monomial {e}: difference {c}")
        if ref.h_sos.squares is None or ref.h_sos.expand(n) != ref.h:
            return RefutationCheck(False, degree, "h differs from its listed squares")
        soundness = "exact term-by-term comparison"
    elif mode == "random_eval":
        rng = random.Random(seed)
        top = 2 * max(ref.k, 0) + 5
        for _ in range(RANDOM_POINTS):
            x = [Fraction(rng.randint(0, top)) for _ in range(n)]
            gv, gl, hv = ref.parts_at(x)
            lhs = gv * (sum(x, Fraction(0)) - ref.r) + sum(
                (gi * (xi * xi - xi) for gi, xi in zip(gl, x)), Fraction(0)
            )
            if lhs != 1 + hv:
                return RefutationCheck(False, degree, f"identity fails at point {x}: {lhs} != {1 + hv}")
            if ref.expanded and ref.h_sos.squares is not None:
                if ref.h_sos.expand(n)(x) != hv:
                    return RefutationCheck(False, degree, f"h differs from its squares at {x}")
        size = top + 1
        soundness = (
            f"{RANDOM_POINTS} points from {{0..{top}}}^n; a nonzero difference of degree <= {degree} "
            f"survives each with probability <= {degree}/{size}"
        )
        details["miss_probability_bound"] = Fraction(degree, size) ** RANDOM_POINTS if degree < size else Fraction(1)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    expected = 2 * ref.k + 4
    if degree > expected or (ref.level <= n and degree != expected):
        return RefutationCheck(False, degree, f"degree {degree} != {expected}", soundness, details)
    return RefutationCheck(True, degree, "", soundness, details)
