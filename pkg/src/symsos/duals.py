"""Dual objects: Grigoriev's functional, pseudo-densities and witnesses.

``G_r(p) = Sym^uni(p_bar)(r)`` evaluates the symmetrized multilinear
reduction of ``p`` at a (possibly non-integer) weight ``r``.  It kills the
knapsack ideal and is nonnegative on squares of degree at most ``k+1``
when ``k < r < n-k``; this is what forbids refutations below degree
``2k+4``.

Evaluating ``G_{n/2}`` on point masses gives a symmetric pseudo-density
for ``f_{floor(n/2)}`` at odd ``n``; scaled and negated it is a witness that
sos l1-approximations of degree ``(n-1)/2`` need average error above
``|E[Df]| / ||D||_inf``.  All decisions are exact; floats appear only in
fields named ``display``.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import linalg
from .blekherman import kernel_basis, kernel_square_constant, level_prefactor, inner
from .hypercube import MultiPoly, SymProfile, reduce_multilinear, sym_uni
from .polycore import UniPoly, as_rational, lagrange_basis

MOMENT_SIZE_GUARD = 4000
FULL_AUTO_LIMIT = 512  # above this the dense exact LDL takes minutes
EULER_GAMMA = 0.5772156649015329


# ---------------------------------------------------------------------------
# Grigoriev's functional
# ---------------------------------------------------------------------------


def grig_B(n: int, r, t: int) -> Fraction:
    """``G_r(x_S)`` for ``|S| = t``: ``r(r-1)...(r-t+1) / (n(n-1)...(n-t+1))``."""
    r = as_rational(r)
    if not 0 <= t <= n:
        raise ValueError("need 0 <= t <= n")
    num = Fraction(1)
    for i in range(t):
        num *= r - i
    return num / math.perm(n, t)


def grig_eval(p: MultiPoly, n: int, r) -> Fraction:
    """``G_r(p)``: reduce to multilinear, symmetrize, evaluate at ``r``."""
    if p.n != n:
        raise ValueError("variable count mismatch")
    return sym_uni(reduce_multilinear(p))(as_rational(r))


def grig_eval_direct(p: MultiPoly, n: int, r) -> Fraction:
    """Same functional term by term through ``B_t`` (independent route)."""
    r = as_rational(r)
    total = Fraction(0)
    for e, c in p.items():
        total += c * grig_B(n, r, sum(1 for x in e if x))
    return total


def _random_rational(rng: random.Random, span: int = 9) -> Fraction:
    return Fraction(rng.randint(-span, span), rng.randint(1, span))


def random_poly(n: int, degree: int, rng: random.Random, terms: int = 4, max_exp: int = 1) -> MultiPoly:
    """Sparse random polynomial of total degree at most ``degree``."""
    out = {}
    for _ in range(terms):
        size = rng.randint(0, min(degree, n))
        e = [0] * n
        budget = degree
        for i in rng.sample(range(n), size):
            if budget <= 0:
                break
            x = rng.randint(1, max(1, min(max_exp, budget)))
            e[i] = x
            budget -= x
        out[tuple(e)] = out.get(tuple(e), 0) + _random_rational(rng)
    return MultiPoly(n, out)


def _check_grig_regime(n: int, r: Fraction, k: int):
    if not k < r < n - k:
        raise ValueError(f"need k < r < n-k, got k={k}, r={r}, n={n}")
    if 2 * (k + 1) > n:
        raise ValueError("need k+1 <= n/2")


@dataclass
class GrigReport:
    n: int
    r: Fraction
    k: int
    trials: int
    checks: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    min_square_value: Fraction | None = None

    @property
    def ok(self) -> bool:
        return all(self.checks.values()) and not self.failures


def grig_property_report(n: int, r, k: int, trials: int = 200, seed: int = 0) -> GrigReport:
    """Check the four properties of ``G_r`` exactly.

    1. ``G_r(g (sum x - r)) = 0`` for ``deg g < n``: every monomial ``x_S``
       with ``|S| <= min(n-1, 2k+3)``, plus random ``g``;
    2. ``G_r(g (x_i^2 - x_i)) = 0`` for random ``g``;
    3. ``G_r(1) = 1``;
    4. ``G_r(p^2) >= 0`` for random ``p`` of degree at most ``k+1``, and for
       kernel elements via ``<p|p> (n-2t)!/n! prod (r-i)(n-r-i)``.
    """
    r = as_rational(r)
    _check_grig_regime(n, r, k)
    rng = random.Random(seed)
    rep = GrigReport(n, r, k, trials)
    lin = MultiPoly.linear_sum(n) - r
    top = min(n - 1, 2 * k + 3)

    ok1 = True
    for t in range(top + 1):
        if (n - t) * grig_B(n, r, t + 1) + (t - r) * grig_B(n, r, t) != 0:
            ok1 = False
            rep.failures.append(("B-recurrence", t))
        for s in itertools.combinations(range(n), t):
            if grig_eval(MultiPoly.monomial(n, s) * lin, n, r) != 0:
                ok1 = False
                rep.failures.append(("ideal-sum", s))
                break
    for _ in range(trials):
        g = random_poly(n, top, rng, max_exp=2)
        if grig_eval(g * lin, n, r) != 0:
            ok1 = False
            rep.failures.append(("ideal-sum-random", g))
    rep.checks["property1"] = ok1

    ok2 = True
    for _ in range(trials):
        g = random_poly(n, 2 * k + 2, rng, max_exp=3)
        i = rng.randrange(n)
        gen = MultiPoly.var(n, i, 2) - MultiPoly.var(n, i)
        if grig_eval(g * gen, n, r) != 0:
            ok2 = False
            rep.failures.append(("ideal-boolean", g, i))
    rep.checks["property2"] = ok2

    rep.checks["property3"] = grig_eval(MultiPoly.const(n, 1), n, r) == 1

    ok4 = True
    lowest = None
    for _ in range(trials):
        p = random_poly(n, k + 1, rng, terms=rng.randint(1, 6), max_exp=2)
        v = grig_eval(p * p, n, r)
        lowest = v if lowest is None else min(lowest, v)
        if v < 0:
            ok4 = False
            rep.failures.append(("square", p, v))
    for t in range(k + 2):
        for p in kernel_basis(n, t):
            v = grig_eval(p * p, n, r)
            closed = inner(p, p) * kernel_square_constant(n, t) * level_prefactor(n, t)(r)
            if v != closed or v < 0:
                ok4 = False
                rep.failures.append(("kernel-square", t, v, closed))
    rep.checks["property4"] = ok4
    rep.min_square_value = lowest
    return rep


# ---------------------------------------------------------------------------
# pseudo-densities and moment matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PseudoDensity:
    n: int
    d: int
    profile: SymProfile
    mean: Fraction
    e_df: Fraction
    sup: Fraction
    ratio: Fraction
    beats_sqrt_bound: bool


@dataclass(frozen=True)
class Witness:
    n: int
    d: int
    delta: Fraction
    profile: SymProfile

    def __post_init__(self):
        if self.profile.sup_norm() != 1:
            raise ValueError("a witness must have sup norm exactly 1")


def _check_odd(n: int):
    if n < 3 or n % 2 == 0:
        raise ValueError("n must be odd and at least 3")


def _half_point_values(n: int) -> list:
    """``L_w(n/2)`` for ``w = 0..n`` via the Lagrange basis."""
    half = Fraction(n, 2)
    return [lagrange_basis(n, w)(half) for w in range(n + 1)]


def pseudo_density_build(n: int) -> PseudoDensity:
    """``D(x) = 2^n G_{n/2}(delta_x) = 2^n L_{|x|}(n/2) / C(n,|x|)``."""
    _check_odd(n)
    lag = _half_point_values(n)
    profile = SymProfile(n, tuple(2**n * v / math.comb(n, w) for w, v in enumerate(lag)))
    mean = profile.expectation()
    f = UniPoly.from_roots((n // 2, n // 2 + 1))
    e_df = profile.expectation(f)
    sup = profile.sup_norm()
    ratio = e_df / sup
    # ratio < -1/(4 sqrt n)  <=>  ratio < 0 and 16 n ratio^2 > 1
    beats = ratio < 0 and 16 * n * ratio * ratio > 1
    if mean != 1:
        raise AssertionError(f"E[D] = {mean} != 1")
    return PseudoDensity(n, n - 1, profile, mean, e_df, sup, ratio, beats)


def _moment_value(profile: SymProfile, size: int) -> Fraction:
    """``E_x[psi(x) x_U]`` for ``|U| = size``."""
    n = profile.n
    total = Fraction(0)
    for w in range(size, n + 1):
        total += math.comb(n - size, w - size) * profile[w]
    return total / 2**n


def moment_matrix(profile: SymProfile, half: int) -> list:
    """``M[S,T] = E[psi x_{S u T}]`` over subsets with ``|S|, |T| <= half``."""
    n = profile.n
    index = [s for t in range(half + 1) for s in itertools.combinations(range(n), t)]
    cache = {}
    rows = []
    for s in index:
        ss = set(s)
        row = []
        for t in index:
            u = len(ss.union(t))
            if u not in cache:
                cache[u] = _moment_value(profile, u)
            row.append(cache[u])
        rows.append(row)
    return rows


def reduced_moment_blocks(profile: SymProfile, half: int) -> list:
    """Hankel blocks ``H_j[a][b] = mu_j(a+b)`` for ``j = 0..half``.

    ``mu_j(m) = E_x[psi(x) prod_{i<j} (|x|-i)(n-|x|-i) |x|^m]``.  Every
    ``Sym(p^2)`` with ``deg p <= half`` is ``sum_j s_j(z) prod_{i<j}(z-i)(n-z-i)``
    with ``s_j`` a univariate sos of degree ``<= 2(half-j)``, and each
    such term is attained, so ``E[psi p^2] >= 0`` for all such ``p`` iff all
    blocks are psd.
    """
    n = profile.n
    blocks = []
    for j in range(half + 1):
        if 2 * j > n:
            break
        size = half - j + 1
        pref = level_prefactor(n, j)
        weights = [math.comb(n, w) * profile[w] * pref(w) for w in range(n + 1)]
        mu = [sum((c * w**m for w, c in enumerate(weights)), Fraction(0)) / 2**n for m in range(2 * size - 1)]
        blocks.append([[mu[a + b] for b in range(size)] for a in range(size)])
    return blocks


def moment_size(n: int, half: int) -> int:
    return sum(math.comb(n, i) for i in range(half + 1))


def check_moment_sign(profile: SymProfile, d: int, want: str = "psd", method: str = "auto") -> bool:
    """Decide ``E[psi g^2] >= 0`` (``psd``) or ``<= 0`` (``nsd``) for ``deg g <= d/2``.

    ``full`` factors the subset-indexed moment matrix; ``reduced`` uses the
    symmetry-reduced Hankel blocks; ``auto`` picks ``full`` for matrices up
    to ``FULL_AUTO_LIMIT`` rows and ``reduced`` beyond.
    """
    if want not in ("psd", "nsd"):
        raise ValueError("want must be 'psd' or 'nsd'")
    half = d // 2
    size = moment_size(profile.n, half)
    if method == "auto":
        method = "full" if size <= FULL_AUTO_LIMIT else "reduced"
    decide = linalg.is_psd if want == "psd" else linalg.is_nsd
    if method == "full":
        if size > MOMENT_SIZE_GUARD:
            raise ValueError(f"moment matrix of size {size} exceeds guard {MOMENT_SIZE_GUARD}")
        return decide(moment_matrix(profile, half))
    if method == "reduced":
        return all(decide(b) for b in reduced_moment_blocks(profile, half))
    raise ValueError(f"unknown method {method!r}")


def witness_from_density(pd: PseudoDensity, delta) -> Witness:
    """``psi = -D / ||D||_inf`` at degree ``d = (n-1)/2``."""
    return Witness(pd.n, (pd.n - 1) // 2, as_rational(delta), pd.profile.scaled(-1 / pd.sup))


@dataclass
class WitnessReport:
    correlation: Fraction
    correlation_ok: bool
    moments_ok: bool
    norm_ok: bool

    @property
    def ok(self) -> bool:
        return self.correlation_ok and self.moments_ok and self.norm_ok

    def __bool__(self):
        return self.ok


def witness_check(w: Witness, f: UniPoly, method: str = "auto") -> WitnessReport:
    """``E[f psi] > delta``, ``E[p^2 psi] <= 0`` for ``deg p <= d``, ``||psi|| = 1``."""
    corr = w.profile.expectation(f)
    return WitnessReport(
        corr,
        corr > w.delta,
        check_moment_sign(w.profile, 2 * w.d, "nsd", method),
        w.profile.sup_norm() == 1,
    )


# ---------------------------------------------------------------------------
# the l_inf error bound at degree (n-1)/2
# ---------------------------------------------------------------------------


def appendix_d_A(m: int) -> Fraction:
    """``A(m) = sum_{i<=m} (C(2i,i)/4^i)^2``, cross-checked against its product form."""
    if m < 0:
        raise ValueError("m must be nonnegative")
    total = Fraction(0)
    for i in range(m + 1):
        total += Fraction(math.comb(2 * i, i), 4**i) ** 2
    if total != product_form_A(m):
        raise AssertionError("partial sum disagrees with the product form")
    return total


def product_form_A(m: int) -> Fraction:
    """``(2m+1)/16^m C(2m,m) sum_{l<=m} C(2m+1, l+m+1)/(2l+1)``."""
    s = sum((Fraction(math.comb(2 * m + 1, l + m + 1), 2 * l + 1) for l in range(m + 1)), Fraction(0))
    return Fraction(2 * m + 1, 16**m) * math.comb(2 * m, m) * s


def abs_lagrange_closed(n: int, k: int) -> Fraction:
    """``|L_k(n/2)| = n/2^{2n-1} C(n-1,(n-1)/2) C(n,k) / |n-2k|`` for odd ``n``."""
    _check_odd(n)
    return Fraction(n * math.comb(n - 1, (n - 1) // 2) * math.comb(n, k), 2 ** (2 * n - 1) * abs(n - 2 * k))


@dataclass
class LinfBound:
    n: int
    bound: Fraction
    abs_sum: Fraction
    identity_ok: bool
    display_asymptotic: float
    display_relative_gap: float


def linf_error_lower(n: int) -> LinfBound:
    """``eps >= 1 / (4 sum_k |L_k(n/2)|)`` with ``sum_k |L_k(n/2)| = A((n-1)/2)``."""
    _check_odd(n)
    abs_sum = sum((abs(v) for v in _half_point_values(n)), Fraction(0))
    a = appendix_d_A((n - 1) // 2)
    bound = 1 / (4 * abs_sum)
    asym = 1 / (4 * (math.log((n + 1) / 2) + EULER_GAMMA + math.log(16)) / math.pi)
    gap = abs(asym - float(bound)) / float(bound)
    return LinfBound(n, bound, abs_sum, abs_sum == a, asym, gap)
