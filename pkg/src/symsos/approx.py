"""Chebyshev-based sum-of-squares approximations of ``f_k`` on the cube.

The central object is the "middle" polynomial

    p(z) = eps * T_d(s(z^2)),   s(u) = (L^2 + a^2 - 2u) / (L^2 - a^2),  L = n/2,

with ``d`` the least even degree such that ``T_d(s(1/4)) >= 1/(4 eps)``.  On
``a^2 <= z^2 <= L^2`` we have ``|s| <= 1`` so ``|p| <= eps``; near ``z = 0``
the polynomial is large enough that ``p(z) >= 1/4 - z^2`` everywhere.
Shifting by ``n/2`` turns this into an approximation of
``f_{(n-1)/2}(z) = (z - n/2)^2 - 1/4`` that is globally nonnegative, hence
a univariate sum of squares.

Because ``a`` is generally irrational, everything is parametrized by the
rational ``a_sq = a^2``; comparisons involving square roots and logarithms
are decided with rational enclosures.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

from gmpy2 import mpz

from .hypercube import fk_poly
from .polycore import (
    NonnegCert,
    UniPoly,
    as_rational,
    certify_nonneg,
    check_nonneg_cert,
    falling_factorial,
    log_enclosure,
    sqrt_enclosure,
)

# ---------------------------------------------------------------------------
# Parameters and the Chebyshev degree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MiddleParams:
    """``n`` (so ``L = n/2``), ``eps`` in ``(0, 1/4]`` and ``a_sq`` in ``[1/2, n/64]``."""

    n: int
    eps: Fraction
    a_sq: Fraction

    def __post_init__(self):
        object.__setattr__(self, "eps", as_rational(self.eps))
        object.__setattr__(self, "a_sq", as_rational(self.a_sq))
        if not 0 < self.eps <= Fraction(1, 4):
            raise ValueError(f"eps must lie in (0, 1/4], got {self.eps}")
        if self.a_sq < Fraction(1, 2):
            raise ValueError(f"a^2 = {self.a_sq} is below 1/2")
        if self.a_sq > Fraction(self.n, 64):
            raise ValueError(f"a^2 = {self.a_sq} exceeds n/64 = {Fraction(self.n, 64)}")


def _substitution(n: int, a_sq: Fraction) -> tuple[Fraction, Fraction]:
    """``(A, C)`` with ``s(u) = (A - 2u)/C``."""
    l_sq = Fraction(n * n, 4)
    return l_sq + a_sq, l_sq - a_sq


def s_of_u(n: int, a_sq, u) -> Fraction:
    a, c = _substitution(n, as_rational(a_sq))
    return (a - 2 * as_rational(u)) / c


def _cheb_int_value(d: int, num: int, den: int) -> int:
    """``T_d(num/den) * den**d`` (an integer)."""
    prev, cur = mpz(1), mpz(num)
    if d == 0:
        return prev
    den_sq = mpz(den) ** 2
    for _ in range(d - 1):
        prev, cur = cur, 2 * num * cur - den_sq * prev
    return cur


def cheb_at(d: int, x) -> Fraction:
    x = as_rational(x)
    return Fraction(int(_cheb_int_value(d, x.numerator, x.denominator)), x.denominator**d)


def chebyshev_degree(n: int, eps, a_sq, max_degree: int = 100000) -> int:
    """Least positive even ``d`` with ``T_d(1 + mu) >= 1/(4 eps)``.

    ``1 + mu = s(1/4) = 1 + 2(a^2 - 1/4)/(L^2 - a^2)``.  No range checks are
    applied to the parameters here.
    """
    eps = as_rational(eps)
    y = s_of_u(n, a_sq, Fraction(1, 4))
    if y <= 1:
        raise ValueError("T_d(1 + mu) never grows when mu <= 0")
    p, q = y.numerator, y.denominator
    target = 1 / (4 * eps)
    # U_d = T_d(p/q) * q**d satisfies U_{d+1} = 2p U_d - q^2 U_{d-1}
    prev, cur = mpz(1), mpz(p)
    qpow = mpz(q)
    for d in range(2, max_degree + 1):
        prev, cur = cur, 2 * p * cur - q * q * prev
        qpow *= q
        if d % 2 == 0 and Fraction(int(cur), int(qpow)) >= target:
            return d
    raise ArithmeticError("degree search exceeded max_degree")


# ---------------------------------------------------------------------------
# Integer Chebyshev compositions
# ---------------------------------------------------------------------------


def _poly_scale_add(a: list, ka, b: list, kb) -> list:
    """``ka*a + kb*b`` for integer coefficient lists."""
    out = [mpz(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += ka * x
    for i, x in enumerate(b):
        out[i] += kb * x
    return out


def _mul_small(a: list, r: list) -> list:
    """Product of a long integer polynomial by a short one."""
    out = [mpz(0)] * (len(a) + len(r) - 1)
    for j, c in enumerate(r):
        if c:
            for i, x in enumerate(a):
                out[i + j] += c * x
    return out


def cheb_compose_int(d: int, r: list, e: int) -> list:
    """Integer polynomial ``Q`` with ``T_d(R(z)/e) = Q(z)/e**d``.

    ``R`` is a short integer polynomial; recurrence
    ``Q_{k+1} = 2 R Q_k - e^2 Q_{k-1}``.
    """
    r = [mpz(c) for c in r]
    prev, cur = [mpz(1)], list(r)
    if d == 0:
        return prev
    e_sq = mpz(e) ** 2
    two_r = [2 * c for c in r]
    for _ in range(d - 1):
        prev, cur = cur, _poly_scale_add(_mul_small(cur, two_r), 1, prev, -e_sq)
    return cur


def _int_scaled_substitution(n: int, a_sq: Fraction) -> tuple[int, int, int]:
    """Integers ``(A', B', C')`` with ``s(u) = (A' - B'u)/C'``."""
    a, c = _substitution(n, a_sq)
    den = math.lcm(a.denominator, c.denominator)
    return int(a * den), 2 * den, int(c * den)


def middle_poly(params: MiddleParams) -> tuple[UniPoly, int]:
    """``(p, d*)`` with ``p(z) = eps * T_{d*}(s(z^2))``."""
    d = chebyshev_degree(params.n, params.eps, params.a_sq)
    a, b, c = _int_scaled_substitution(params.n, params.a_sq)
    q = cheb_compose_int(d, [a, -b], c)  # polynomial in u
    coeffs = [mpz(0)] * (2 * len(q) - 1)
    for i, x in enumerate(q):
        coeffs[2 * i] = x
    eps = params.eps
    p = UniPoly.from_int([x * eps.numerator for x in coeffs], eps.denominator * mpz(c) ** d)
    return p, d


def middle_value(params: MiddleParams, d: int, z) -> Fraction:
    """``p(z)`` through the value recurrence (independent of the coefficients)."""
    return params.eps * cheb_at(d, s_of_u(params.n, params.a_sq, as_rational(z) ** 2))


# ---------------------------------------------------------------------------
# Nonnegativity of p(z) - 1/4 + z^2 through the Chebyshev variable
# ---------------------------------------------------------------------------


@dataclass
class ReducedNonnegCert:
    """``p(z) - 1/4 + z^2 = g(s(z^2))`` with ``g >= 0`` on ``(-inf, y_max]``.

    As ``z`` ranges over the reals, ``y = s(z^2) = (A - 2z^2)/C`` ranges
    exactly over ``(-inf, y_max]`` with ``y_max = A/C``, so the certificate
    for ``g`` on that half-line proves global nonnegativity.
    """

    n: int
    eps: Fraction
    a_sq: Fraction
    d: int
    g: UniPoly
    y_max: Fraction
    cert: NonnegCert


def reduced_g(params: MiddleParams, d: int) -> UniPoly:
    """``g(y) = eps T_d(y) + (A - C y)/2 - 1/4`` (note ``z^2 = (A - C y)/2``)."""
    a, c = _substitution(params.n, params.a_sq)
    t = cheb_compose_int(d, [0, 1], 1)
    g = UniPoly.from_int(t) * params.eps + UniPoly((a / 2 - Fraction(1, 4), -c / 2))
    return g


def certify_middle_reduced(params: MiddleParams, d: int) -> ReducedNonnegCert | object:
    a, c = _substitution(params.n, params.a_sq)
    g = reduced_g(params, d)
    y_max = a / c
    cert = certify_nonneg(g, hi=y_max)
    if not cert:
        return cert
    return ReducedNonnegCert(params.n, params.eps, params.a_sq, d, g, y_max, cert)


def check_reduced_cert(rc: ReducedNonnegCert, p: UniPoly | None = None) -> bool:
    """Re-derive ``g`` and ``y_max`` from the parameters and re-check the certificate.

    When ``p`` is given, also confirm ``p(z) - 1/4 + z^2 == g(s(z^2))``
    as polynomials.
    """
    params = MiddleParams(rc.n, rc.eps, rc.a_sq)
    a, c = _substitution(rc.n, rc.a_sq)
    if reduced_g(params, rc.d) != rc.g or rc.y_max != a / c:
        return False
    if rc.cert.lo is not None or rc.cert.hi != rc.y_max:
        return False
    if not check_nonneg_cert(rc.g, rc.cert):
        return False
    if p is not None:
        s = UniPoly((a / c, 0, -2 / c))
        if rc.g.compose(s) != p - Fraction(1, 4) + UniPoly((0, 0, 1)):
            return False
    return True


# ---------------------------------------------------------------------------
# Degree bounds (exact comparisons through rational enclosures)
# ---------------------------------------------------------------------------


def _decide(lhs_lo_hi, rhs_lo_hi) -> bool | None:
    (a, b), (c, e) = lhs_lo_hi, rhs_lo_hi
    if b < c:
        return True
    if a >= e:
        return False
    return None


def middle_degree_within_bound(params: MiddleParams, d: int) -> bool:
    """``d <= ceil(3n ln(1/(2 eps)) / (4 sqrt(2) a)) + 1``, decided exactly.

    For integer ``d`` this is ``d - 2 < X``; with ``X > 0`` we square:
    ``(d-2)^2 * 32 a^2 < 9 n^2 ln(1/(2 eps))^2``.
    """
    if d - 2 <= 0:
        return True
    lhs = Fraction((d - 2) ** 2 * 32) * params.a_sq
    bits = 64
    while bits <= 8192:
        lo, hi = log_enclosure(1 / (2 * params.eps), bits)
        if lo < 0:
            return False
        res = _decide((lhs, lhs), (9 * params.n**2 * lo * lo, 9 * params.n**2 * hi * hi))
        if res is not None:
            return res
        bits *= 2
    raise ArithmeticError("degree comparison undecided")


def middle_degree_ceiling(params: MiddleParams) -> int:
    """``ceil(3n ln(1/(2 eps)) / (4 sqrt(2) a)) + 1`` as an integer."""
    from .polycore import ceil_exact

    def enc(bits):
        l_lo, l_hi = log_enclosure(1 / (2 * params.eps), bits)
        r_lo, r_hi = sqrt_enclosure(32 * params.a_sq, bits)  # 4 sqrt(2) a
        return 3 * params.n * l_lo / r_hi, 3 * params.n * l_hi / r_lo

    return ceil_exact(enc) + 1


def l1_degree_claim(n: int, delta) -> int:
    """``ceil(3 sqrt(n) ln(1/delta) / (sqrt(2) delta))``."""
    from .polycore import ceil_exact

    delta = as_rational(delta)

    def enc(bits):
        l_lo, l_hi = log_enclosure(1 / delta, bits)
        r_lo, r_hi = sqrt_enclosure(Fraction(n, 2), bits)
        return 3 * r_lo * l_lo / delta, 3 * r_hi * l_hi / delta

    return ceil_exact(enc)


def l1_degree_within_claim(n: int, delta, d: int) -> bool:
    """``d <= ceil(Y)`` with ``Y = 3 sqrt(n) ln(1/delta)/(sqrt(2) delta)``.

    Equivalent to ``d - 1 < Y``, i.e. ``2 (d-1)^2 delta^2 < 9 n ln(1/delta)^2``.
    """
    delta = as_rational(delta)
    if d - 1 <= 0:
        return True
    lhs = 2 * Fraction((d - 1) ** 2) * delta**2
    bits = 64
    while bits <= 8192:
        lo, hi = log_enclosure(1 / delta, bits)
        res = _decide((lhs, lhs), (9 * n * lo * lo, 9 * n * hi * hi))
        if res is not None:
            return res
        bits *= 2
    raise ArithmeticError("degree comparison undecided")


# ---------------------------------------------------------------------------
# Property checks for the middle polynomial
# ---------------------------------------------------------------------------


@dataclass
class MiddleReport:
    params: MiddleParams
    d: int
    nonneg: bool
    nonneg_full: bool | None
    small_on_outer: bool
    bounded_by_two: bool
    degree_bound_ok: bool
    degree_ceiling: int
    worst_outer: Fraction
    worst_band: Fraction
    points_checked: int

    @property
    def ok(self) -> bool:
        return (
            self.nonneg
            and self.nonneg_full is not False
            and self.small_on_outer
            and self.bounded_by_two
            and self.degree_bound_ok
        )


def _check_points(params: MiddleParams, samples: int, seed: int) -> list:
    """Integers and half-integers in ``[0, n/2]`` plus random rationals in that range."""
    half = Fraction(params.n, 2)
    pts = [Fraction(i, 2) for i in range(0, params.n + 1)]
    rng = random.Random(seed)
    for _ in range(samples):
        pts.append(Fraction(rng.randrange(0, 10**6 * params.n + 1), 2 * 10**6))
    return [z for z in pts if z <= half]


def verify_middle(params: MiddleParams, p: UniPoly | None = None, d: int | None = None,
                  samples: int = 1000, seed: int = 0, full_sturm_max_degree: int = 120) -> MiddleReport:
    """Check the three properties of the middle polynomial.

    1. ``p(z) >= 1/4 - z^2`` for all real ``z``: exact certificate through
       the Chebyshev variable, plus a direct Sturm certificate of
       ``p(z) - 1/4 + z^2`` when ``deg p <= full_sturm_max_degree``.
    2. ``|p(z)| <= eps`` when ``a^2 <= z^2 <= n^2/4``.
    3. ``|p(z)| <= 2`` when ``1/4 <= z^2 <= n^2/4``.

    Properties 2-3 are checked at every integer and half-integer in range
    and at ``samples`` random rationals (``p`` is even, so ``z >= 0``
    suffices); values come from the coefficient form and are cross-checked
    against the value recurrence at the integer points.
    """
    if p is None or d is None:
        p, d = middle_poly(params)
    rc = certify_middle_reduced(params, d)
    nonneg = bool(rc) and check_reduced_cert(rc, p)
    nonneg_full = None
    if p.degree <= full_sturm_max_degree:
        nonneg_full = bool(certify_nonneg(p - Fraction(1, 4) + UniPoly((0, 0, 1))))
    pts = _check_points(params, samples, seed)
    vals = p.eval_many(pts)
    for z, v in zip(pts[: params.n + 1], vals):
        if v != middle_value(params, d, z):
            raise AssertionError(f"coefficient and recurrence values disagree at z={z}")
    outer_ok, band_ok = True, True
    worst_outer, worst_band = Fraction(0), Fraction(0)
    l_sq = Fraction(params.n**2, 4)
    for z, v in zip(pts, vals):
        z2 = z * z
        if params.a_sq <= z2 <= l_sq:
            worst_outer = max(worst_outer, abs(v))
            if abs(v) > params.eps:
                outer_ok = False
        if Fraction(1, 4) <= z2 <= l_sq:
            worst_band = max(worst_band, abs(v))
            if abs(v) > 2:
                band_ok = False
    return MiddleReport(
        params, d, nonneg, nonneg_full, outer_ok, band_ok,
        middle_degree_within_bound(params, d), middle_degree_ceiling(params),
        worst_outer, worst_band, len(pts),
    )


# ---------------------------------------------------------------------------
# The l1 approximation of f_{(n-1)/2}
# ---------------------------------------------------------------------------


@dataclass
class L1Cert:
    """Sum-of-squares l1-approximation of ``f_{(n-1)/2}``.

    ``h(z) = (z - n/2)^2 - 1/4 + p(z - n/2)``; ``half_degree`` is ``d*`` (the
    sos degree of ``h``), ``claimed_bound`` the degree ceiling
    ``ceil(3 sqrt(n) ln(1/delta) / (sqrt(2) delta))``.
    """

    n: int
    delta: Fraction
    eps: Fraction
    a_sq: Fraction
    h: UniPoly
    nonneg: ReducedNonnegCert
    half_degree: int
    claimed_bound: int
    l1_error: Fraction
    point_errors: list = field(default_factory=list)

    @property
    def l1_ok(self) -> bool:
        return self.l1_error <= self.delta * 2**self.n

    @property
    def degree_ok(self) -> bool:
        return l1_degree_within_claim(self.n, self.delta, self.half_degree)


def check_l1_hypothesis(n: int, delta) -> None:
    delta = as_rational(delta)
    if n % 2 == 0 or n < 1:
        raise ValueError(f"n must be odd and positive, got {n}")
    if delta > Fraction(1, 4):
        raise ValueError(f"delta = {delta} exceeds 1/4")
    if delta <= 0:
        raise ValueError("delta must be positive")
    # 8/sqrt(2n) <= delta  <=>  32 <= n delta^2
    if n * delta * delta < 32:
        raise ValueError(f"delta = {delta} is below 8/sqrt(2n) for n = {n}")


def _h_int(n: int, params: MiddleParams, d: int) -> tuple[list, int]:
    """Integer data ``(H, D)`` with ``p(z - n/2) = H(z)/D``."""
    a, b, c = _int_scaled_substitution(n, params.a_sq)
    # u = (z - n/2)^2 = V(z)/4 with V = 4z^2 - 4nz + n^2;  s = (4A - B V)/(4C)
    v = [n * n, -4 * n, 4]
    r = [4 * a - b * v[0], -b * v[1], -b * v[2]]
    q = cheb_compose_int(d, r, 4 * c)
    eps = params.eps
    return [x * eps.numerator for x in q], eps.denominator * mpz(4 * c) ** d


def l1_point_errors(n: int, params: MiddleParams, d: int, h: UniPoly) -> list:
    """``|h(i) - f(i)|`` for ``i = 0..n`` from the coefficients of ``h``."""
    f = fk_poly(n, (n - 1) // 2)
    return [abs(x - y) for x, y in zip(h.eval_many(range(n + 1)), f.eval_many(range(n + 1)))]


def l1_point_errors_recurrence(n: int, params: MiddleParams, d: int) -> list:
    """``|p(i - n/2)|`` for ``i = 0..n`` from the value recurrence."""
    return [abs(middle_value(params, d, Fraction(2 * i - n, 2))) for i in range(n + 1)]


def l1_approx_build(n: int, delta) -> L1Cert:
    """Build and certify ``h`` with ``eps = delta/2`` and ``a^2 = delta^2 n / 64``."""
    delta = as_rational(delta)
    check_l1_hypothesis(n, delta)
    params = MiddleParams(n, delta / 2, delta * delta * n / 64)
    d = chebyshev_degree(n, params.eps, params.a_sq)
    hi, hd = _h_int(n, params, d)
    half = Fraction(n, 2)
    shift = UniPoly((half * half - Fraction(1, 4), -n, 1))
    h = UniPoly.from_int(hi, hd) + shift
    rc = certify_middle_reduced(params, d)
    if not rc:
        raise ArithmeticError(f"nonnegativity certificate failed: {rc.reason}")
    errs = l1_point_errors(n, params, d, h)
    errs_rec = l1_point_errors_recurrence(n, params, d)
    if errs != errs_rec:
        raise AssertionError("pointwise errors disagree between coefficient and recurrence routes")
    l1 = sum((math.comb(n, i) * e for i, e in enumerate(errs)), Fraction(0))
    return L1Cert(n, delta, params.eps, params.a_sq, h, rc, d, l1_degree_claim(n, delta), l1, errs)


def verify_l1_cert(cert: L1Cert) -> dict:
    """Independent re-check of an :class:`L1Cert`; returns named boolean checks."""
    n, delta = cert.n, cert.delta
    params = MiddleParams(n, delta / 2, delta * delta * n / 64)
    d = chebyshev_degree(n, params.eps, params.a_sq)
    checks = {}
    checks["parameters"] = cert.eps == params.eps and cert.a_sq == params.a_sq and cert.half_degree == d
    checks["degree_of_h"] = cert.h.degree == 2 * d
    errs = l1_point_errors_recurrence(n, params, d)
    hv = cert.h.eval_many(range(n + 1))
    f = fk_poly(n, (n - 1) // 2)
    fv = f.eval_many(range(n + 1))
    checks["point_values"] = [abs(a - b) for a, b in zip(hv, fv)] == errs
    l1 = sum((math.comb(n, i) * e for i, e in enumerate(errs)), Fraction(0))
    checks["l1_error_value"] = l1 == cert.l1_error
    checks["l1_within_budget"] = l1 <= delta * 2**n
    checks["nonneg_certificate"] = check_reduced_cert(cert.nonneg) and cert.nonneg.d == d
    # h(z) - 0 = p(z - n/2) - 1/4 + (z - n/2)^2 ; confirm the shift identity at a few points
    checks["shift_identity"] = all(
        cert.h(z) == middle_value(params, d, z - Fraction(n, 2)) - Fraction(1, 4) + (z - Fraction(n, 2)) ** 2
        for z in (Fraction(0), Fraction(1, 3), Fraction(n, 2), Fraction(n))
    )
    type_one = all(
        e <= params.eps for i, e in enumerate(errs) if Fraction(2 * i - n, 2) ** 2 >= params.a_sq
    )
    checks["type_one_points"] = type_one
    checks["all_points_bounded_by_two"] = all(e <= 2 for e in errs)
    return checks


# ---------------------------------------------------------------------------
# Sampling-based approximation for k away from n/2
# ---------------------------------------------------------------------------


def hypergeometric_poly(n: int, q: int, j: int) -> UniPoly:
    """``Pr[j ones among q distinct random positions | weight z]`` as a polynomial in ``z``.

    Equals ``C(z, j) C(n - z, q - j) / C(n, q)``, of degree ``q``.
    """
    cz = falling_factorial(j) * Fraction(1, math.factorial(j))
    nz = falling_factorial(q - j).compose(UniPoly((n, -1))) * Fraction(1, math.factorial(q - j))
    return cz * nz * Fraction(1, math.comb(n, q))


def unbiased_fk_estimate(n: int, k: int, q: int, j: int) -> Fraction:
    """Unbiased estimate of ``f_k(|x|)`` from ``j`` ones among ``q >= 2`` samples.

    Uses ``E[j(j-1)] = q(q-1) w(w-1)/(n(n-1))`` and ``E[j] = q w / n`` with
    ``f_k(w) = w(w-1) - 2k w + k(k+1)``.
    """
    return (Fraction(n * (n - 1), q * (q - 1)) * j * (j - 1) - Fraction(2 * k * n, q) * j + k * (k + 1))


@dataclass
class SamplingApprox:
    n: int
    k: int
    delta: Fraction
    queries: int
    outputs: list  # output value per observed count j = 0..q
    h: UniPoly
    l1_error: Fraction

    @property
    def l1_ok(self) -> bool:
        return self.l1_error <= self.delta * 2**self.n


def sampling_queries(delta, c_queries: int) -> int:
    """``c_queries * ceil(ln(1/delta))``."""
    from .polycore import ceil_exact

    delta = as_rational(delta)
    if delta >= 1:
        return c_queries
    return c_queries * ceil_exact(lambda bits: log_enclosure(1 / delta, bits))


def sampling_approx_build(n: int, k: int, delta, c_queries: int, value="constant",
                          v=None, threshold=None) -> SamplingApprox:
    """Expected output of a classical sampling algorithm, as a polynomial in ``|x|``.

    The algorithm reads ``q = c_queries * ceil(ln(1/delta))`` distinct random
    positions (``q`` is capped at ``n``), sees ``j`` ones and outputs a
    nonnegative value ``out(j)``; the expectation is
    ``h(w) = sum_j out(j) Pr[j | w]``.  Output rules:

    * ``value="constant"``: ``out(j) = V`` (default ``n^2/4``) when
      ``|j/q - k/n| <= threshold`` (default ``1/(2q)``), else 0.
    * ``value="estimate"``: ``out(j) = max(0, unbiased f_k estimate)`` when
      within ``threshold`` (default: accept every ``j``), else 0.

    Since every output is nonnegative and leaf probabilities are products of
    literals ``x_i`` / ``1 - x_i`` (squares on the cube), ``h(|x|)`` is a sum
    of squares on the cube.
    """
    delta = as_rational(delta)
    if 100 * k >= 49 * n:
        raise ValueError(f"sampling construction needs k < 0.49 n, got k={k}, n={n}")
    if c_queries < 1:
        raise ValueError("c_queries must be >= 1")
    q = min(sampling_queries(delta, c_queries), n)
    if value == "constant":
        v = Fraction(n * n, 4) if v is None else as_rational(v)
        thr = Fraction(1, 2 * q) if threshold is None else as_rational(threshold)
        outs = [v if abs(Fraction(j, q) - Fraction(k, n)) <= thr else Fraction(0) for j in range(q + 1)]
    elif value == "estimate":
        if q < 2:
            raise ValueError("the estimate rule needs at least two queries")
        thr = None if threshold is None else as_rational(threshold)
        outs = []
        for j in range(q + 1):
            if thr is not None and abs(Fraction(j, q) - Fraction(k, n)) > thr:
                outs.append(Fraction(0))
            else:
                outs.append(max(Fraction(0), unbiased_fk_estimate(n, k, q, j)))
    else:
        raise ValueError(f"unknown output rule {value!r}")
    h = UniPoly()
    for j, o in enumerate(outs):
        if o:
            h = h + hypergeometric_poly(n, q, j) * o
    f = fk_poly(n, k)
    l1 = sum(
        (math.comb(n, w) * abs(a - b) for w, (a, b) in enumerate(zip(h.eval_many(range(n + 1)), f.eval_many(range(n + 1))))),
        Fraction(0),
    )
    return SamplingApprox(n, k, delta, q, outs, h, l1)
