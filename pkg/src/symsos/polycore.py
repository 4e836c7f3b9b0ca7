"""Exact rational scalars and dense univariate polynomials.

Everything here is exact: scalars are :class:`fractions.Fraction`, and
polynomial algorithms that need speed (Sturm sequences, evaluation at many
points) work on primitive integer representations backed by ``gmpy2``.

Main entry points
-----------------
* :class:`UniPoly` -- immutable dense polynomial in ``z`` with rational
  coefficients.
* :func:`cheb_poly`, :func:`falling_factorial`, :func:`lagrange_basis` --
  the construction families used throughout the package.
* :func:`poly_divide` -- exact long division.
* :func:`certify_nonneg` -- exact certificate that a polynomial is
  nonnegative on the real line (or on an interval), via squarefree
  decomposition and Sturm sequences.
* :func:`sos_two_squares` -- numeric two-squares split with an exactly
  recomputed residual.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from typing import Iterable, Iterator, Sequence

import gmpy2
from gmpy2 import mpz

Rational = Fraction

#: Degree of the zero polynomial.  A sentinel, never used in arithmetic.
NEG_INF = float("-inf")


def as_rational(x) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` / decimal strings to a Fraction.

    Floats are rejected: they would silently introduce rounding.
    """
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, type(mpz(0))):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    if isinstance(x, float):
        raise TypeError("floats are not accepted as exact rationals; pass a string or Fraction")
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def _sign(x) -> int:
    return (x > 0) - (x < 0)


def _lcm(a: int, b: int) -> int:
    return a // math.gcd(a, b) * b


# ---------------------------------------------------------------------------
# Integer polynomial helpers (coefficient lists, index = power)
# ---------------------------------------------------------------------------


def _trim(c: list) -> list:
    while c and c[-1] == 0:
        c.pop()
    return c


def _int_conv(a: Sequence[int], b: Sequence[int]) -> list:
    if not a or not b:
        return []
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return out


def _int_derivative(f: Sequence[int]) -> list:
    return [i * f[i] for i in range(1, len(f))]


def _int_content(f: Sequence[int]) -> int:
    g = mpz(0)
    for c in f:
        g = gmpy2.gcd(g, c)
        if g == 1:
            break
    return g


def _int_primitive(f: Sequence[int]) -> list:
    """Divide by the content and make the leading coefficient positive."""
    f = [mpz(c) for c in f]
    if not f:
        return f
    g = _int_content(f)
    if _sign(f[-1]) < 0:
        g = -g
    return [c // g for c in f]


def _int_prem(a: Sequence[int], b: Sequence[int]) -> list:
    """Pseudo-remainder ``lc(b)**(deg a - deg b + 1) * a mod b``."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - len(b) + 1
    while a and len(a) - 1 >= db:
        lead = a[-1]
        shift = len(a) - 1 - db
        head = [lb * x for x in a[:shift]]
        tail = [lb * x - lead * y for x, y in zip(a[shift:-1], b)]
        a = head + tail
        e -= 1
        _trim(a)
    if a and e > 0:
        f = lb**e
        a = [f * x for x in a]
    return a


def _int_eval_sign(f: Sequence[int], point: tuple[int, int]) -> int:
    """Sign of ``f(P/Q)`` for ``Q > 0`` using homogeneous integer Horner."""
    if not f:
        return 0
    p, q = point
    acc = f[-1]
    qpow = mpz(1)
    for i in range(len(f) - 2, -1, -1):
        qpow *= q
        acc = acc * p + f[i] * qpow
    return _sign(acc)


def _sign_at_neg_inf(f: Sequence[int]) -> int:
    if not f:
        return 0
    s = _sign(f[-1])
    return s if (len(f) - 1) % 2 == 0 else -s


def _sturm_chain(f: Sequence[int]) -> Iterator[tuple[int, list]]:
    """Yield ``(c, S)`` so that ``c*S`` is the Sturm sequence of ``f``.

    The polynomials ``S`` form the subresultant polynomial remainder sequence
    of ``(f, f')``, which keeps coefficient growth polynomial.  Each Sturm
    term equals ``c`` times a positive rational multiple of ``S``; the
    positive multiples do not affect sign counts.  The final ``S`` is a
    scalar multiple of ``gcd(f, f')``.
    """
    s_prev = list(f)
    s_cur = _int_derivative(f)
    yield 1, s_prev
    if not s_cur:
        return
    c_prev, c_cur = 1, 1
    yield c_cur, s_cur
    delta = len(s_prev) - len(s_cur)
    beta = mpz(-1) if (delta + 1) % 2 else mpz(1)
    psi = mpz(-1)
    while True:
        r = _int_prem(s_prev, s_cur)
        if not r:
            return
        s_new = [gmpy2.divexact(x, beta) for x in r]
        lc = s_cur[-1]
        # Sturm remainder: -rem(T_{i-1}, T_i) = -c_prev * beta * S_new / lc**(delta+1)
        c_new = -c_prev * _sign(beta) * (_sign(lc) ** (delta + 1))
        yield c_new, s_new
        delta_new = len(s_cur) - len(s_new)
        if delta == 1:
            psi = -lc
        else:
            psi = gmpy2.divexact((-lc) ** delta, psi ** (delta - 1))
        beta = -lc * psi**delta_new
        s_prev, s_cur = s_cur, s_new
        c_prev, c_cur = c_cur, c_new
        delta = delta_new


def _variations(signs: Iterable[int]) -> int:
    last = 0
    count = 0
    for s in signs:
        if s == 0:
            continue
        if last and s != last:
            count += 1
        last = s
    return count


def _point(x: Fraction) -> tuple[int, int]:
    return mpz(x.numerator), mpz(x.denominator)


def sturm_count(f_int: Sequence[int], lo: Fraction | None = None, hi: Fraction | None = None) -> tuple[int, list]:
    """Number of distinct real roots of integer polynomial ``f_int`` in ``(lo, hi]``.

    ``None`` endpoints mean -inf / +inf.  Returns ``(count, gcd_poly)`` where
    ``gcd_poly`` is a scalar multiple of ``gcd(f, f')`` (integer coefficients).
    The chain is streamed: only two remainders are alive at a time.
    """
    f_int = [mpz(c) for c in f_int]
    if not f_int:
        raise ValueError("zero polynomial has infinitely many roots")
    lo_pt = None if lo is None else _point(as_rational(lo))
    hi_pt = None if hi is None else _point(as_rational(hi))
    signs_lo: list[int] = []
    signs_hi: list[int] = []
    last = None
    for c, s in _sturm_chain(f_int):
        signs_lo.append(c * (_sign_at_neg_inf(s) if lo_pt is None else _int_eval_sign(s, lo_pt)))
        signs_hi.append(c * (_sign(s[-1]) if hi_pt is None else _int_eval_sign(s, hi_pt)))
        last = s
    count = _variations(signs_lo) - _variations(signs_hi)
    if len(last) > 1 and any(pt is not None and _int_eval_sign(last, pt) == 0 for pt in (lo_pt, hi_pt)):
        # an endpoint is a multiple root: every chain member vanishes there,
        # so recount on the squarefree part, where zeros at endpoints are harmless
        sf, rem = poly_divide(UniPoly.from_int(f_int), UniPoly.from_int(last))
        assert rem.is_zero()
        count = sturm_count(_int_primitive(sf.to_int()[0]), lo, hi)[0]
    return count, last


# ---------------------------------------------------------------------------
# UniPoly
# ---------------------------------------------------------------------------


class UniPoly:
    """Immutable dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``z**i``; trailing zeros are trimmed,
    so the zero polynomial has an empty coefficient tuple and degree
    :data:`NEG_INF`.
    """

    __slots__ = ("_c", "_hash")

    def __init__(self, coeffs: Iterable = ()):
        c = [as_rational(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self._c = tuple(c)
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def z(cls) -> "UniPoly":
        return cls((0, 1))

    @classmethod
    def const(cls, c) -> "UniPoly":
        return cls((c,))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> "UniPoly":
        p = cls.const(lead)
        for r in roots:
            p = p * cls((-as_rational(r), 1))
        return p

    @classmethod
    def from_int(cls, coeffs: Sequence[int], denom: int = 1) -> "UniPoly":
        """Build ``(sum coeffs[i] z^i) / denom`` from integer data."""
        d = int(denom)
        return cls(Fraction(int(c), d) for c in coeffs)

    # -- basic accessors --------------------------------------------------
    @property
    def coeffs(self) -> tuple:
        return self._c

    @property
    def degree(self):
        return len(self._c) - 1 if self._c else NEG_INF

    def is_zero(self) -> bool:
        return not self._c

    @property
    def lc(self) -> Fraction:
        return self._c[-1] if self._c else Fraction(0)

    def coeff(self, i: int) -> Fraction:
        return self._c[i] if 0 <= i < len(self._c) else Fraction(0)

    def to_int(self) -> tuple[list, int]:
        """Return ``(integer coefficients, positive denominator)``."""
        den = reduce(_lcm, (c.denominator for c in self._c), 1)
        return [mpz(c.numerator * (den // c.denominator)) for c in self._c], den

    # -- arithmetic ---------------------------------------------------------
    @staticmethod
    def _coerce(other) -> "UniPoly":
        return other if isinstance(other, UniPoly) else UniPoly.const(other)

    def __add__(self, other):
        o = self._coerce(other)
        n = max(len(self._c), len(o._c))
        return UniPoly(self.coeff(i) + o.coeff(i) for i in range(n))

    __radd__ = __add__

    def __neg__(self):
        return UniPoly(-c for c in self._c)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            k = as_rational(other)
            return UniPoly(k * c for c in self._c)
        if not self._c or not other._c:
            return UniPoly()
        a, da = self.to_int()
        b, db = other.to_int()
        return UniPoly.from_int(_int_conv(a, b), da * db)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, UniPoly):
            q, r = poly_divide(self, other)
            if not r.is_zero():
                raise ValueError("polynomial division is not exact")
            return q
        k = as_rational(other)
        if k == 0:
            raise ZeroDivisionError("division by zero scalar")
        return UniPoly(c / k for c in self._c)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative exponent")
        result = UniPoly.const(1)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self._c == other._c
        try:
            return self._c == UniPoly.const(other)._c
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._c)
        return self._hash

    # -- evaluation and calculus -------------------------------------------
    def __call__(self, x):
        if isinstance(x, UniPoly):
            return self.compose(x)
        x = as_rational(x)
        acc = Fraction(0)
        for c in reversed(self._c):
            acc = acc * x + c
        return acc

    def eval_many(self, xs: Iterable) -> list:
        """Evaluate at many rationals using one shared integer representation."""
        ints, den = self.to_int()
        out = []
        for x in xs:
            x = as_rational(x)
            p, q = x.numerator, x.denominator
            if not ints:
                out.append(Fraction(0))
                continue
            acc = ints[-1]
            qpow = mpz(1)
            for i in range(len(ints) - 2, -1, -1):
                qpow *= q
                acc = acc * p + ints[i] * qpow
            out.append(Fraction(int(acc), int(qpow * den)))
        return out

    def compose(self, inner: "UniPoly") -> "UniPoly":
        acc = UniPoly()
        for c in reversed(self._c):
            acc = acc * inner + c
        return acc

    def shift(self, c) -> "UniPoly":
        """Return ``p(z + c)``."""
        return self.compose(UniPoly((as_rational(c), 1)))

    def derivative(self) -> "UniPoly":
        return UniPoly(i * self._c[i] for i in range(1, len(self._c)))

    def max_abs_coeff(self) -> Fraction:
        return max((abs(c) for c in self._c), default=Fraction(0))

    # -- display -----------------------------------------------------------
    def __repr__(self):
        return f"UniPoly({[str(c) for c in self._c]})"

    def __str__(self):
        if not self._c:
            return "0"
        parts = []
        for i in range(len(self._c) - 1, -1, -1):
            c = self._c[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if mono and abs(c) == 1:
                term = mono
            elif mono:
                term = f"{abs(c)}*{mono}"
            else:
                term = str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, term))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, term in parts[1:]:
            out += f" {sign} {term}"
        return out


Z = UniPoly.z()


# ---------------------------------------------------------------------------
# Construction families
# ---------------------------------------------------------------------------


def cheb_poly(d: int) -> UniPoly:
    """Chebyshev polynomial of the first kind ``T_d`` via the three-term recurrence."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    prev, cur = [mpz(1)], [mpz(0), mpz(1)]
    if d == 0:
        return UniPoly.from_int(prev)
    for _ in range(d - 1):
        nxt = [mpz(0)] + [2 * x for x in cur]
        for i, x in enumerate(prev):
            nxt[i] -= x
        prev, cur = cur, nxt
    return UniPoly.from_int(cur)


def cheb_value(d: int, x) -> Fraction:
    """``T_d(x)`` evaluated by the value recurrence (no coefficient expansion)."""
    if d < 0:
        raise ValueError("degree must be nonnegative")
    x = as_rational(x)
    prev, cur = Fraction(1), x
    if d == 0:
        return prev
    for _ in range(d - 1):
        prev, cur = cur, 2 * x * cur - prev
    return cur


def falling_factorial(k: int) -> UniPoly:
    """``z (z-1) ... (z-k+1)``; ``k = 0`` gives the constant 1."""
    if k < 0:
        raise ValueError("k must be nonnegative")
    return UniPoly.from_roots(range(k))


def lagrange_basis(n: int, k: int) -> UniPoly:
    """Degree-n Lagrange basis polynomial on nodes ``0..n`` with ``L_k(k) = 1``."""
    if n < 0 or not 0 <= k <= n:
        raise ValueError(f"need 0 <= k <= n, got n={n}, k={k}")
    denom = 1
    for j in range(n + 1):
        if j != k:
            denom *= k - j
    return UniPoly.from_roots((j for j in range(n + 1) if j != k), Fraction(1, denom))


def poly_divide(num: UniPoly, den: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Exact long division: ``num = q*den + r`` with ``deg r < deg den``."""
    if den.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    r = list(num.coeffs)
    dd = den.degree
    lc = den.lc
    q = [Fraction(0)] * max(len(r) - dd, 0)
    dc = den.coeffs
    while len(r) - 1 >= dd and r:
        shift = len(r) - 1 - dd
        f = r[-1] / lc
        q[shift] = f
        for i in range(dd + 1):
            r[shift + i] -= f * dc[i]
        r.pop()
        while r and r[-1] == 0:
            r.pop()
    return UniPoly(q), UniPoly(r)


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd over Q (computed on primitive integer polynomials)."""
    if a.is_zero():
        return UniPoly.const(1) if b.is_zero() else b / b.lc
    if b.is_zero():
        return a / a.lc
    x, _ = a.to_int()
    y, _ = b.to_int()
    x, y = _int_primitive(x), _int_primitive(y)
    if len(x) < len(y):
        x, y = y, x
    while y:
        r = _int_prem(x, y)
        x, y = y, (_int_primitive(r) if r else [])
    g = UniPoly.from_int(x)
    return g / g.lc


def squarefree_decomposition(p: UniPoly) -> tuple[Fraction, list]:
    """Yun's algorithm: ``p = c * prod a_i**i`` with monic, squarefree, coprime ``a_i``.

    Returns ``(c, [a_1, a_2, ...])``.
    """
    if p.is_zero():
        raise ValueError("zero polynomial has no squarefree decomposition")
    c = p.lc
    f = p / c
    if f.degree == 0:
        return c, []
    fp = f.derivative()
    a0 = poly_gcd(f, fp)
    b = f / a0
    cc = fp / a0
    d = cc - b.derivative()
    factors = []
    while b.degree > 0:
        a = poly_gcd(b, d)
        factors.append(a)
        b = b / a
        cc = d / a
        d = cc - b.derivative()
    while factors and factors[-1].degree == 0:
        factors.pop()
    return c, factors


# ---------------------------------------------------------------------------
# Nonnegativity certificates
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class NonnegCert:
    """Proof that ``even_part**2 * odd_part`` (== the input) is >= 0 on an interval.

    ``odd_part`` is squarefree; ``sturm_root_count_of_odd_part`` is its number
    of real roots inside the interval (must be 0), and ``sample`` is a point
    of the interval where ``odd_part`` is positive.  ``lo``/``hi`` of ``None``
    mean the corresponding end is infinite (the global case has both None).
    """

    even_part: UniPoly
    odd_part: UniPoly
    sturm_root_count_of_odd_part: int
    sample: Fraction
    lo: Fraction | None = None
    hi: Fraction | None = None

    @property
    def is_global(self) -> bool:
        return self.lo is None and self.hi is None


@dataclass(frozen=True)
class NonnegFailure:
    """Why a polynomial is not nonnegative.

    ``interval`` (when present) is a rational interval ``[a, b]`` on which
    the odd part changes sign, i.e. it isolates a real root of odd
    multiplicity.  ``negative_point`` is a point where the input is negative
    (when one is found).
    """

    reason: str
    interval: tuple | None = None
    negative_point: Fraction | None = None

    def __bool__(self):
        return False


def _decompose_even_odd(p: UniPoly) -> tuple[UniPoly, UniPoly]:
    """Split ``p = even**2 * odd`` with ``odd`` squarefree (Yun decomposition)."""
    c, factors = squarefree_decomposition(p)
    even = UniPoly.const(1)
    odd = UniPoly.const(c)
    for i, a in enumerate(factors, start=1):
        if i // 2:
            even = even * a ** (i // 2)
        if i % 2:
            odd = odd * a
    return even, odd


def _root_bound(f: UniPoly) -> Fraction:
    """Cauchy bound: all real roots lie in ``[-B, B]``."""
    lc = abs(f.lc)
    return 1 + max((abs(c) / lc for c in f.coeffs[:-1]), default=Fraction(0))


def _isolate_sign_change(f_int: list, lo: Fraction, hi: Fraction) -> tuple:
    """Bisect ``[lo, hi]`` (containing >= 1 simple root) down to one root with a sign change."""
    f = UniPoly.from_int(f_int)
    a, b = lo, hi
    for _ in range(400):
        fa, fb = f(a), f(b)
        if fa == 0:
            return (a, a)
        if fb == 0:
            return (b, b)
        cnt, _ = sturm_count(f_int, a, b)
        if cnt == 1 and _sign(fa) != _sign(fb):
            return (a, b)
        m = (a + b) / 2
        left, _ = sturm_count(f_int, a, m)
        if left >= 1:
            b = m
        else:
            a = m
    raise RuntimeError("root isolation did not converge")


def certify_nonneg(p: UniPoly, lo=None, hi=None):
    """Certify ``p(z) >= 0`` for all real ``z`` (or all ``z`` in ``[lo, hi]``).

    Returns a :class:`NonnegCert` on success and a falsy
    :class:`NonnegFailure` otherwise.  The procedure: squarefree
    decomposition ``p = e**2 * o``; the odd part ``o`` must have no real
    root in the interval (Sturm count), and be positive at a sample point
    (and at finite endpoints).  Globally this forces even degree and a
    positive leading coefficient.
    """
    lo = None if lo is None else as_rational(lo)
    hi = None if hi is None else as_rational(hi)
    if lo is not None and hi is not None and lo > hi:
        raise ValueError("empty interval")
    if p.is_zero():
        return NonnegCert(UniPoly(), UniPoly.const(1), 0, Fraction(0), lo, hi)
    # Roots exactly at finite endpoints are rejected below, so counting in
    # (lo, hi] is equivalent to counting in the closed interval.  The first
    # Sturm pass also yields gcd(p, p'); when that is constant, p is already
    # squarefree and the pass doubles as the root count of the odd part.
    if p.degree == 0:
        even, odd, count = UniPoly.const(1), p, 0
    else:
        count, gcd_tail = sturm_count(p.to_int()[0], lo, hi)
        if len(gcd_tail) == 1:
            even, odd = UniPoly.const(1), p
        else:
            even, odd = _decompose_even_odd(p)
            count = 0 if odd.degree == 0 else sturm_count(odd.to_int()[0], lo, hi)[0]
    odd_int, _ = odd.to_int()
    if lo is not None:
        sample = lo
    elif hi is not None:
        sample = hi
    else:
        sample = Fraction(0)
    endpoints = [e for e in (lo, hi) if e is not None]
    for e in endpoints:
        if odd(e) <= 0:
            if odd(e) < 0:
                return NonnegFailure("odd part negative at interval endpoint", None, e if p(e) < 0 else None)
            return NonnegFailure("odd part vanishes at interval endpoint", (e, e), None)
    if count > 0:
        a = lo if lo is not None else -_root_bound(odd)
        b = hi if hi is not None else _root_bound(odd)
        if a == b:
            interval = (a, b)
        else:
            interval = _isolate_sign_change(_int_primitive(odd_int), a, b)
        neg = None
        for x in interval:
            if p(x) < 0:
                neg = x
        if neg is None and interval[0] != interval[1]:
            # one side of the simple root is negative; probe just inside
            for x in (interval[0] + (interval[1] - interval[0]) / 3, interval[1] - (interval[1] - interval[0]) / 3):
                if p(x) < 0:
                    neg = x
        return NonnegFailure(f"odd part has {count} real root(s) of odd multiplicity", interval, neg)
    if odd(sample) <= 0:
        return NonnegFailure("odd part is negative throughout the interval", None, sample)
    return NonnegCert(even, odd, count, sample, lo, hi)


def check_nonneg_cert(p: UniPoly, cert: NonnegCert) -> bool:
    """Independently re-check a certificate against ``p``."""
    if not isinstance(cert, NonnegCert):
        return False
    if cert.even_part * cert.even_part * cert.odd_part != p:
        return False
    if p.is_zero():
        return True
    odd = cert.odd_part
    if odd.degree > 0:
        if poly_gcd(odd, odd.derivative()).degree > 0:
            return False
        count, _ = sturm_count(odd.to_int()[0], cert.lo, cert.hi)
        if count != 0 or count != cert.sturm_root_count_of_odd_part:
            return False
    for e in (cert.lo, cert.hi):
        if e is not None and odd(e) <= 0:
            return False
    s = cert.sample
    if (cert.lo is not None and s < cert.lo) or (cert.hi is not None and s > cert.hi):
        return False
    return odd(s) > 0


# ---------------------------------------------------------------------------
# Two-squares split (numeric witness, exact residual)
# ---------------------------------------------------------------------------


class RootFindingError(RuntimeError):
    """Numeric root finding could not produce a split within tolerance."""


def _rationalize(values, max_den: int) -> list:
    return [Fraction(float(v)).limit_denominator(max_den) for v in values]


def sos_two_squares(p: UniPoly, tol=Fraction(1, 10**9)) -> tuple[UniPoly, UniPoly, Fraction]:
    """Return ``(a, b, residual)`` with ``p ~ a**2 + b**2``.

    ``residual`` is the exact max-coefficient norm of ``p - a**2 - b**2``.
    The split is numeric (complex roots of the odd part paired by
    conjugation, then rounded to rationals); the rigorous proof of
    nonnegativity is :func:`certify_nonneg`.
    """
    import numpy as np

    tol = as_rational(tol)
    cert = certify_nonneg(p)
    if not cert:
        raise ValueError(f"polynomial is not globally nonnegative: {cert.reason}")
    if p.is_zero():
        return UniPoly(), UniPoly(), Fraction(0)
    even, odd = cert.even_part, cert.odd_part
    if odd.degree == 0:
        c = odd.lc
        root = math.isqrt(c.numerator), math.isqrt(c.denominator)
        if Fraction(root[0], root[1]) ** 2 == c:
            a = even * Fraction(root[0], root[1])
            return a, UniPoly(), Fraction(0)
        odd_re = [math.sqrt(c)]
        odd_im = [0.0]
    else:
        lc = float(odd.lc)
        roots = np.roots([float(c) for c in reversed(odd.coeffs)])
        upper = [r for r in roots if r.imag > 0]
        if 2 * len(upper) != odd.degree:
            raise RootFindingError("could not pair complex roots of the odd part")
        q = np.array([math.sqrt(lc)], dtype=complex)
        for r in upper:
            q = np.convolve(q, np.array([-r, 1.0]))
        odd_re = q.real
        odd_im = q.imag
    last = None
    for digits in range(3, 18):
        max_den = 10**digits
        a = even * UniPoly(_rationalize(odd_re, max_den))
        b = even * UniPoly(_rationalize(odd_im, max_den))
        if b.lc < 0:
            b = -b
        residual = (p - a * a - b * b).max_abs_coeff()
        last = residual
        if residual <= tol:
            return a, b, residual
    raise RootFindingError(f"residual {float(last):.3e} above tolerance {float(tol):.3e}")


# ---------------------------------------------------------------------------
# Rational enclosures of irrational constants
# ---------------------------------------------------------------------------


def sqrt_enclosure(x, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rationals ``lo <= sqrt(x) <= hi`` with ``hi - lo <= 2**-bits``."""
    x = as_rational(x)
    if x < 0:
        raise ValueError("square root of a negative number")
    scale = 1 << bits
    # sqrt(num/den) = sqrt(num*den)/den
    root = math.isqrt(x.numerator * x.denominator * scale * scale)
    lo = Fraction(root, x.denominator * scale)
    hi = lo if lo * lo == x else Fraction(root + 1, x.denominator * scale)
    return lo, hi


def _atanh_series(y: Fraction, terms: int) -> tuple[Fraction, Fraction]:
    """Bounds on ``2*atanh(y)`` for ``0 <= y < 1``."""
    s = Fraction(0)
    p = y
    y2 = y * y
    for k in range(terms):
        s += p / (2 * k + 1)
        p *= y2
    tail = 2 * p / ((2 * terms + 1) * (1 - y2))
    return 2 * s, 2 * s + tail


def log_enclosure(x, bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rationals bracketing ``ln(x)`` for rational ``x > 0``."""
    x = as_rational(x)
    if x <= 0:
        raise ValueError("logarithm of a nonpositive number")
    if x < 1:
        lo, hi = log_enclosure(1 / x, bits)
        return -hi, -lo
    m = 0
    while x >= 2:
        x /= 2
        m += 1
    terms = bits // 3 + 4
    l2_lo, l2_hi = _atanh_series(Fraction(1, 3), terms)  # ln 2 = 2 atanh(1/3)
    r_lo, r_hi = _atanh_series((x - 1) / (x + 1), terms)
    return m * l2_lo + r_lo, m * l2_hi + r_hi


def _atan_inv_bounds(m: int, terms: int) -> tuple[Fraction, Fraction]:
    """Bounds on ``atan(1/m)`` from consecutive partial sums of the alternating series."""
    s = Fraction(0)
    prev = None
    for k in range(terms + 1):
        prev = s
        s += Fraction((-1) ** k, (2 * k + 1) * m ** (2 * k + 1))
    return min(prev, s), max(prev, s)


def pi_enclosure(bits: int = 64) -> tuple[Fraction, Fraction]:
    """Rationals bracketing pi (Machin's formula)."""
    terms = bits // 4 + 4
    a_lo, a_hi = _atan_inv_bounds(5, terms)
    b_lo, b_hi = _atan_inv_bounds(239, terms)
    return 16 * a_lo - 4 * b_hi, 16 * a_hi - 4 * b_lo


def ceil_exact(enclosure, max_bits: int = 4096) -> int:
    """Ceiling of an irrational quantity given ``enclosure(bits) -> (lo, hi)``.

    Precision doubles until the ceiling is determined; raises if the
    quantity seems to be an integer (then no enclosure can decide it).
    """
    bits = 64
    while bits <= max_bits:
        lo, hi = enclosure(bits)
        if math.ceil(lo) == math.ceil(hi) and lo != math.ceil(lo):
            return math.ceil(lo)
        bits *= 2
    raise ArithmeticError("could not determine the ceiling; value may be an integer")
