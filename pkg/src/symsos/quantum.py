"""Expectation-level simulation of the quantum query algorithm for f_k.

Every quantity is a function of the Hamming weight only: Grover-type
searches are modelled by their success probabilities, never by state
vectors.  The four procedures are

* ``SAMPLE``: pick two unused indices, output ``x_i x_j (N)(N-1)``;
* ``HIGH``:   up to ``5M`` regular Grover searches collecting ``k`` ones;
* ``LOW``:    exact Grover searches with assumed weights ``t, t-1, ..., 1``;
* ``MAIN``:   doubling thresholds ``t = 2^i m`` for HIGH, then LOW(2m).

Probabilities that the primitives do not pin down are carried as closed
intervals, so the resulting per-weight envelope is sound for every
resolution of the unmodelled behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .polycore import as_rational, ceil_exact, cheb_value, pi_enclosure, sqrt_enclosure

REGULAR, EXACT, ADVERSARIAL = "regular", "exact", "adversarial"
REGULAR_ATTEMPTS = 3

Interval = tuple  # (lo, hi) of Fractions


def _clip(iv: Interval) -> Interval:
    lo, hi = iv
    return (max(Fraction(0), lo), min(Fraction(1), hi))


def ceil_log2(x) -> int:
    """Least integer ``L >= 0`` with ``2**L >= x`` (exact, ``x > 0``)."""
    x = as_rational(x)
    if x <= 0:
        raise ValueError("x must be positive")
    num, den = x.numerator, x.denominator
    L = 0
    while (den << L) < num:
        L += 1
    return L


def floor_log2(x) -> int:
    """Largest integer ``L`` with ``2**L <= x`` for ``x >= 1``."""
    x = as_rational(x)
    if x < 1:
        raise ValueError("x must be at least 1")
    return (x.numerator // x.denominator).bit_length() - 1


# ---------------------------------------------------------------------------
# Grover primitives
# ---------------------------------------------------------------------------


def _pi_sqrt_ceil(ratio: Fraction) -> int:
    """``ceil((pi/4) * sqrt(ratio))`` decided with rational enclosures."""

    def enclosure(bits):
        plo, phi = pi_enclosure(bits)
        slo, shi = sqrt_enclosure(ratio, bits)
        return plo * slo / 4, phi * shi / 4

    return ceil_exact(enclosure)


def single_run_success(n_remaining: int, weight: int, iterations: int) -> Fraction:
    """Success probability of Grover with ``iterations`` rounds, exactly.

    ``sin^2((2j+1) theta)`` with ``sin^2 theta = w/N`` equals
    ``(1 - T_{2j+1}(1 - 2w/N)) / 2``, a rational number.
    """
    if n_remaining <= 0:
        raise ValueError("no indices left to search")
    c = 1 - Fraction(2 * weight, n_remaining)
    return (1 - cheb_value(2 * iterations + 1, c)) / 2


@lru_cache(maxsize=None)
def randomized_success(n_remaining: int, weight: int, iter_range: int, attempts: int = REGULAR_ATTEMPTS) -> Fraction:
    """Success of ``attempts`` tries, each with a uniform iteration count in ``[0, iter_range)``."""
    avg = sum((single_run_success(n_remaining, weight, j) for j in range(iter_range)), Fraction(0)) / iter_range
    return 1 - (1 - avg) ** attempts


@dataclass(frozen=True)
class GroverModel:
    """One Grover-type search over ``n_remaining`` indices.

    ``regular``: up to three attempts with a uniformly random number of
    Grover rounds below ``iterations``; each attempt ends with one
    verification query.  When the true weight is at least
    ``assumed_weight`` the exact success probability is used (widened to
    ``[s, 1]`` if it falls under 1/2); below the assumption nothing is
    promised and the run is adversarial.

    ``exact``: finds a one with certainty iff the weight equals the
    assumption; otherwise adversarial.

    ``adversarial``: any success probability in ``[0, 1]``.
    """

    mode: str
    n_remaining: int
    assumed_weight: int
    iterations: int

    @classmethod
    def regular(cls, n: int, t: int) -> "GroverModel":
        """Regular search assuming weight at least ``t/2`` (``t`` even)."""
        a = max(1, t // 2)
        return cls(REGULAR, n, a, _pi_sqrt_ceil(Fraction(n, a)))

    @classmethod
    def exact(cls, n: int, assumed: int) -> "GroverModel":
        return cls(EXACT, n, assumed, _pi_sqrt_ceil(Fraction(n, assumed)))

    @property
    def queries(self) -> int:
        if self.mode == REGULAR:
            return REGULAR_ATTEMPTS * self.iterations
        return self.iterations + 1

    def success(self, weight: int, n_remaining: int | None = None) -> Interval:
        """Interval of possible success probabilities at the true weight."""
        n_rem = self.n_remaining if n_remaining is None else n_remaining
        if weight <= 0:
            return (Fraction(0), Fraction(0))
        if weight >= n_rem:
            return (Fraction(1), Fraction(1)) if self.mode != ADVERSARIAL else (Fraction(0), Fraction(1))
        if self.mode == EXACT:
            if weight == self.assumed_weight:
                return (Fraction(1), Fraction(1))
            return (Fraction(0), Fraction(1))
        if self.mode == REGULAR and weight >= self.assumed_weight:
            s = randomized_success(n_rem, weight, self.iterations)
            return (s, s) if s >= Fraction(1, 2) else (s, Fraction(1))
        return (Fraction(0), Fraction(1))


# ---------------------------------------------------------------------------
# SAMPLE
# ---------------------------------------------------------------------------

SAMPLE_QUERIES = 2


def sample_exp(n: int, excluded: int, w_outside: int) -> Fraction:
    """Expected output of SAMPLE with ``w_outside`` ones among ``n - excluded`` indices."""
    rest = n - excluded
    if rest < 2:
        raise ValueError("SAMPLE needs at least two indices outside S")
    if not 0 <= w_outside <= rest:
        raise ValueError("w_outside out of range")
    # P(x_i = x_j = 1) = w'(w'-1) / (N(N-1)), times the scale N(N-1)
    return Fraction(w_outside * (w_outside - 1))


def sample_exp_bruteforce(n: int, excluded: int, w_outside: int) -> Fraction:
    """Same expectation by enumerating every ordered pair of indices."""
    rest = n - excluded
    x = [1] * w_outside + [0] * (rest - w_outside)
    total = Fraction(0)
    count = 0
    for i in range(rest):
        for j in range(rest):
            if i != j:
                total += x[i] * x[j] * rest * (rest - 1)
                count += 1
    return total / count


# ---------------------------------------------------------------------------
# HIGH
# ---------------------------------------------------------------------------


def high_rounds(k: int, delta) -> int:
    """``M = max(k, ceil(log2(1/delta)))``."""
    return max(k, ceil_log2(1 / as_rational(delta)))


def binomial_tail(runs: int, k: int) -> Fraction:
    """``2^{-runs} * sum_{i<k} C(runs, i)``: fewer than ``k`` heads among fair coins."""
    return Fraction(sum(math.comb(runs, i) for i in range(k)), 2**runs)


@dataclass
class HighReport:
    n: int
    t: int
    delta: Fraction
    k: int
    rounds: int
    tail: Fraction
    queries: int
    checks: dict = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def high_chain_checks(k: int, delta) -> dict:
    """The inequality chain bounding HIGH's failure, each link as integers.

    With ``N = 5M`` and ``q = k/N``:
    ``tail <= 2^{-(1-H(q))N}``  <=>  ``sum_{i<k} C(N,i) * k^k (N-k)^{N-k} <= N^N``;
    ``2^{-(1-H(q))N} <= 2^{-M}`` <=>  ``N^N <= 2^{4M} k^k (N-k)^{N-k}``;
    ``2^{-M} <= delta``          <=>  ``2^M * delta >= 1``.
    """
    delta = as_rational(delta)
    M = high_rounds(k, delta)
    N = 5 * M
    partial = sum(math.comb(N, i) for i in range(k))
    ent = k**k * (N - k) ** (N - k)  # 0**0 == 1 covers k = 0
    return {
        "tail_le_entropy": partial * ent <= N**N,
        "entropy_le_2^-M": N**N <= 2 ** (4 * M) * ent,
        "2^-M_le_delta": 2**M * delta >= 1,
        "tail_le_delta": binomial_tail(N, k) <= delta,
    }


def high_simulate(n: int, t: int, delta, k: int) -> HighReport:
    """Failure bound and query count for HIGH(x, t, delta) collecting ``k`` ones."""
    delta = as_rational(delta)
    if not 0 < delta < 1:
        raise ValueError("delta must lie in (0, 1)")
    if t <= 2 * k:
        raise ValueError("HIGH requires t > 2k")
    if t > n:
        raise ValueError("t cannot exceed n")
    M = high_rounds(k, delta)
    if k == 0:
        return HighReport(n, t, delta, k, M, Fraction(0), 0, {"tail_le_delta": True})
    grover = GroverModel.regular(n, t)
    tail = binomial_tail(5 * M, k)
    return HighReport(n, t, delta, k, M, tail, 5 * M * grover.queries, high_chain_checks(k, delta))


def high_failure_interval(n: int, t: int, k: int, rounds: int, w: int, widen: Fraction = Fraction(0)) -> Interval:
    """Interval for P(HIGH collects fewer than ``k`` ones) at weight ``w``.

    Dynamic programme over the number of ones found so far.  A larger
    success probability in every state can only increase the count found
    (coupling with shared uniforms), so the extreme failure probabilities
    come from running the chain with all lower, resp. all upper, ends.
    """
    if k == 0:
        return (Fraction(0), Fraction(0))
    grover = GroverModel.regular(n, t)
    succ = []
    for c in range(k):
        lo, hi = grover.success(w - c, n - c)
        succ.append(_clip((lo - widen, hi + widen)))

    def fail(pick):
        dist = [Fraction(0)] * (k + 1)
        dist[0] = Fraction(1)
        for _ in range(5 * rounds):
            new = [Fraction(0)] * (k + 1)
            new[k] = dist[k]
            for c in range(k):
                if dist[c]:
                    s = succ[c][pick]
                    new[c] += dist[c] * (1 - s)
                    new[c + 1] += dist[c] * s
            dist = new
        return 1 - dist[k]

    if all(lo == hi for lo, hi in succ):
        p = fail(0)
        return (p, p)
    return (fail(1), fail(0))


# ---------------------------------------------------------------------------
# LOW
# ---------------------------------------------------------------------------


def f_k(k: int, w) -> Fraction:
    return Fraction((w - k) * (w - k - 1))


def low_queries(n: int, t: int) -> int:
    """``sum_{i=1}^t`` exact-Grover cost at assumed weight ``i`` (worst case ``N = n``)."""
    return sum(GroverModel.exact(n, i).queries for i in range(1, t + 1))


@dataclass
class LowResult:
    n: int
    t: int
    w: int
    k: int
    guaranteed: bool
    output: Fraction | None
    outputs: frozenset
    queries: int
    invariant_ok: bool
    note: str = ""


def low_reachable(t: int, w: int) -> tuple[frozenset, bool]:
    """Reachable numbers of ones found by LOW(x, t) at weight ``w``.

    States are ``(i, remaining ones)``.  A search whose assumption equals
    the remaining weight succeeds; a search with a wrong assumption may or
    may not succeed (both branches are kept).  Also returns whether the
    invariant ``i >= remaining`` held in every reachable state.
    """
    states = {w}
    invariant = True
    for i in range(t, 0, -1):
        new = set()
        for rem in states:
            if i < rem:
                invariant = False
            if rem == 0:
                new.add(rem)
            elif rem == i:
                new.add(rem - 1)
            else:
                new.update((rem, rem - 1))
        states = new
    return frozenset(w - rem for rem in states), invariant


def low_paths(t: int, w: int):
    """Enumerate every adversarial branch of LOW explicitly (small ``t``)."""

    def walk(i, rem, trail):
        if i == 0:
            yield trail, w - rem
            return
        if rem == 0:
            yield from walk(i - 1, rem, trail + (False,))
        elif rem == i:
            yield from walk(i - 1, rem - 1, trail + (True,))
        else:
            yield from walk(i - 1, rem - 1, trail + (True,))
            yield from walk(i - 1, rem, trail + (False,))

    yield from walk(t, w, ())


def low_simulate(n: int, t: int, w: int, k: int) -> LowResult:
    """Output of LOW(x, t) at weight ``w`` over all adversarial branches."""
    if not 0 <= w <= n or t < 0:
        raise ValueError("invalid weight or threshold")
    found, invariant = low_reachable(t, w)
    outputs = frozenset(f_k(k, s) for s in found)
    queries = low_queries(n, t)
    if w > t:
        return LowResult(n, t, w, k, False, None, outputs, queries, invariant, "no guarantee: weight exceeds t")
    output = next(iter(outputs)) if len(outputs) == 1 else None
    ok = invariant and output == f_k(k, w)
    return LowResult(n, t, w, k, ok, output, outputs, queries, invariant)


# ---------------------------------------------------------------------------
# MAIN
# ---------------------------------------------------------------------------


def main_m(k: int, eps) -> int:
    """``m = max(k, ceil(log2(1/eps)))``."""
    return max(k, ceil_log2(1 / as_rational(eps)))


def main_schedule(n: int, k: int, eps) -> list:
    """``[(t, delta, M)]`` for ``i = 1 .. floor(log2(n/m))``."""
    eps = as_rational(eps)
    m = main_m(k, eps)
    out = []
    if n < 2 * m:
        return out
    for i in range(1, floor_log2(Fraction(n, m)) + 1):
        t = 2**i * m
        delta = eps / (4 * t * t)
        out.append((t, delta, high_rounds(k, delta)))
    return out


@dataclass
class EnvelopeRow:
    w: int
    lo: Fraction
    hi: Fraction
    target: Fraction
    p_fail: Interval
    exact: bool
    chain: dict = field(default_factory=dict)


@dataclass
class ExpectationEnvelope:
    n: int
    k: int
    eps: Fraction
    m: int
    rows: list
    query_count: int
    violations: list

    @property
    def ok(self) -> bool:
        return not self.violations

    def row(self, w: int) -> EnvelopeRow:
        return self.rows[w]


def _check_main_args(n: int, k: int, eps: Fraction):
    if not 1 <= k <= n - 2:
        raise ValueError("need 1 <= k <= n - 2")
    if not 0 < eps < Fraction(1, 2):
        raise ValueError("eps must lie in (0, 1/2)")


def query_budget(n: int, k: int, eps) -> int:
    """Worst-case number of queries of MAIN over all runs and outcomes."""
    eps = as_rational(eps)
    _check_main_args(n, k, eps)
    m = main_m(k, eps)
    high = sum(5 * M * GroverModel.regular(n, t).queries for t, _, M in main_schedule(n, k, eps))
    return high + max(SAMPLE_QUERIES, low_queries(n, min(2 * m, n)))


def main_simulate(n: int, k: int, eps, widen=0) -> ExpectationEnvelope:
    """Per-weight envelope of E[MAIN(x, eps)] and the check against f_k.

    Each HIGH call starts afresh, so the probability ``p`` that all of
    them miss ``k`` ones is a product of independent per-call intervals.
    If some call succeeds, SAMPLE outputs ``f_k`` exactly in expectation;
    otherwise LOW(x, 2m) outputs one of its reachable values.  ``widen``
    enlarges every regular-search success interval (used to test that the
    envelope only grows when the model gets less informative).
    """
    eps = as_rational(eps)
    widen = as_rational(widen)
    _check_main_args(n, k, eps)
    m = main_m(k, eps)
    schedule = main_schedule(n, k, eps)
    t_low = min(2 * m, n)
    rows, violations = [], []
    for w in range(n + 1):
        target = f_k(k, w)
        p_lo, p_hi = Fraction(1), Fraction(1)
        good = None
        for t, delta, M in schedule:
            lo, hi = high_failure_interval(n, t, k, M, w, widen)
            p_lo *= lo
            p_hi *= hi
            if t <= w < 2 * t:
                good = (t, delta, hi)
        found, _ = low_reachable(t_low, w)
        outs = [f_k(k, s) for s in found]
        o_min, o_max = min(outs), max(outs)
        ends = [target + p * (o - target) for p in (p_lo, p_hi) for o in (o_min, o_max)]
        lo_e, hi_e = min(ends), max(ends)
        chain = {}
        if good is not None:
            t, delta, p_good = good
            chain = {
                "t": t,
                "delta": delta,
                "p_le_delta": p_hi <= p_good <= delta,
                "delta_w2_le_eps": delta * w * w <= eps,
            }
        row = EnvelopeRow(w, lo_e, hi_e, target, (p_lo, p_hi), lo_e == hi_e == target, chain)
        rows.append(row)
        if hi_e - target > eps or target - lo_e > eps:
            violations.append(w)
    return ExpectationEnvelope(n, k, eps, m, rows, query_budget(n, k, eps), violations)
