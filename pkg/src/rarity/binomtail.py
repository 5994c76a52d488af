"""Binomial tail probabilities for extremely rare events.

Computes, far outside hardware float range: the binomial PMF and upper/lower
tail sums (log-domain and exact big-rational), the Chernoff/KL large-deviation
bound, sweeps of the tail over window length n with a ratio-scaled threshold,
the first n at which a tail drops below a log10 threshold, and recovery of the
per-trial probability p that reproduces a given tail by bisection.

Two independent routes exist on purpose: `tail` (extended-precision log
domain) and `tail_exact` (big-rational arithmetic); they cross-check each
other to dozens of digits. Everything is deterministic; `sweep` may fan out
over processes but its output is identical for any worker count.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

from .xprec import (
    DEFAULT_PRECISION,
    LogMagnitude,
    context,
    fraction_log10,
    format_scientific,
    xreal,
)

__all__ = [
    "UPPER",
    "LOWER",
    "BinomialSpec",
    "TailQuery",
    "SweepConfig",
    "SweepPoint",
    "SweepSeries",
    "CalibrationResult",
    "NoRootError",
    "parse_probability",
    "log10_binomial_coefficient",
    "log10_pmf",
    "tail",
    "tail_exact",
    "render_fraction_scientific",
    "chernoff",
    "threshold_count",
    "sweep",
    "crossover",
    "calibrate_p",
]

UPPER = "upper"  # P(X >= K)
LOWER = "lower"  # P(X <= K)

_GUARD = 10
_SWEEP_BLOCK = 2048  # n-values per parallel work unit (fixed: output never depends on workers)


def _check_direction(direction: str) -> str:
    if direction not in (UPPER, LOWER):
        raise ValueError(f"direction must be '{UPPER}' or '{LOWER}', got {direction!r}")
    return direction


def parse_probability(value) -> Fraction:
    """Parse a probability as an exact rational.

    Accepts Fraction, Decimal, int, str ('1/2', '0.994') and float (via its
    shortest decimal repr, so 0.994 means 994/1000).
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, Decimal):
        return Fraction(value)
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(Decimal(repr(value)))
    if isinstance(value, str):
        text = value.strip()
        if "/" in text:
            num, _, den = text.partition("/")
            return Fraction(int(num), int(den))
        return Fraction(Decimal(text))
    raise TypeError(f"cannot parse probability from {type(value).__name__}")


@dataclass(frozen=True)
class BinomialSpec:
    """n independent trials with per-trial success probability p (exact rational).

    p = 0 and p = 1 are rejected: their tails are the trivial constants 0/1
    and keeping them out keeps the log-domain paths total.
    """

    n: int
    p: Fraction

    def __post_init__(self):
        object.__setattr__(self, "p", parse_probability(self.p))
        if self.n < 1:
            raise ValueError(f"n must be >= 1, got {self.n}")
        if not (0 < self.p < 1):
            raise ValueError(f"p must satisfy 0 < p < 1, got {self.p}")

    def p_decimal(self, precision: int | None = None) -> Decimal:
        return xreal(self.p, precision)


@dataclass(frozen=True)
class TailQuery:
    """One tail question: P(X >= threshold) (upper) or P(X <= threshold) (lower)."""

    spec: BinomialSpec
    threshold: int
    direction: str

    def __post_init__(self):
        _check_direction(self.direction)
        if not (0 <= self.threshold <= self.spec.n):
            raise ValueError(
                f"threshold must be in [0, n={self.spec.n}], got {self.threshold}"
            )


def log10_binomial_coefficient(n: int, k: int, precision: int | None = None) -> Decimal:
    """log10 of C(n, k), from the exact big integer."""
    if k < 0 or k > n:
        raise ValueError(f"k must be in [0, n={n}], got {k}")
    if k == 0 or k == n:
        return Decimal(0)
    p = DEFAULT_PRECISION if precision is None else precision
    with localcontext(context(p)):
        return Decimal(math.comb(n, k)).log10()


def log10_pmf(spec: BinomialSpec, k: int, precision: int | None = None) -> LogMagnitude:
    """log10 of C(n,k) p^k (1-p)^(n-k)."""
    n = spec.n
    if k < 0 or k > n:
        raise ValueError(f"k must be in [0, n={n}], got {k}")
    p = DEFAULT_PRECISION if precision is None else precision
    with localcontext(context(p + _GUARD)):
        pd = spec.p_decimal(p + _GUARD)
        lg = (
            log10_binomial_coefficient(n, k, p + _GUARD)
            + k * pd.log10()
            + (n - k) * (1 - pd).log10()
        )
    with localcontext(context(p)):
        return LogMagnitude(+lg)


def _tail_log10(n: int, threshold: int, direction: str, pd: Decimal, prec: int) -> Decimal:
    """log10 of the queried tail, summed over the queried side.

    The boundary term's log10 anchors the scale; the remaining terms are
    accumulated relative to it with the one-multiply-per-term recurrence
    T(k+1)/T(k) = (n-k)/(k+1) * p/(1-p). All terms are positive so the sum
    is unconditionally stable; the wide decimal exponent range means the
    relative terms cannot over- or underflow even when the queried side
    spans the distribution's bulk.
    """
    with localcontext(context(prec)):
        lgp = pd.log10()
        lg1p = (1 - pd).log10()
        k0 = threshold
        lg_first = (
            Decimal(math.comb(n, k0)).log10() + k0 * lgp + (n - k0) * lg1p
        )
        total = Decimal(1)
        term = Decimal(1)
        if direction == UPPER:
            ratio_num = pd
            ratio_den = 1 - pd
            for k in range(k0, n):
                term = term * ((n - k) * ratio_num) / ((k + 1) * ratio_den)
                total += term
        else:
            ratio_num = 1 - pd
            ratio_den = pd
            for k in range(k0, 0, -1):
                term = term * (k * ratio_num) / ((n - k + 1) * ratio_den)
                total += term
        return lg_first + total.log10()


def tail(query: TailQuery, precision: int | None = None) -> LogMagnitude:
    """log10 of the tail probability, in the extended-precision log domain."""
    spec, k, direction = query.spec, query.threshold, query.direction
    n = spec.n
    p = DEFAULT_PRECISION if precision is None else precision
    pd = spec.p_decimal(p + _GUARD)
    # closed forms: full support and single-term tails
    if direction == UPPER and k == 0:
        return LogMagnitude.one()
    if direction == LOWER and k == n:
        return LogMagnitude.one()
    with localcontext(context(p + _GUARD)):
        if direction == UPPER and k == n:
            lg = n * pd.log10()
        elif direction == LOWER and k == 0:
            lg = n * (1 - pd).log10()
        else:
            lg = _tail_log10(n, k, direction, pd, p + _GUARD)
    with localcontext(context(p)):
        return LogMagnitude(+lg)


def tail_exact(query: TailQuery) -> Fraction:
    """The tail probability as an exact big rational.

    Independent oracle for `tail`: terms C(n,k) a^k (b-a)^(n-k) with p = a/b
    are generated by exact integer recurrences and summed over b^n.
    """
    spec, k0, direction = query.spec, query.threshold, query.direction
    n = spec.n
    a = spec.p.numerator
    b = spec.p.denominator
    if a <= 0 or a >= b:
        raise ValueError(f"exact tail requires 0 < a < b in p = a/b, got {spec.p}")
    c = b - a
    if direction == UPPER and k0 == 0:
        return Fraction(1)
    if direction == LOWER and k0 == n:
        return Fraction(1)
    comb = math.comb(n, k0)
    pw = a**k0 * c ** (n - k0)
    num = comb * pw
    if direction == UPPER:
        for k in range(k0, n):
            comb = comb * (n - k) // (k + 1)
            pw = pw // c * a
            num += comb * pw
    else:
        for k in range(k0, 0, -1):
            comb = comb * k // (n - k + 1)
            pw = pw // a * c
            num += comb * pw
    return Fraction(num, b**n)


def render_fraction_scientific(fr: Fraction, digits: int = 9, precision: int | None = None) -> str:
    """Scientific-notation rendering of an exact rational with an exact decimal exponent."""
    if fr < 0:
        raise ValueError("expected a non-negative rational")
    if fr == 0:
        return "0"
    lg = fraction_log10(fr, max(DEFAULT_PRECISION if precision is None else precision, digits + 12))
    return format_scientific(lg, digits)


def chernoff(spec: BinomialSpec, k: int, direction: str, precision: int | None = None) -> LogMagnitude:
    """Large-deviation upper bound exp(-n * D(a || p)) with a = k/n.

    D is the Kullback-Leibler divergence between Bernoulli(a) and
    Bernoulli(p). Valid (non-trivial) for a > p in the upper direction and
    a < p in the lower direction; elsewhere the trivial bound 1 is returned.
    The a = 0 and a = 1 endpoints use the limit a*ln(a/p) -> 0.
    """
    _check_direction(direction)
    n = spec.n
    if k < 0 or k > n:
        raise ValueError(f"k must be in [0, n={n}], got {k}")
    p = DEFAULT_PRECISION if precision is None else precision
    a = Fraction(k, n)
    if (direction == UPPER and a <= spec.p) or (direction == LOWER and a >= spec.p):
        return LogMagnitude.one()
    with localcontext(context(p + _GUARD)):
        ad = Decimal(a.numerator) / Decimal(a.denominator)
        pd = spec.p_decimal(p + _GUARD)
        divergence = Decimal(0)
        if k > 0:
            divergence += ad * (ad / pd).ln()
        if k < n:
            divergence += (1 - ad) * ((1 - ad) / (1 - pd)).ln()
        lg = -(n * divergence) / Decimal(10).ln()
    with localcontext(context(p)):
        return LogMagnitude(+lg)


@dataclass(frozen=True)
class SweepConfig:
    """Window-length sweep: for each n in [n_min, n_max] the threshold is
    K(n) = floor(r*n) for upper tails and ceil(r*n) for lower tails."""

    n_min: int
    n_max: int
    threshold_ratio: Fraction
    p: Fraction
    precision: int = DEFAULT_PRECISION

    def __post_init__(self):
        object.__setattr__(self, "threshold_ratio", parse_probability(self.threshold_ratio))
        object.__setattr__(self, "p", parse_probability(self.p))
        if not (2 <= self.n_min <= self.n_max):
            raise ValueError(f"need 2 <= n_min <= n_max, got [{self.n_min}, {self.n_max}]")
        if not (0 < self.threshold_ratio < 1):
            raise ValueError(f"threshold_ratio must be in (0, 1), got {self.threshold_ratio}")
        if not (0 < self.p < 1):
            raise ValueError(f"p must be in (0, 1), got {self.p}")


def threshold_count(ratio: Fraction, n: int, direction: str) -> int:
    """K(n) for a sweep: floor(r*n) (upper) or ceil(r*n) (lower), computed exactly."""
    _check_direction(direction)
    scaled = ratio * n
    if direction == UPPER:
        return scaled.numerator // scaled.denominator
    return -((-scaled.numerator) // scaled.denominator)


@dataclass(frozen=True)
class SweepPoint:
    n: int
    threshold: int
    log10_p: Decimal


@dataclass(frozen=True)
class SweepSeries:
    config: SweepConfig
    direction: str
    points: tuple[SweepPoint, ...]


def _sweep_block(args) -> list[SweepPoint]:
    n_lo, n_hi, ratio, p, direction, precision = args
    out = []
    for n in range(n_lo, n_hi):
        k = threshold_count(ratio, n, direction)
        q = TailQuery(BinomialSpec(n, p), k, direction)
        out.append(SweepPoint(n, k, tail(q, precision).log10))
    return out


def sweep(config: SweepConfig, direction: str, workers: int | None = None) -> SweepSeries:
    """Tail probability for every n in the configured range.

    `workers` only changes wall-clock time: the work is split into fixed
    blocks of n-values and each point is a pure function of (n, config), so
    the same series comes back for any worker count.
    """
    _check_direction(direction)
    blocks = [
        (lo, min(lo + _SWEEP_BLOCK, config.n_max + 1), config.threshold_ratio,
         config.p, direction, config.precision)
        for lo in range(config.n_min, config.n_max + 1, _SWEEP_BLOCK)
    ]
    if workers is None or workers <= 1 or len(blocks) == 1:
        results = [_sweep_block(b) for b in blocks]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_sweep_block, blocks))
    points = tuple(pt for block in results for pt in block)
    return SweepSeries(config=config, direction=direction, points=points)


def crossover(config: SweepConfig, direction: str, threshold_log10) -> int | None:
    """Smallest n in the sweep range whose tail drops strictly below the
    given log10 threshold; None if it never does."""
    _check_direction(direction)
    limit = xreal(threshold_log10)
    if limit >= 0:
        raise ValueError(f"threshold_log10 must be < 0, got {limit}")
    for n in range(config.n_min, config.n_max + 1):
        k = threshold_count(config.threshold_ratio, n, direction)
        q = TailQuery(BinomialSpec(n, config.p), k, direction)
        value = tail(q, config.precision)
        if not value.is_zero and value.log10 < limit:
            return n
    return None


class NoRootError(ValueError):
    """The calibration target is outside the attainable range."""


@dataclass(frozen=True)
class CalibrationResult:
    p: Fraction
    bracket: tuple[Fraction, Fraction]
    iterations: int
    residual: Decimal
    target_log10: Decimal


def calibrate_p(
    n: int,
    threshold: int,
    target_log10,
    precision: int | None = None,
    tolerance=Decimal("1e-6"),
    max_iterations: int = 500,
) -> CalibrationResult:
    """Recover p so the upper tail P(X >= threshold) has the target log10.

    The upper tail is strictly increasing in p, so bisection on (0, 1) has a
    unique root; iterate until |log10(tail) - target| <= tolerance. The
    bracket endpoints and iteration count come back with the result.
    """
    prec = DEFAULT_PRECISION if precision is None else precision
    target = xreal(target_log10)
    tol = xreal(tolerance)
    if target >= 0:
        raise NoRootError(f"target log10 must be < 0, got {target}")

    def f(p: Fraction) -> Decimal:
        q = TailQuery(BinomialSpec(n, p), threshold, UPPER)
        return tail(q, prec).log10 - target

    lo = Fraction(1, 10**9)
    hi = 1 - Fraction(1, 10**9)
    f_lo = f(lo)
    f_hi = f(hi)
    if f_lo > 0:
        raise NoRootError(
            f"target {target} is below the attainable range: the tail at "
            f"p = {float(lo):g} is already 10^{f_lo + target}"
        )
    if f_hi < 0:
        raise NoRootError(
            f"target {target} is above the attainable range: the tail at "
            f"p = {float(hi):g} is only 10^{f_hi + target}"
        )
    iterations = 0
    mid = lo
    residual = f_lo
    while iterations < max_iterations:
        mid = (lo + hi) / 2
        residual = f(mid)
        iterations += 1
        if abs(residual) <= tol:
            return CalibrationResult(
                p=mid, bracket=(lo, hi), iterations=iterations,
                residual=residual, target_log10=target,
            )
        if residual < 0:
            lo = mid
        else:
            hi = mid
    raise NoRootError(
        f"bisection did not reach tolerance {tol} in {max_iterations} iterations"
        f" (last residual {residual})"
    )
