"""Extended-precision real arithmetic for probabilities far outside float range.

Every probability produced by this package (values like 10^-9474) overflows or
underflows IEEE doubles, so all numeric work runs on arbitrary-precision
decimal floats (``XReal``, backed by :mod:`decimal`) with an exponent range of
+/- 10^15 decimal orders, and on ``LogMagnitude``, which represents a positive
quantity by its base-10 logarithm plus an exact-zero marker.

Precision is an explicit per-call parameter in decimal digits (default 64).
All functions are pure: values are immutable and no global context is mutated
(contexts are entered thread-locally for the duration of a call only).
"""

from __future__ import annotations

import decimal
from dataclasses import dataclass
from decimal import Decimal, localcontext
from fractions import Fraction

__all__ = [
    "DEFAULT_PRECISION",
    "XReal",
    "LogMagnitude",
    "context",
    "xreal",
    "add",
    "sub",
    "mul",
    "div",
    "ln",
    "exp",
    "log10",
    "exp10",
    "power",
    "log_sum_exp10",
    "fraction_log10",
    "format_scientific",
    "scientific_parts",
]

DEFAULT_PRECISION = 64

# Exponent budget: |log10(x)| up to 10^15, comfortably above the 10^9 the
# largest catalogued quantity needs.
_EMAX = 10**15
_EMIN = -(10**15)

# Extra working digits used inside composite operations so that the advertised
# precision survives accumulated rounding.
_GUARD = 10

XReal = Decimal


def context(precision: int) -> decimal.Context:
    """A fresh arithmetic context with `precision` significant decimal digits."""
    if precision < 1:
        raise ValueError(f"precision must be >= 1, got {precision}")
    return decimal.Context(prec=precision, Emax=_EMAX, Emin=_EMIN)


def _prec(precision: int | None) -> int:
    return DEFAULT_PRECISION if precision is None else int(precision)


def xreal(value, precision: int | None = None) -> XReal:
    """Convert `value` to an XReal.

    int, str and Decimal convert exactly; Fraction divides at the working
    precision; float goes through its shortest decimal repr (so 0.994 means
    994/1000, not the underlying binary value).
    """
    if isinstance(value, Decimal):
        return value
    if isinstance(value, int):
        return Decimal(value)
    if isinstance(value, str):
        return Decimal(value)
    if isinstance(value, Fraction):
        with localcontext(context(_prec(precision))):
            return Decimal(value.numerator) / Decimal(value.denominator)
    if isinstance(value, float):
        return Decimal(repr(value))
    raise TypeError(f"cannot convert {type(value).__name__} to XReal")


def add(a, b, precision: int | None = None) -> XReal:
    with localcontext(context(_prec(precision))):
        return xreal(a, precision) + xreal(b, precision)


def sub(a, b, precision: int | None = None) -> XReal:
    with localcontext(context(_prec(precision))):
        return xreal(a, precision) - xreal(b, precision)


def mul(a, b, precision: int | None = None) -> XReal:
    with localcontext(context(_prec(precision))):
        return xreal(a, precision) * xreal(b, precision)


def div(a, b, precision: int | None = None) -> XReal:
    b = xreal(b, precision)
    if b == 0:
        raise ZeroDivisionError("division by zero")
    with localcontext(context(_prec(precision))):
        return xreal(a, precision) / b


def ln(x, precision: int | None = None) -> XReal:
    x = xreal(x, precision)
    if x <= 0:
        raise ValueError(f"ln requires x > 0, got {x}")
    with localcontext(context(_prec(precision))):
        return x.ln()


def log10(x, precision: int | None = None) -> XReal:
    x = xreal(x, precision)
    if x <= 0:
        raise ValueError(f"log10 requires x > 0, got {x}")
    with localcontext(context(_prec(precision))):
        return x.log10()


def exp(x, precision: int | None = None) -> XReal:
    """e**x. Accepts |x| up to ~10^15 * ln(10): the result's decimal exponent
    simply lands in the wide exponent range instead of overflowing."""
    with localcontext(context(_prec(precision))):
        return xreal(x, precision).exp()


def exp10(x, precision: int | None = None) -> XReal:
    """10**x for arbitrary real x, same wide exponent range as exp()."""
    with localcontext(context(_prec(precision))):
        return Decimal(10) ** xreal(x, precision)


def power(x, y, precision: int | None = None) -> XReal:
    """x**y. Non-integer y requires x > 0."""
    x = xreal(x, precision)
    y = xreal(y, precision)
    if x <= 0 and y != y.to_integral_value():
        raise ValueError("power requires x > 0 for non-integer exponents")
    if x == 0 and y < 0:
        raise ZeroDivisionError("0 cannot be raised to a negative power")
    with localcontext(context(_prec(precision))):
        return x**y


@dataclass(frozen=True)
class LogMagnitude:
    """A positive quantity represented by its base-10 logarithm.

    ``is_zero`` marks an exact zero (log = -inf); consumers must ignore
    ``log10`` when it is set.
    """

    log10: Decimal
    is_zero: bool = False

    @classmethod
    def zero(cls) -> "LogMagnitude":
        return cls(Decimal(0), is_zero=True)

    @classmethod
    def one(cls) -> "LogMagnitude":
        return cls(Decimal(0))

    @classmethod
    def from_value(cls, value, precision: int | None = None) -> "LogMagnitude":
        v = xreal(value, precision)
        if v < 0:
            raise ValueError("LogMagnitude represents non-negative quantities")
        if v == 0:
            return cls.zero()
        return cls(log10(v, precision))

    def to_xreal(self, precision: int | None = None) -> XReal:
        """Materialize the quantity itself (10**log10); exact zero gives 0."""
        if self.is_zero:
            return Decimal(0)
        return exp10(self.log10, precision)

    def scientific(self, digits: int = 9) -> tuple[str, int]:
        return scientific_parts(self, digits)

    def format_scientific(self, digits: int = 9) -> str:
        return format_scientific(self, digits)

    def __float__(self) -> float:
        if self.is_zero:
            return float("-inf")
        return float(self.log10)

    def _key(self):
        return (not self.is_zero, self.log10 if not self.is_zero else Decimal(0))

    def __lt__(self, other: "LogMagnitude") -> bool:
        if self.is_zero:
            return not other.is_zero
        if other.is_zero:
            return False
        return self.log10 < other.log10

    def __le__(self, other: "LogMagnitude") -> bool:
        return self < other or self == other

    def __eq__(self, other) -> bool:
        if not isinstance(other, LogMagnitude):
            return NotImplemented
        if self.is_zero or other.is_zero:
            return self.is_zero and other.is_zero
        return self.log10 == other.log10

    def __hash__(self):
        return hash(self._key())


def log_sum_exp10(terms, precision: int | None = None) -> LogMagnitude:
    """log10 of a sum of positive quantities given by their LogMagnitudes.

    Stabilized by factoring out the maximum term:
    t_max + log10(sum 10^(t_i - t_max)). Exact-zero terms are skipped; an
    all-zero (or after skipping, empty) input yields the exact-zero magnitude.
    """
    terms = list(terms)
    if not terms:
        raise ValueError("log_sum_exp10 requires at least one term")
    live = [t.log10 for t in terms if not t.is_zero]
    if not live:
        return LogMagnitude.zero()
    p = _prec(precision)
    t_max = max(live)
    with localcontext(context(p + _GUARD)):
        total = Decimal(0)
        ten = Decimal(10)
        for t in live:
            total += ten ** (t - t_max)
        result = t_max + total.log10()
    with localcontext(context(p)):
        return LogMagnitude(+result)


def fraction_log10(fr: Fraction, precision: int | None = None) -> Decimal:
    """log10 of a positive rational, correct to the working precision.

    When num and den agree to their leading digits (ratio near 1) the naive
    difference of logs cancels, so the lost digits are counted up front and
    the ratio path runs at a correspondingly raised precision.
    """
    if fr <= 0:
        raise ValueError("fraction_log10 requires a positive rational")
    if fr == 1:
        return Decimal(0)
    p = _prec(precision)
    num = Decimal(fr.numerator)
    den = Decimal(fr.denominator)
    # magnitude of (num - den)/den tells how many digits a log difference loses
    gap = Decimal(fr.numerator - fr.denominator).adjusted() - den.adjusted()
    if gap < -2:
        lost = -gap
        with localcontext(context(p + _GUARD + lost)):
            res = (num / den).log10()
    else:
        with localcontext(context(p + _GUARD)):
            res = num.log10() - den.log10()
    with localcontext(context(p)):
        return +res


def _round_sig(x: Decimal, digits: int) -> Decimal:
    with localcontext(context(digits)):
        return +x


def scientific_parts(value, digits: int = 9) -> tuple[str, int]:
    """Mantissa string in [1, 10) with `digits` significant digits, plus the
    exact decimal exponent, for a LogMagnitude or a raw log10 Decimal."""
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if isinstance(value, LogMagnitude):
        if value.is_zero:
            return "0", 0
        lg = value.log10
    else:
        lg = xreal(value)
    e = int(lg.to_integral_value(rounding=decimal.ROUND_FLOOR))
    with localcontext(context(digits + _GUARD)):
        m = Decimal(10) ** (lg - e)
    m = _round_sig(m, digits)
    if m >= 10:  # rounding carried over, e.g. 9.9999 -> 10.0
        m = _round_sig(m / 10, digits)
        e += 1
    mantissa = format(m, "f")
    # pad to the full digit count so output width is deterministic
    intpart, _, frac = mantissa.partition(".")
    want = digits - len(intpart)
    if want > 0:
        mantissa = f"{intpart}.{frac.ljust(want, '0')}"
    return mantissa, e


def format_scientific(value, digits: int = 9) -> str:
    """Render as mantissa-exponent text, e.g. '1.07421875e-2'."""
    m, e = scientific_parts(value, digits)
    if m == "0":
        return "0"
    sign = "-" if e < 0 else "+"
    return f"{m}e{sign}{abs(e)}"
