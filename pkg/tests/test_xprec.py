"""Extended-precision arithmetic: contracts, identities, and formatting."""

from __future__ import annotations

import random
from decimal import Decimal, localcontext
from fractions import Fraction

import pytest

from rarity import xprec as xp


class TestArith:
    def test_additive_inverse_is_canonical_zero(self):
        result = xp.add(1, -1)
        assert result == 0
        assert not result.is_signed()  # +0, not -0

    def test_mul_identity(self):
        rng = random.Random(7)
        for _ in range(50):
            x = Decimal(rng.randrange(-10**9, 10**9)).scaleb(rng.randrange(-40, 40))
            assert xp.mul(x, 1) == x

    def test_div_one_third_64_digits(self):
        d = xp.div(1, 3, precision=64)
        err = abs(Fraction(d) - Fraction(1, 3))
        assert err <= Fraction(1, 10**62)
        assert str(d) == "0." + "3" * 64

    def test_div_by_zero_raises(self):
        with pytest.raises(ZeroDivisionError):
            xp.div(1, 0)

    def test_relative_error_contract(self):
        # results correct to <= 10^-(P-2) at P digits (correct rounding is far better)
        rng = random.Random(11)
        for _ in range(100):
            a = Decimal(rng.randrange(1, 10**12)).scaleb(rng.randrange(-30, 30))
            b = Decimal(rng.randrange(1, 10**12)).scaleb(rng.randrange(-30, 30))
            for op in (xp.add, xp.sub, xp.mul, xp.div):
                got = op(a, b, precision=32)
                exact = {
                    xp.add: Fraction(a) + Fraction(b),
                    xp.sub: Fraction(a) - Fraction(b),
                    xp.mul: Fraction(a) * Fraction(b),
                    xp.div: Fraction(a) / Fraction(b),
                }[op]
                if exact == 0:
                    assert got == 0
                    continue
                rel = abs(Fraction(got) - exact) / abs(exact)
                assert rel <= Fraction(1, 10**30)

    def test_precision_scaling(self):
        # recomputing at 2P agrees with P result to >= P-4 digits
        rng = random.Random(13)
        for _ in range(30):
            a = Decimal(rng.randrange(1, 10**15)).scaleb(rng.randrange(-20, 20))
            b = Decimal(rng.randrange(1, 10**15)).scaleb(rng.randrange(-20, 20))
            lo = xp.div(a, b, precision=32)
            hi = xp.div(a, b, precision=64)
            assert abs(Fraction(lo) - Fraction(hi)) <= abs(Fraction(hi)) * Fraction(1, 10**28)


class TestElementary:
    def test_ln_one(self):
        assert xp.ln(1) == 0

    def test_ln_nonpositive_raises(self):
        with pytest.raises(ValueError):
            xp.ln(0)
        with pytest.raises(ValueError):
            xp.ln(-2)

    def test_log10_powers_of_ten_exact(self):
        for k in (1, 2, 7, 100, 12345, 10**6):
            assert xp.log10(Decimal(f"1e{k}")) == k

    def test_exp_ln_round_trip_value(self):
        two = xp.exp(xp.ln(2, precision=64), precision=64)
        rel = abs(Fraction(two) - 2) / 2
        assert rel <= Fraction(1, 10**60)

    def test_round_trip_random_grid(self):
        # exp(ln(x)) agrees with x to >= P-6 digits over [1e-50, 1e50]
        rng = random.Random(17)
        for _ in range(100):
            x = Decimal(rng.randrange(1, 10**10)).scaleb(rng.randrange(-50, 41))
            back = xp.exp(xp.ln(x, precision=64), precision=64)
            rel = abs(Fraction(back) - Fraction(x)) / Fraction(x)
            assert rel <= Fraction(1, 10**58)

    def test_exp_huge_negative_argument(self):
        # exponent range admits log10 magnitudes up to 1e9 without underflow
        v = xp.exp(xp.mul(-21815, xp.ln(10)))
        assert v != 0
        assert abs(xp.log10(v) + 21815) <= Decimal("1e-55")
        big = xp.exp10(Decimal(-10**9))
        assert big != 0
        assert xp.log10(big) == -(10**9)

    def test_power_fractional(self):
        r = xp.power(2, Decimal("0.5"), precision=50)
        assert abs(Fraction(r) ** 2 - 2) <= Fraction(1, 10**45)

    def test_power_negative_base_fractional_raises(self):
        with pytest.raises(ValueError):
            xp.power(-2, Decimal("0.5"))

    def test_huge_power_log10_two_decimals(self):
        # the largest catalogued quantity: 2^12288000 has log10 = 3699056.59 (2 d.p.)
        v = xp.power(2, 12288000, precision=64)
        lg = xp.log10(v, precision=64)
        assert lg.quantize(Decimal("0.01")) == Decimal("3699056.59")


class TestLogSumExp10:
    def test_halves_sum_to_one(self):
        half = xp.LogMagnitude.from_value(Decimal("0.5"))
        total = xp.log_sum_exp10([half, half])
        assert abs(total.log10) <= Decimal("1e-60")

    def test_singleton(self):
        x = xp.LogMagnitude(Decimal("-123.456"))
        assert xp.log_sum_exp10([x]) == x

    def test_two_term_closed_form(self):
        terms = [xp.LogMagnitude(Decimal(-1000000)), xp.LogMagnitude(Decimal(-1000010))]
        got = xp.log_sum_exp10(terms, precision=64)
        with localcontext(xp.context(80)):
            expected = Decimal(-1000000) + (1 + Decimal(10) ** -10).log10()
        # result magnitude ~1e6, so 64 significant digits give ~1e-58 absolute
        assert abs(got.log10 - expected) <= Decimal("1e-57")

    def test_zero_terms_skipped(self):
        x = xp.LogMagnitude(Decimal("-5"))
        got = xp.log_sum_exp10([xp.LogMagnitude.zero(), x, xp.LogMagnitude.zero()])
        assert got == x

    def test_all_zero_is_zero(self):
        assert xp.log_sum_exp10([xp.LogMagnitude.zero()]).is_zero

    def test_empty_raises(self):
        with pytest.raises(ValueError):
            xp.log_sum_exp10([])

    def test_superset_monotonicity(self):
        rng = random.Random(23)
        for _ in range(30):
            base = [xp.LogMagnitude(Decimal(rng.randrange(-10**6, 0))) for _ in range(5)]
            extra = base + [xp.LogMagnitude(Decimal(rng.randrange(-10**6, 0)))]
            assert xp.log_sum_exp10(base).log10 <= xp.log_sum_exp10(extra).log10


class TestLogMagnitude:
    def test_from_value_and_back(self):
        m = xp.LogMagnitude.from_value(Decimal("0.125"), precision=50)
        back = m.to_xreal(precision=50)
        assert abs(Fraction(back) - Fraction(1, 8)) <= Fraction(1, 10**45)

    def test_zero_marker(self):
        z = xp.LogMagnitude.from_value(0)
        assert z.is_zero
        assert z.to_xreal() == 0
        assert float(z) == float("-inf")

    def test_ordering(self):
        z = xp.LogMagnitude.zero()
        small = xp.LogMagnitude(Decimal(-100))
        big = xp.LogMagnitude(Decimal(-1))
        assert z < small < big
        assert max([small, z, big]) == big


class TestScientificFormat:
    def test_mantissa_exponent_split(self):
        m = xp.LogMagnitude(Decimal("-2017.905331"))
        mant, e = xp.scientific_parts(m, 9)
        assert e == -2018
        assert mant.startswith("1.24356")

    def test_format_known_value(self):
        lm = xp.LogMagnitude.from_value(Decimal("0.0107421875"), precision=40)
        assert xp.format_scientific(lm, 9) == "1.07421875e-2"

    def test_rounding_carry_into_exponent(self):
        # mantissa 9.9999... rounds up to 10 and must carry
        lm = xp.LogMagnitude.from_value(Decimal("9.9999999999999"), precision=40)
        assert xp.format_scientific(lm, 6) == "1.00000e+1"

    def test_zero_formats_as_zero(self):
        assert xp.format_scientific(xp.LogMagnitude.zero(), 9) == "0"

    def test_deterministic_width(self):
        lm = xp.LogMagnitude.from_value(Decimal(5), precision=40)
        assert xp.format_scientific(lm, 9) == "5.00000000e+0"


class TestFractionLog10:
    def test_simple(self):
        got = xp.fraction_log10(Fraction(1, 1000), precision=40)
        assert got == -3

    def test_near_one_cancellation(self):
        fr = 1 - Fraction(1, 10**50)
        got = xp.fraction_log10(fr, precision=40)
        # true value ~= -1/(10^50 ln 10); naive log difference would return 0
        assert got != 0
        expected = Decimal(-1) / (Decimal(10) ** 50 * Decimal(10).ln(xp.context(60)))
        assert abs(got - expected) <= abs(expected) * Decimal("1e-20")

    def test_nonpositive_raises(self):
        with pytest.raises(ValueError):
            xp.fraction_log10(Fraction(0))
