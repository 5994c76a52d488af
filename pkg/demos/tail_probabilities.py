"""How unlikely is it that white noise behaves like music?

Walks the probability machinery end to end: a sanity-scale binomial tail,
the one-second continuity question at 44.1 kHz, the Chernoff bound for the
zero-crossing question, and the recovery of the per-trial probability that
reproduces the published headline number.
"""

from decimal import Decimal
from fractions import Fraction

from rarity import (
    BinomialSpec,
    SweepConfig,
    TailQuery,
    calibrate_p,
    chernoff,
    crossover,
    format_scientific,
    tail,
    tail_exact,
)

# --- warm-up: a tail small enough to check by hand -------------------------
# Ten fair coin flips; at least nine heads. Exactly 11 of the 1024 equally
# likely outcomes qualify.
query = TailQuery(BinomialSpec(10, Fraction(1, 2)), 9, "upper")
print("P(>= 9 heads in 10 fair flips)")
print("  exact     :", tail_exact(query))
print("  log-domain:", format_scientific(tail(query), 9))
print()

# --- the continuity question ------------------------------------------------
# One second at 44100 Hz. Ask for >= 99.4% "proximate" moves, i.e. at least
# K = floor(0.994 * 44100) = 43835 successes.
#
# Under the uniform white-noise model, the chance that one step moves by
# less than 0.1 is 0.0975 (= eps - eps^2/4 for eps = 0.1). With that p the
# tail is so small that its log10 is about -43145:
eps_model = tail(TailQuery(BinomialSpec(44100, Fraction(1, 10)), 43835, "upper"))
print("continuity tail at p = 0.1:")
print("  log10 =", eps_model.log10.quantize(Decimal("0.0001")))
print()

# The published headline for this experiment is 1.24355865e-2018, which that
# model clearly does not produce. Running the root-finder backwards recovers
# the per-trial probability that does:
target = -2018 + Decimal("1.24355865").log10()
calib = calibrate_p(44100, 43835, target, tolerance=Decimal("1e-12"))
print("calibrated per-trial probability p* =", float(calib.p))
print("  bisection iterations:", calib.iterations)
flagship = tail(TailQuery(BinomialSpec(44100, calib.p), 43835, "upper"))
print("  tail at p*:", format_scientific(flagship, 9))
print()

# --- how long a window before 'atom-in-the-universe' rare? ------------------
# There are ~10^80 atoms in the observable universe. Find the window length
# n at which the tail first drops below 1e-80.
config = SweepConfig(n_min=2, n_max=4000, threshold_ratio=Fraction(994, 1000), p=calib.p)
n80 = crossover(config, "upper", Decimal(-80))
print(f"tail < 1e-80 from n = {n80} samples "
      f"({1000 * n80 / 44100:.1f} ms at 44.1 kHz)")
print()

# --- the zero-crossing question ---------------------------------------------
# White noise crosses zero about half the time; music much less. The
# probability of at most 2205 crossings (5%) in a second is bounded by the
# Kullback-Leibler form of the Chernoff bound:
bound = chernoff(BinomialSpec(44100, Fraction(1, 2)), 2205, "lower")
print("Chernoff bound, <= 2205 zero crossings of 44100:")
print("  bound =", format_scientific(bound, 8))
print("  log10 =", bound.log10.quantize(Decimal("0.00001")))
