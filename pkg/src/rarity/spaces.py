"""Comparative sizes of musical, combinatorial and physical spaces.

A registry of catalogued scenarios (every row of the published comparison
table), exact/symbolic quantities for the rows that recompute from a formula,
the DAW-project space-size formula, and table renderers (markdown, CSV, plain
text) showing log2, log10, the published integer order of magnitude, the
provenance class of each value, and a mismatch marker wherever our
recomputation departs from the published number by more than 0.05 in log2.

Scenario sizes are products of integer powers (evaluated by factor
logarithms, never by materializing astronomically large integers) or, where
no reproducible formula exists, the published log2 taken as a literal.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache

from . import binomtail
from .xprec import DEFAULT_PRECISION, context, xreal

__all__ = [
    "PI_64",
    "PARAM_LEVELS",
    "Quantity",
    "Scenario",
    "DawSpaceSpec",
    "quantity_log",
    "daw_space_log10",
    "haystack_odds",
    "builtin_scenarios",
    "mismatched_scenarios",
    "render_table",
    "PAPER_EQ5_LOG10",
    "PAPER_EQ6_LOG10",
    "DAW_EQ5_SPEC",
    "DAW_EQ6_SPEC",
]

# 64 significant digits of pi; enough for any 2-d.p. table value.
PI_64 = Decimal("3.141592653589793238462643383279502884197169399375105820974944592")

# 14-bit synth-parameter automation resolution used by the DAW-space formula.
PARAM_LEVELS = 16384

_MAX_MATERIALIZE_DIGITS = 10**7

_LOG_PRECISION = 32  # minimum digits for table logarithms


@dataclass(frozen=True)
class Quantity:
    """A (possibly astronomically large) positive quantity.

    Either a product of integer powers base**exponent (exact), or a magnitude
    given directly as a log2 value when no integer formula exists.
    """

    factors: tuple[tuple[int, int], ...] | None = None
    log2_value: Decimal | None = None

    def __post_init__(self):
        if (self.factors is None) == (self.log2_value is None):
            raise ValueError("Quantity needs exactly one of factors / log2_value")
        if self.factors is not None:
            for base, exp in self.factors:
                if base < 2 and not (base >= 1 and exp in (0, 1)):
                    raise ValueError(f"factor base must be >= 2 (or a literal), got {base}^{exp}")
                if exp < 0:
                    raise ValueError(f"factor exponents must be >= 0, got {base}^{exp}")

    @classmethod
    def from_integer(cls, value: int) -> "Quantity":
        if value < 1:
            raise ValueError(f"quantity must be positive, got {value}")
        return cls(factors=((value, 1),))

    @classmethod
    def from_power(cls, base: int, exponent: int) -> "Quantity":
        return cls(factors=((base, exponent),))

    @classmethod
    def from_log2(cls, log2_value) -> "Quantity":
        return cls(log2_value=xreal(log2_value))

    def materialize(self) -> int:
        """The exact integer, refused beyond 10^7 digits."""
        if self.factors is None:
            raise ValueError("a log2-literal quantity has no exact integer form")
        digits = quantity_log(self, 10) + 1
        if digits > _MAX_MATERIALIZE_DIGITS:
            raise ValueError(f"refusing to materialize ~{digits:.0f} digits")
        out = 1
        for base, exp in self.factors:
            out *= base**exp
        return out


def quantity_log(quantity: Quantity, base: int, precision: int | None = None) -> Decimal:
    """log2 or log10 of a Quantity, correct well past 2 decimal places.

    Factor products evaluate as sum(exp * log(base)); log2 literals convert
    between bases via log10 = log2 * log10(2).
    """
    if base not in (2, 10):
        raise ValueError(f"base must be 2 or 10, got {base}")
    prec = max(DEFAULT_PRECISION if precision is None else precision, _LOG_PRECISION)
    with localcontext(context(prec + 5)):
        if quantity.factors is not None:
            total = Decimal(0)
            for b, e in quantity.factors:
                if e == 0 or b == 1:
                    continue
                total += e * (Decimal(b).ln() / Decimal(base).ln())
        else:
            total = quantity.log2_value
            if base == 10:
                total = total * (Decimal(2).ln() / Decimal(10).ln())
    with localcontext(context(prec)):
        return +total


@dataclass(frozen=True)
class DawSpaceSpec:
    """A DAW project model: grid positions per second, track count, synth
    parameters per track, and distinct pitches (plus a hold option)."""

    grid_positions: int
    tracks: int
    synth_params: int
    pitches: int

    def __post_init__(self):
        if self.grid_positions < 0:
            raise ValueError("grid_positions must be >= 0")
        for name in ("tracks", "synth_params", "pitches"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be >= 1")


def daw_space_log10(spec: DawSpaceSpec, precision: int | None = None) -> Decimal:
    """log10 of ((pitches+1) * 16384 * synth_params * tracks) ** grid_positions."""
    prec = max(DEFAULT_PRECISION if precision is None else precision, _LOG_PRECISION)
    if spec.grid_positions == 0:
        return Decimal(0)
    with localcontext(context(prec)):
        per_step = (
            Decimal(spec.pitches + 1).log10()
            + Decimal(PARAM_LEVELS).log10()
            + Decimal(spec.synth_params).log10()
            + Decimal(spec.tracks).log10()
        )
        return spec.grid_positions * per_step


# The two published DAW-space evaluations and their printed log10 values.
DAW_EQ5_SPEC = DawSpaceSpec(grid_positions=96, tracks=100, synth_params=100, pitches=99)
PAPER_EQ5_LOG10 = Decimal("980.58431417239")
DAW_EQ6_SPEC = DawSpaceSpec(grid_positions=2048, tracks=1000000, synth_params=100, pitches=249)
PAPER_EQ6_LOG10 = Decimal("31974.113173438")


def haystack_odds(precision: int | None = None) -> Decimal:
    """Volume odds of one spherical hand-grab (radius 0.05 m) finding the
    needle in a cubic haystack of side 2.5 m."""
    prec = max(DEFAULT_PRECISION if precision is None else precision, _LOG_PRECISION)
    with localcontext(context(prec)):
        hay = Decimal("2.5") ** 3
        grab = Decimal(4) / 3 * PI_64 * Decimal("0.05") ** 3
        return hay / grab


@dataclass(frozen=True)
class Scenario:
    """One catalogued row: its quantity (authoritative for display), the
    published log2/order-of-magnitude columns, the provenance class, our
    independent recomputation where one exists, and a free-form note."""

    id: str
    description: str
    quantity: Quantity
    provenance: str  # "computed-from-formula" | "paper-literal"
    paper_log2: Decimal
    paper_order: int
    recomputed_log2: Decimal | None = None
    note: str = ""

    def display_log2(self, precision: int | None = None) -> Decimal:
        if self.provenance == "paper-literal":
            return self.paper_log2
        return quantity_log(self.quantity, 2, precision)

    def display_log10(self, precision: int | None = None) -> Decimal:
        if self.provenance == "paper-literal":
            with localcontext(context(max(DEFAULT_PRECISION if precision is None else precision,
                                          _LOG_PRECISION))):
                return self.paper_log2 * (Decimal(2).ln() / Decimal(10).ln())
        return quantity_log(self.quantity, 10, precision)

    def mismatch(self) -> bool:
        if self.recomputed_log2 is None:
            return False
        return abs(self.recomputed_log2 - self.paper_log2) > Decimal("0.05")


_SECONDS_PER_YEAR_X4 = 1461 * 86400  # 4 * 365.25 days, kept integral


def _formula(sid, description, quantity, paper_log2, paper_order, precision, note=""):
    return Scenario(
        id=sid, description=description, quantity=quantity,
        provenance="computed-from-formula", paper_log2=Decimal(paper_log2),
        paper_order=paper_order,
        recomputed_log2=quantity_log(quantity, 2, precision), note=note,
    )


def _literal(sid, description, paper_log2, paper_order, recomputed=None, note=""):
    return Scenario(
        id=sid, description=description, quantity=Quantity.from_log2(Decimal(paper_log2)),
        provenance="paper-literal", paper_log2=Decimal(paper_log2),
        paper_order=paper_order, recomputed_log2=recomputed, note=note,
    )


@lru_cache(maxsize=None)
def builtin_scenarios(precision: int = DEFAULT_PRECISION) -> tuple[Scenario, ...]:
    """The full published comparison table, in its published order.

    Formula rows carry exact factor products. Literal rows carry the
    published log2 plus, where the prose states parameters, a side-by-side
    recomputation from those parameters. The two music-like bound rows are
    sourced live from the tail/Chernoff engine so the table stays consistent
    with the probability machinery.
    """
    with localcontext(context(max(precision, _LOG_PRECISION) + 5)):
        # Upper bound via zero crossings: the published number is exactly
        # -log2 of the Chernoff bound for <= 2205 crossings in 44100 samples.
        zcr_bound = binomtail.chernoff(
            binomtail.BinomialSpec(44100, Fraction(1, 2)), 2205, binomtail.LOWER, precision
        )
        zcr_live = -zcr_bound.log10 / (Decimal(2).ln() / Decimal(10).ln())
        # Upper bound via continuity: the engine's headline probability
        # (calibrated p*) in bits; does NOT reproduce the published 205703.43.
        calib = binomtail.calibrate_p(44100, 43835, Decimal("-2017.905331"), precision)
        cont_tail = binomtail.tail(
            binomtail.TailQuery(binomtail.BinomialSpec(44100, calib.p), 43835, binomtail.UPPER),
            precision,
        )
        cont_live = -cont_tail.log10 / (Decimal(2).ln() / Decimal(10).ln())
        # The stated continuity model (p = 0.1) for the note.
        eps_tail = binomtail.tail(
            binomtail.TailQuery(binomtail.BinomialSpec(44100, Fraction(1, 10)), 43835,
                                binomtail.UPPER),
            precision,
        )
        eps_live = -eps_tail.log10 / (Decimal(2).ln() / Decimal(10).ln())

    def q2(x):
        return x.quantize(Decimal("0.01"))

    p = max(precision, _LOG_PRECISION)
    rows = (
        _formula(
            "audio64", "All possible one second 64 bit 192000SR audio segments",
            Quantity.from_power(2, 192000 * 64), "12288000", 3699057, p,
        ),
        _formula(
            "audio16", "All possible one second 16 bit 44100SR audio segments",
            Quantity.from_power(2, 44100 * 16), "705600", 212407, p,
        ),
        _formula(
            "chatgpt",
            "Estimated possible input contexts for ChatGPT 4 based on a dictionary of "
            "170000 words and a context of up to 32768 tokens (170001^32768)",
            Quantity.from_power(170001, 32768), "569350.02", 171391, p,
        ),
        _literal(
            "music-like-continuity",
            "Upper bound on more music-like 16 bit 44100SR audio segments based on "
            "signal continuity",
            "205703.43", 61923, recomputed=q2(cont_live),
            note=(
                "Not reproducible from stated parameters. The engine's calibrated "
                f"headline tail is 2^-{q2(cont_live)} and the stated eps=0.1 model "
                f"gives 2^-{q2(eps_live)}; neither matches the published 205703.43 bits."
            ),
        ),
        _literal(
            "music-like-zcr",
            "Upper bound on more music-like 16 bit 44100SR audio segments based on "
            "zero crossings",
            "31469.89", 9473, recomputed=q2(zcr_live),
            note=(
                "Matches the live Chernoff bound for at most 2205 zero crossings in "
                f"44100 fair trials: 2^-{q2(zcr_live)}."
            ),
        ),
        _formula(
            "orchestra",
            "The number of possible outputs if a reasonable sized orchestra of 30 "
            "instruments play one 4/4 measure of music at 240bpm, each with a free "
            "choice from a 3 octave range in 12TET or a rest (37 options), and up to "
            "32 different time positions to play at (37^(32*30))",
            Quantity.from_power(37, 32 * 30), "5001.08", 1505, p,
        ),
        _formula(
            "atoms", "Number of atoms in the observable universe",
            Quantity.from_power(10, 80), "265.75", 80, p,
        ),
        _literal(
            "motives",
            "Number of orbit representatives for the (rhythm-pitch) motives in "
            "Z12 x Z12",
            "124.66", 38,
            note="Cited enumeration literal; the underlying exact integer is not published.",
        ),
        _literal(
            "humans-recording",
            "Number of one second audio fragments created if 1024 microphones "
            "surround each of the 100 billion humans who ever lived, and record "
            "their whole lives with one second snapshots every sample (80 year "
            "lifespan, 44.1KHz)",
            "98", 30,
            recomputed=None,  # filled below from the factor product
            note=(
                "Stated parameters give 1024 * 10^11 * 80 years * 44100 windows/s "
                "= 2^93.20, not the published 2^98."
            ),
        ),
        _formula(
            "melodies",
            "Number of possible monophonic melodies within a two octave span of "
            "12TET pitches (plus one rest token), over 16 steps (25^16)",
            Quantity.from_power(25, 16), "74.30", 22, p,
        ),
        _literal(
            "universe-seconds",
            "The age of the universe in seconds (13.787 billion years * "
            "365.25*24*60*60), or the number of beats at 60bpm since the dawn of time",
            "58.59", 17,
            note="Recomputes to 58.59 from 13.787e9 * 365.25 * 86400.",
        ),
        _literal(
            "mobiles",
            "The number of one second audio fragments created at step size of one "
            "sample (at 44.1KHz), if 17 billion mobiles in the world each record "
            "constantly for 3 years before they break",
            "47.42", 14,
            note=(
                "Stated parameters give 17e9 * 3 years * 44100 windows/s = 2^75.91, "
                "not the published 2^47.42."
            ),
        ),
        _formula(
            "componium",
            "All 53875981680676 variations accessible to Diederich Winkel's "
            "mechanical Componium premiered in 1821",
            Quantity.from_integer(53875981680676), "45.61", 13, p,
            note="log10 is 13.73; the published integer order prints 13 (rounds down "
                 "here but 4.47 rounds up to 5 elsewhere).",
        ),
        _literal(
            "soundcloud",
            "SoundCloud catalog size of 200 million tracks, averaging around 3 mins "
            "each; all one second audio windows (stepping every sample at 44.1KHz)",
            "39.74", 12,
            note=(
                "Stated parameters give 2e8 * 180 s * 44100 windows/s = 2^50.50, "
                "not the published 2^39.74."
            ),
        ),
        _formula(
            "tonerows", "All 9985920 tone rows in a 12 pitch class system",
            Quantity.from_integer(9985920), "23.25", 7, p,
        ),
        _formula(
            "rhythms", "All 65536 16-step basic rhythmic patterns (on or off at each step)",
            Quantity.from_power(2, 16), "16", 5, p,
        ),
        _formula(
            "haystack",
            "Around a 1 in 29842 chance of finding a needle when grabbing hay from "
            "an average sized haystack (hand grab sphere radius 5cm, haystack side "
            "2.5 metres)",
            Quantity.from_log2(_log2_of(haystack_odds(p), p)), "14.87", 5, p,
            note="Volume ratio 15.625 m^3 / ((4/3)*pi*0.05^3 m^3) ~= 29842.",
        ),
    )
    # Literal rows whose prose parameters do recompute to an integer product:
    # attach the side-by-side recomputation.
    derived = {
        "humans-recording": Quantity(
            factors=((1024, 1), (10, 11), (80, 1), (_SECONDS_PER_YEAR_X4 // 4, 1), (44100, 1))
        ),
        "universe-seconds": Quantity(
            factors=((13787, 1), (10, 6), (_SECONDS_PER_YEAR_X4 // 4, 1))
        ),
        "mobiles": Quantity(
            factors=((17, 1), (10, 9), (3, 1), (_SECONDS_PER_YEAR_X4 // 4, 1), (44100, 1))
        ),
        "soundcloud": Quantity(factors=((2, 1), (10, 8), (180, 1), (44100, 1))),
    }
    out = []
    for row in rows:
        if row.id in derived:
            row = replace(row, recomputed_log2=quantity_log(derived[row.id], 2, p))
        out.append(row)
    return tuple(out)


def _log2_of(value: Decimal, precision: int) -> Decimal:
    with localcontext(context(max(precision, _LOG_PRECISION))):
        return value.ln() / Decimal(2).ln()


def mismatched_scenarios(scenarios=None) -> tuple[str, ...]:
    """ids of rows whose recomputation departs from the published log2 by > 0.05."""
    if scenarios is None:
        scenarios = builtin_scenarios()
    return tuple(s.id for s in scenarios if s.mismatch())


def _table_rows(scenarios, precision):
    rows = []
    for s in sorted(scenarios, key=lambda s: s.display_log2(precision), reverse=True):
        rows.append(
            (
                s.id,
                s.description,
                str(s.display_log2(precision).quantize(Decimal("0.01"))),
                str(s.display_log10(precision).quantize(Decimal("0.01"))),
                str(s.paper_order),
                s.provenance,
                "yes" if s.mismatch() else "no",
                s.note,
            )
        )
    return rows


def render_table(scenarios=None, fmt: str = "markdown", precision: int | None = None) -> str:
    """Render the registry ordered by descending size.

    Formats: markdown (with a notes section), csv (header
    id,description,log2,log10,paper_order,provenance,mismatch), plain.
    """
    if scenarios is None:
        scenarios = builtin_scenarios()
    if not scenarios:
        raise ValueError("registry is empty")
    prec = max(DEFAULT_PRECISION if precision is None else precision, _LOG_PRECISION)
    rows = _table_rows(scenarios, prec)
    if fmt == "csv":
        import csv
        import io

        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["id", "description", "log2", "log10", "paper_order",
                         "provenance", "mismatch"])
        for row in rows:
            writer.writerow(row[:7])
        return buf.getvalue()
    if fmt == "markdown":
        header = ["id", "description", "log2", "log10", "paper order", "provenance", "mismatch"]
        lines = ["| " + " | ".join(header) + " |",
                 "| " + " | ".join(["---"] * len(header)) + " |"]
        for row in rows:
            cells = [c.replace("|", "\\|") for c in row[:7]]
            lines.append("| " + " | ".join(cells) + " |")
        notes = [(r[0], r[7]) for r in rows if r[7]]
        if notes:
            lines.append("")
            lines.append("Notes:")
            for sid, note in notes:
                lines.append(f"- {sid}: {note}")
        return "\n".join(lines) + "\n"
    if fmt == "plain":
        width = max(len(r[0]) for r in rows)
        lines = []
        for row in rows:
            flag = " [mismatch]" if row[6] == "yes" else ""
            lines.append(f"{row[0]:<{width}}  log2={row[2]:>12}  log10={row[3]:>12}  "
                         f"order={row[4]:>8}  {row[5]}{flag}")
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
