"""rarity: how rare are music-like signals among all possible audio signals?

Extended-precision binomial tail probabilities and Chernoff bounds for
white-noise music-likeness models, audio statistics (zero-crossing rate,
proximate movement), seeded Monte Carlo validation, and comparative sizing of
musical/combinatorial/physical spaces, with a CLI and a reproducible report
bundle on top.
"""

__version__ = "0.1.0"

from .xprec import (  # noqa: E402
    DEFAULT_PRECISION,
    LogMagnitude,
    XReal,
    add,
    div,
    exp,
    exp10,
    format_scientific,
    fraction_log10,
    ln,
    log10,
    log_sum_exp10,
    mul,
    power,
    scientific_parts,
    sub,
    xreal,
)
from .binomtail import (  # noqa: E402
    LOWER,
    UPPER,
    BinomialSpec,
    CalibrationResult,
    NoRootError,
    SweepConfig,
    SweepPoint,
    SweepSeries,
    TailQuery,
    calibrate_p,
    chernoff,
    crossover,
    log10_binomial_coefficient,
    log10_pmf,
    parse_probability,
    render_fraction_scientific,
    sweep,
    tail,
    tail_exact,
    threshold_count,
)
from .audiostats import (  # noqa: E402
    NOISE_ALGORITHM,
    AudioBuffer,
    CorpusSummary,
    FileStats,
    MonteCarloResult,
    SignalStats,
    WavFormatError,
    corpus_summary,
    load_wav,
    monte_carlo_tail,
    proximity_rate,
    signal_stats,
    white_noise,
    wilson_interval,
    write_wav,
    zero_crossing_rate,
)
from .spaces import (  # noqa: E402
    DAW_EQ5_SPEC,
    DAW_EQ6_SPEC,
    PAPER_EQ5_LOG10,
    PAPER_EQ6_LOG10,
    DawSpaceSpec,
    Quantity,
    Scenario,
    builtin_scenarios,
    daw_space_log10,
    haystack_odds,
    mismatched_scenarios,
    quantity_log,
    render_table,
)
from .report import RunConfig, ReportBundle, build_report  # noqa: E402
