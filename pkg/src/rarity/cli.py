"""Command-line surface.

Subcommands: tail, chernoff, sweep, crossover, calibrate, analyze, noise,
montecarlo, spaces, report. Probabilities print in mantissa-exponent form
(default 9 significant digits) together with the raw log10, because none of
them fit in a hardware float. Exit codes: 0 success, 2 usage error, 1
runtime error.

Global options live before the subcommand: `--precision` (default from the
RARITY_PRECISION environment variable, else 64) and `--config`, a flat
``key = value`` file whose keys are the long option names; explicit flags
override file values.
"""

from __future__ import annotations

import argparse
import glob as globmod
import os
import sys
from decimal import Decimal
from fractions import Fraction
from pathlib import Path

from . import __version__
from .audiostats import (
    NOISE_ALGORITHM,
    corpus_summary,
    monte_carlo_tail,
    signal_stats,
    white_noise,
    write_wav,
)
from .binomtail import (
    BinomialSpec,
    SweepConfig,
    TailQuery,
    calibrate_p,
    chernoff,
    crossover,
    parse_probability,
    render_fraction_scientific,
    sweep,
    tail,
    tail_exact,
)
from .plots import sweep_csv, sweep_svg
from .report import RunConfig, build_report
from .spaces import builtin_scenarios, render_table
from .xprec import DEFAULT_PRECISION, format_scientific, xreal

__all__ = ["main", "build_parser"]

_MAX_EXACT_PRINT_DIGITS = 10000


def _env_precision() -> int:
    raw = os.environ.get("RARITY_PRECISION")
    if raw is None:
        return DEFAULT_PRECISION
    try:
        value = int(raw)
    except ValueError as exc:
        raise ValueError(f"RARITY_PRECISION must be an integer, got {raw!r}") from exc
    if value < 16:
        raise ValueError(f"RARITY_PRECISION must be >= 16, got {value}")
    return value


def _fraction(text: str) -> Fraction:
    return parse_probability(text)


def _decimal(text: str) -> Decimal:
    return Decimal(text)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rarity",
        description="Rarity of music-like signals: extreme binomial tails, "
        "Chernoff bounds, audio statistics, comparative space sizes.",
    )
    parser.add_argument("--version", action="version", version=f"rarity {__version__}")
    parser.add_argument(
        "--precision", type=int, default=None,
        help="working precision in decimal digits (default: RARITY_PRECISION or 64)",
    )
    parser.add_argument(
        "--config", default=None,
        help="flat key = value file; keys are long option names, flags override",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    # "required" flags default to None and are validated after config-file
    # merging, so a config file can supply them and flags still override.
    p_tail = sub.add_parser("tail", help="binomial tail probability")
    p_tail.add_argument("--n", type=int)
    p_tail.add_argument("--K", type=int, dest="threshold")
    p_tail.add_argument("--p", type=_fraction)
    p_tail.add_argument("--direction", choices=["upper", "lower"])
    p_tail.add_argument("--exact", action="store_true",
                        help="also compute the exact big-rational value")
    p_tail.add_argument("--digits", type=int, default=9)

    p_cher = sub.add_parser("chernoff", help="Chernoff/KL tail bound")
    p_cher.add_argument("--n", type=int)
    p_cher.add_argument("--k", type=int)
    p_cher.add_argument("--p", type=_fraction)
    p_cher.add_argument("--direction", choices=["upper", "lower"])
    p_cher.add_argument("--digits", type=int, default=9)

    p_sweep = sub.add_parser("sweep", help="tail probability over a range of n")
    p_sweep.add_argument("--n-min", type=int)
    p_sweep.add_argument("--n-max", type=int)
    p_sweep.add_argument("--ratio", type=_fraction,
                         help="threshold ratio r: K(n)=floor(r*n) upper / ceil lower")
    p_sweep.add_argument("--p", type=_fraction)
    p_sweep.add_argument("--direction", choices=["upper", "lower"], default="upper")
    p_sweep.add_argument("--out-csv")
    p_sweep.add_argument("--out-svg", default=None)
    p_sweep.add_argument("--workers", type=int, default=None)

    p_cross = sub.add_parser("crossover", help="first n whose tail drops below a threshold")
    p_cross.add_argument("--n-min", type=int, default=2)
    p_cross.add_argument("--n-max", type=int)
    p_cross.add_argument("--ratio", type=_fraction)
    p_cross.add_argument("--p", type=_fraction)
    p_cross.add_argument("--direction", choices=["upper", "lower"], default="upper")
    p_cross.add_argument("--threshold", type=_decimal,
                         help="log10 threshold, e.g. -80")

    p_cal = sub.add_parser("calibrate", help="recover p for a target upper-tail log10")
    p_cal.add_argument("--n", type=int)
    p_cal.add_argument("--K", type=int, dest="threshold")
    p_cal.add_argument("--target", type=_decimal,
                       help="target log10 of the upper tail (negative)")
    p_cal.add_argument("--tolerance", type=_decimal, default=Decimal("1e-6"))

    p_an = sub.add_parser("analyze", help="zero-crossing / proximity statistics of WAV files")
    p_an.add_argument("paths", nargs="+", help="WAV paths or glob patterns")
    p_an.add_argument("--epsilon", type=float, default=0.1)
    p_an.add_argument("--out-csv", default=None)

    p_noise = sub.add_parser("noise", help="seeded white noise: stats and optional WAV")
    p_noise.add_argument("--n", type=int)
    p_noise.add_argument("--seed", type=int, default=42)
    p_noise.add_argument("--amplitude", type=float, default=1.0)
    p_noise.add_argument("--epsilon", type=float, default=0.1)
    p_noise.add_argument("--sample-rate", type=int, default=44100)
    p_noise.add_argument("--out", default=None, help="write a 16-bit WAV here")

    p_mc = sub.add_parser("montecarlo", help="Monte Carlo validation of a tail")
    p_mc.add_argument("--n", type=int)
    p_mc.add_argument("--K", type=int, dest="threshold")
    p_mc.add_argument("--p", type=_fraction)
    p_mc.add_argument("--direction", choices=["upper", "lower"])
    p_mc.add_argument("--trials", type=int)
    p_mc.add_argument("--seed", type=int, default=42)

    p_sp = sub.add_parser("spaces", help="comparative size table")
    p_sp.add_argument("--format", choices=["markdown", "csv", "plain"], default="markdown")
    p_sp.add_argument("--out", default=None)

    p_rep = sub.add_parser("report", help="write the full reproduction bundle")
    p_rep.add_argument("--out-dir")
    p_rep.add_argument("--seed", type=int, default=42)
    p_rep.add_argument("--fig1-max", type=int, default=44100)
    p_rep.add_argument("--fig2-max", type=int, default=2000)
    p_rep.add_argument("--epsilon", type=float, default=0.1)
    p_rep.add_argument("--corpus", nargs="*", default=[])
    p_rep.add_argument("--workers", type=int, default=None)

    return parser


# dest -> presentable flag name, per subcommand, checked after config merging
_REQUIRED: dict[str, list[tuple[str, str]]] = {
    "tail": [("n", "--n"), ("threshold", "--K"), ("p", "--p"), ("direction", "--direction")],
    "chernoff": [("n", "--n"), ("k", "--k"), ("p", "--p"), ("direction", "--direction")],
    "sweep": [("n_min", "--n-min"), ("n_max", "--n-max"), ("ratio", "--ratio"),
              ("p", "--p"), ("out_csv", "--out-csv")],
    "crossover": [("n_max", "--n-max"), ("ratio", "--ratio"), ("p", "--p"),
                  ("threshold", "--threshold")],
    "calibrate": [("n", "--n"), ("threshold", "--K"), ("target", "--target")],
    "analyze": [],
    "noise": [("n", "--n")],
    "montecarlo": [("n", "--n"), ("threshold", "--K"), ("p", "--p"),
                   ("direction", "--direction"), ("trials", "--trials")],
    "spaces": [],
    "report": [("out_dir", "--out-dir")],
}


def _load_config_file(path: str) -> dict[str, str]:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{lineno}: expected 'key = value', got {line!r}")
        key, _, value = line.partition("=")
        values[key.strip()] = value.strip()
    return values


def _apply_config_defaults(parser: argparse.ArgumentParser, values: dict[str, str]) -> None:
    """Install config-file values as typed parser defaults (flags still win)."""
    # collect every option action of the root parser and all subparsers
    parsers = [parser]
    for action in parser._actions:
        if isinstance(action, argparse._SubParsersAction):
            parsers.extend(action.choices.values())
    actions: dict[str, list[argparse.Action]] = {}
    for p in parsers:
        for action in p._actions:
            for opt in action.option_strings:
                if opt.startswith("--"):
                    actions.setdefault(opt[2:], []).append(action)
    for key, raw in values.items():
        if key not in actions:
            raise ValueError(f"unknown config key {key!r}")
        for action in actions[key]:
            if isinstance(action, argparse._StoreTrueAction):
                value = raw.lower() in ("1", "true", "yes", "on")
            elif action.type is not None:
                value = action.type(raw)
            else:
                value = raw
            action.default = value
            if action.dest == "precision":
                parser.set_defaults(precision=value)


def _print_probability(label: str, magnitude, digits: int) -> None:
    print(f"{label} = {format_scientific(magnitude, digits)}")
    if magnitude.is_zero:
        print("log10 = -inf (exact zero)")
    else:
        print(f"log10 = {format(magnitude.log10, '.14e')}")


def _cmd_tail(args, precision: int) -> int:
    spec = BinomialSpec(args.n, args.p)
    query = TailQuery(spec, args.threshold, args.direction)
    value = tail(query, precision)
    _print_probability("tail", value, args.digits)
    if args.exact:
        fr = tail_exact(query)
        if hasattr(sys, "set_int_max_str_digits"):
            sys.set_int_max_str_digits(max(sys.get_int_max_str_digits(), 2_000_000))
        text = f"{fr.numerator}/{fr.denominator}"
        if len(text) <= _MAX_EXACT_PRINT_DIGITS:
            print(f"exact = {text}")
        else:
            print(f"exact = ({len(str(fr.numerator))}-digit numerator / "
                  f"{len(str(fr.denominator))}-digit denominator)")
        print(f"exact_scientific = {render_fraction_scientific(fr, args.digits, precision)}")
    return 0


def _cmd_chernoff(args, precision: int) -> int:
    spec = BinomialSpec(args.n, args.p)
    value = chernoff(spec, args.k, args.direction, precision)
    _print_probability("chernoff_bound", value, args.digits)
    return 0


def _sweep_config(args, precision: int) -> SweepConfig:
    return SweepConfig(
        n_min=args.n_min, n_max=args.n_max,
        threshold_ratio=args.ratio, p=args.p, precision=precision,
    )


def _cmd_sweep(args, precision: int) -> int:
    config = _sweep_config(args, precision)
    series = sweep(config, args.direction, workers=args.workers)
    stamp = (f"rarity {__version__} precision={precision} "
             f"sweep n={config.n_min}..{config.n_max} ratio={config.threshold_ratio} "
             f"p={config.p} direction={args.direction}")
    Path(args.out_csv).write_text(sweep_csv(series, stamp))
    print(f"wrote {args.out_csv} ({len(series.points)} rows)")
    if args.out_svg:
        title = f"log10 tail probability, n={config.n_min}..{config.n_max}"
        Path(args.out_svg).write_text(sweep_svg(series, title))
        print(f"wrote {args.out_svg}")
    return 0


def _cmd_crossover(args, precision: int) -> int:
    config = _sweep_config(args, precision)
    n = crossover(config, args.direction, args.threshold)
    if n is None:
        print(f"never crosses {args.threshold} for n <= {args.n_max}")
    else:
        print(f"crossover_n = {n}")
    return 0


def _cmd_calibrate(args, precision: int) -> int:
    result = calibrate_p(args.n, args.threshold, args.target,
                         precision=precision, tolerance=args.tolerance)
    print(f"p_star = {format(xreal(result.p, precision), '.15f')}")
    print(f"p_star_exact = {result.p.numerator}/{result.p.denominator}")
    print(f"bracket = [{float(result.bracket[0]):.15f}, {float(result.bracket[1]):.15f}]")
    print(f"iterations = {result.iterations}")
    print(f"residual_log10 = {format(result.residual, '.2e')}")
    return 0


def _expand_paths(patterns) -> list[str]:
    out: list[str] = []
    for pattern in patterns:
        matches = sorted(globmod.glob(pattern))
        if matches:
            out.extend(matches)
        else:
            out.append(pattern)  # literal path; load_wav reports if unreadable
    return out


def _cmd_analyze(args, precision: int) -> int:
    paths = _expand_paths(args.paths)
    summary = corpus_summary(paths, args.epsilon)
    header = "file,samples,sample_rate,zcr,proximity_rate,epsilon"
    rows = [
        f"{f.path},{f.samples},{f.sample_rate},{f.stats.zcr:.6f},"
        f"{f.stats.proximity_rate:.6f},{f.stats.epsilon}"
        for f in summary.per_file
    ]
    print(header)
    for row in rows:
        print(row)
    print(f"pooled: zcr={summary.pooled.zcr:.6f} "
          f"proximity_rate={summary.pooled.proximity_rate:.6f} "
          f"epsilon={summary.pooled.epsilon} pairs={summary.pooled.pair_count}")
    for path, reason in summary.skipped:
        print(f"skipped {path}: {reason}", file=sys.stderr)
    if args.out_csv:
        Path(args.out_csv).write_text("\n".join([header, *rows]) + "\n")
        print(f"wrote {args.out_csv}")
    return 0


def _cmd_noise(args, precision: int) -> int:
    buf = white_noise(args.n, args.seed, args.amplitude, args.sample_rate)
    stats = signal_stats(buf, args.epsilon)
    print(f"algorithm = {NOISE_ALGORITHM}")
    print(f"seed = {args.seed}")
    print(f"zcr = {stats.zcr:.6f}")
    print(f"proximity_rate = {stats.proximity_rate:.6f} (epsilon={args.epsilon})")
    if args.out:
        write_wav(buf, args.out)
        print(f"wrote {args.out}")
    return 0


def _cmd_montecarlo(args, precision: int) -> int:
    result = monte_carlo_tail(args.n, args.threshold, args.p, args.direction,
                              args.trials, args.seed)
    print(f"algorithm = {result.algorithm}")
    print(f"seed = {result.seed}")
    print(f"successes = {result.successes} / {result.trials}")
    print(f"estimate = {result.estimate:.8f}")
    print(f"wilson_95 = [{result.ci_low:.8f}, {result.ci_high:.8f}]")
    return 0


def _cmd_spaces(args, precision: int) -> int:
    table = render_table(builtin_scenarios(precision), args.format, precision)
    if args.out:
        Path(args.out).write_text(table)
        print(f"wrote {args.out}")
    else:
        print(table, end="")
    return 0


def _cmd_report(args, precision: int) -> int:
    config = RunConfig(
        out_dir=args.out_dir,
        precision=precision,
        seed=args.seed,
        fig1_range=(2, args.fig1_max),
        fig2_range=(2, args.fig2_max),
        epsilon=args.epsilon,
        corpus=tuple(_expand_paths(args.corpus)) if args.corpus else (),
    )
    bundle = build_report(config, workers=args.workers)
    for name in bundle.files:
        print(f"wrote {bundle.out_dir / name}")
    return 0


_COMMANDS = {
    "tail": _cmd_tail,
    "chernoff": _cmd_chernoff,
    "sweep": _cmd_sweep,
    "crossover": _cmd_crossover,
    "calibrate": _cmd_calibrate,
    "analyze": _cmd_analyze,
    "noise": _cmd_noise,
    "montecarlo": _cmd_montecarlo,
    "spaces": _cmd_spaces,
    "report": _cmd_report,
}


def _extract_config_path(argv) -> str | None:
    for i, token in enumerate(argv):
        if token == "--config":
            return argv[i + 1] if i + 1 < len(argv) else None
        if token.startswith("--config="):
            return token.split("=", 1)[1]
    return None


def main(argv=None) -> int:
    parser = build_parser()
    if argv is None:
        argv = sys.argv[1:]
    try:
        config_path = _extract_config_path(argv)
        if config_path:
            _apply_config_defaults(parser, _load_config_file(config_path))
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    missing = [flag for dest, flag in _REQUIRED[args.command]
               if getattr(args, dest) is None]
    if missing:
        print(f"usage error: {args.command} is missing {', '.join(missing)}",
              file=sys.stderr)
        return 2
    try:
        precision = args.precision if args.precision is not None else _env_precision()
        if precision < 16:
            raise ValueError(f"precision must be >= 16, got {precision}")
        return _COMMANDS[args.command](args, precision)
    except BrokenPipeError:
        return 1
    except (OSError, ValueError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
