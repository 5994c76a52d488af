"""Command-line surface: output formats, exit codes, config handling."""

from __future__ import annotations

import csv
import io
import json
import xml.etree.ElementTree as ET
from decimal import Decimal

import pytest

from rarity import audiostats as au
from rarity.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestExitCodes:
    def test_no_arguments_is_usage_error(self, capsys):
        code, _, err = run(capsys)
        assert code == 2
        assert "usage" in err.lower()

    def test_unknown_subcommand(self, capsys):
        code, _, err = run(capsys, "frobnicate")
        assert code == 2

    def test_unknown_flag(self, capsys):
        code, _, err = run(capsys, "chernoff", "--bogus", "1")
        assert code == 2

    def test_missing_required_flag(self, capsys):
        code, _, err = run(capsys, "tail", "--n", "10")
        assert code == 2
        assert "--K" in err and "--p" in err

    def test_runtime_error_is_exit_one(self, capsys):
        code, _, err = run(capsys, "tail", "--n", "10", "--K", "11",
                           "--p", "1/2", "--direction", "upper")
        assert code == 1
        assert "error:" in err

    def test_version(self, capsys):
        code, out, _ = run(capsys, "--version")
        assert code == 0


class TestChernoffCommand:
    def test_published_golden_value_eight_digits(self, capsys):
        code, out, _ = run(capsys, "chernoff", "--n", "44100", "--k", "2205",
                           "--p", "0.5", "--direction", "lower", "--digits", "8")
        assert code == 0
        assert "4.1484712e-9474" in out

    def test_default_digits_carry_published_prefix(self, capsys):
        code, out, _ = run(capsys, "chernoff", "--n", "44100", "--k", "2205",
                           "--p", "0.5", "--direction", "lower")
        assert code == 0
        line = next(l for l in out.splitlines() if l.startswith("chernoff_bound"))
        assert line.split(" = ")[1].startswith("4.1484712")
        assert line.endswith("e-9474")
        log_line = next(l for l in out.splitlines() if l.startswith("log10"))
        assert abs(Decimal(log_line.split(" = ")[1]) - Decimal("-9473.38213")) < Decimal("1e-4")


class TestTailCommand:
    def test_exact_rational_output(self, capsys):
        code, out, _ = run(capsys, "tail", "--n", "10", "--K", "9", "--p", "1/2",
                           "--direction", "upper", "--exact")
        assert code == 0
        assert "exact = 11/1024" in out
        assert "1.07421875e-2" in out

    def test_printed_numbers_reparse_into_engine(self, capsys):
        code, out, _ = run(capsys, "tail", "--n", "50", "--K", "40", "--p", "0.3",
                           "--direction", "upper")
        assert code == 0
        log_line = next(l for l in out.splitlines() if l.startswith("log10"))
        reparsed = Decimal(log_line.split(" = ")[1])
        from rarity.binomtail import BinomialSpec, TailQuery, tail

        direct = tail(TailQuery(BinomialSpec(50, "0.3"), 40, "upper"))
        # round-trips within one unit of the last printed digit
        assert abs(reparsed - direct.log10) <= Decimal("1e-14") * abs(direct.log10)


class TestSweepCommand:
    def test_csv_and_svg_outputs(self, tmp_path, capsys):
        out_csv = tmp_path / "s.csv"
        out_svg = tmp_path / "s.svg"
        code, out, _ = run(capsys, "sweep", "--n-min", "2", "--n-max", "40",
                           "--ratio", "0.5", "--p", "1/4",
                           "--out-csv", str(out_csv), "--out-svg", str(out_svg))
        assert code == 0
        lines = out_csv.read_text().splitlines()
        assert lines[0].startswith("# rarity")
        assert lines[1] == "n,log10_p"
        assert len(lines) == 2 + 39
        first = lines[2].split(",")
        assert int(first[0]) == 2
        Decimal(first[1])  # parses
        tree = ET.fromstring(out_svg.read_text())
        assert tree.tag.endswith("svg")
        assert "polyline" in out_svg.read_text()

    def test_rerun_is_byte_identical(self, tmp_path, capsys):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        for path in (a, b):
            code, _, _ = run(capsys, "sweep", "--n-min", "2", "--n-max", "60",
                             "--ratio", "0.994", "--p", "0.878", "--out-csv", str(path))
            assert code == 0
        assert a.read_bytes() == b.read_bytes()

    def test_degenerate_range_single_point_marker(self, tmp_path, capsys):
        out_csv = tmp_path / "one.csv"
        out_svg = tmp_path / "one.svg"
        code, _, _ = run(capsys, "sweep", "--n-min", "25", "--n-max", "25",
                         "--ratio", "0.5", "--p", "1/2",
                         "--out-csv", str(out_csv), "--out-svg", str(out_svg))
        assert code == 0
        assert len(out_csv.read_text().splitlines()) == 3  # stamp + header + 1 row
        svg = out_svg.read_text()
        assert "<circle" in svg
        ET.fromstring(svg)


class TestCrossoverCommand:
    def test_reports_crossing(self, capsys):
        code, out, _ = run(capsys, "crossover", "--n-max", "200", "--ratio", "0.5",
                           "--p", "0.25", "--threshold", "-3")
        assert code == 0
        assert "crossover_n = " in out

    def test_reports_never(self, capsys):
        code, out, _ = run(capsys, "crossover", "--n-max", "50", "--ratio", "0.5",
                           "--p", "0.5", "--threshold", "-1000000000")
        assert code == 0
        assert "never crosses" in out


class TestCalibrateCommand:
    def test_outputs_bracket_and_iterations(self, capsys):
        code, out, _ = run(capsys, "calibrate", "--n", "5", "--K", "5",
                           "--target", "-5")
        assert code == 0
        assert "p_star = 0.1000000" in out
        assert "iterations = " in out
        assert "bracket = [" in out
        assert "residual_log10 = " in out


class TestAnalyzeCommand:
    def test_csv_schema_and_skips(self, tmp_path, capsys):
        good = tmp_path / "good.wav"
        au.write_wav(au.white_noise(8000, seed=2), good)
        bad = tmp_path / "bad.wav"
        bad.write_bytes(b"nope")
        out_csv = tmp_path / "stats.csv"
        code, out, err = run(capsys, "analyze", str(good), str(bad),
                             "--epsilon", "0.1", "--out-csv", str(out_csv))
        assert code == 0
        assert "skipped" in err and "bad.wav" in err
        rows = list(csv.DictReader(io.StringIO(out_csv.read_text())))
        assert csv.DictReader(io.StringIO(out_csv.read_text())).fieldnames == [
            "file", "samples", "sample_rate", "zcr", "proximity_rate", "epsilon",
        ]
        assert len(rows) == 1
        assert rows[0]["samples"] == "8000"

    def test_glob_pattern(self, tmp_path, capsys):
        for name in ("x.wav", "y.wav"):
            au.write_wav(au.white_noise(4000, seed=3), tmp_path / name)
        code, out, _ = run(capsys, "analyze", str(tmp_path / "*.wav"))
        assert code == 0
        assert out.count(".wav,") == 2

    def test_all_unreadable_fails(self, tmp_path, capsys):
        bad = tmp_path / "bad.wav"
        bad.write_bytes(b"nope")
        code, _, err = run(capsys, "analyze", str(bad))
        assert code == 1
        assert "error:" in err


class TestNoiseCommand:
    def test_stats_and_wav(self, tmp_path, capsys):
        out_wav = tmp_path / "n.wav"
        code, out, _ = run(capsys, "noise", "--n", "100000", "--seed", "42",
                           "--out", str(out_wav))
        assert code == 0
        assert "algorithm = pcg64" in out
        assert "seed = 42" in out
        zcr = float(next(l for l in out.splitlines() if l.startswith("zcr")).split(" = ")[1])
        assert zcr == pytest.approx(0.5, abs=0.01)
        loaded = au.load_wav(out_wav)
        assert len(loaded) == 100000


class TestMonteCarloCommand:
    def test_estimate_output(self, capsys):
        code, out, _ = run(capsys, "montecarlo", "--n", "10", "--K", "9", "--p", "1/2",
                           "--direction", "upper", "--trials", "100000", "--seed", "0")
        assert code == 0
        assert "wilson_95 = [" in out
        est = float(next(l for l in out.splitlines()
                         if l.startswith("estimate")).split(" = ")[1])
        assert est == pytest.approx(11 / 1024, abs=2e-3)


class TestSpacesCommand:
    def test_csv_format_marks_documented_mismatches(self, capsys):
        code, out, _ = run(capsys, "spaces", "--format", "csv")
        assert code == 0
        rows = list(csv.DictReader(io.StringIO(out)))
        assert len(rows) == 17
        flagged = {r["id"] for r in rows if r["mismatch"] == "yes"}
        assert flagged == {"music-like-continuity", "humans-recording",
                           "mobiles", "soundcloud"}

    def test_markdown_to_file(self, tmp_path, capsys):
        out_md = tmp_path / "t.md"
        code, _, _ = run(capsys, "spaces", "--format", "markdown", "--out", str(out_md))
        assert code == 0
        assert out_md.read_text().startswith("| id | description |")


class TestConfigAndEnvironment:
    def test_config_file_supplies_values(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n = 10\nK = 9\np = 1/2\ndirection = upper\n")
        code, out, _ = run(capsys, "--config", str(cfg), "tail")
        assert code == 0
        assert "1.07421875e-2" in out

    def test_flags_override_config(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("n = 10\nK = 9\np = 1/2\ndirection = upper\ndigits = 4\n")
        code, out, _ = run(capsys, "--config", str(cfg), "tail", "--digits", "9")
        assert code == 0
        assert "1.07421875e-2" in out
        code, out, _ = run(capsys, "--config", str(cfg), "tail")
        assert "1.074e-2" in out

    def test_unknown_config_key_is_usage_error(self, tmp_path, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("frobs = 3\n")
        code, _, err = run(capsys, "--config", str(cfg), "spaces")
        assert code == 2
        assert "frobs" in err

    def test_env_precision_override(self, tmp_path, capsys, monkeypatch):
        monkeypatch.setenv("RARITY_PRECISION", "20")
        code, out, _ = run(capsys, "tail", "--n", "10", "--K", "9", "--p", "1/2",
                           "--direction", "upper")
        assert code == 0
        log_line = next(l for l in out.splitlines() if l.startswith("log10"))
        assert Decimal(log_line.split(" = ")[1]) != 0

    def test_env_precision_invalid(self, monkeypatch, capsys):
        monkeypatch.setenv("RARITY_PRECISION", "four")
        code, _, err = run(capsys, "tail", "--n", "10", "--K", "9", "--p", "1/2",
                           "--direction", "upper")
        assert code == 1
        assert "RARITY_PRECISION" in err

    def test_precision_flag_beats_env(self, monkeypatch, capsys):
        monkeypatch.setenv("RARITY_PRECISION", "four")  # invalid, but flag wins
        code, _, _ = run(capsys, "--precision", "32", "tail", "--n", "10", "--K", "9",
                         "--p", "1/2", "--direction", "upper")
        assert code == 0


class TestReportCommand:
    def test_small_bundle(self, tmp_path, capsys):
        out_dir = tmp_path / "bundle"
        code, out, _ = run(capsys, "report", "--out-dir", str(out_dir),
                           "--fig1-max", "300", "--fig2-max", "100")
        assert code == 0
        names = {p.name for p in out_dir.iterdir()}
        assert names == {"fig1.csv", "fig1.svg", "fig2.csv", "fig2.svg",
                         "table1.md", "table1.csv", "manifest.json"}
        manifest = json.loads((out_dir / "manifest.json").read_text())
        value_names = {v["name"] for v in manifest["values"]}
        assert "chernoff_zero_crossing_bound" in value_names
        assert "flagship_tail_probability" in value_names
        assert len(manifest["discrepancies"]) == 3
        for entry in manifest["files"]:
            assert len(entry["sha256"]) == 64

    def test_bundle_with_corpus(self, tmp_path, capsys):
        wav = tmp_path / "a.wav"
        au.write_wav(au.white_noise(5000, seed=1), wav)
        out_dir = tmp_path / "bundle"
        code, _, _ = run(capsys, "report", "--out-dir", str(out_dir),
                         "--fig1-max", "100", "--fig2-max", "50",
                         "--corpus", str(wav))
        assert code == 0
        assert (out_dir / "corpus.csv").exists()
        manifest = json.loads((out_dir / "manifest.json").read_text())
        assert "corpus_pooled_zcr" in {v["name"] for v in manifest["values"]}

    def test_failure_cleans_up(self, tmp_path, capsys):
        blocker = tmp_path / "blocked"
        blocker.write_text("a file, not a directory")
        code, _, err = run(capsys, "report", "--out-dir", str(blocker),
                           "--fig1-max", "100", "--fig2-max", "50")
        assert code == 1
        assert blocker.is_file()  # untouched
