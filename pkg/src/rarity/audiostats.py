"""Audio-signal statistics grounding the white-noise rarity model.

WAV ingestion/emission, zero-crossing rate and proximate-movement rate (the
two music-likeness statistics), seeded white-noise generation, and Monte
Carlo validation of the analytic binomial tails.

All randomness comes from numpy's PCG64 (period 2^128, published reference
streams); a (seed, n) pair always reproduces the identical sample sequence,
and Monte Carlo trials are partitioned into fixed chunks with per-chunk
derived seeds so results do not depend on how many workers ran them.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .binomtail import UPPER, parse_probability, _check_direction

__all__ = [
    "NOISE_ALGORITHM",
    "AudioBuffer",
    "SignalStats",
    "FileStats",
    "CorpusSummary",
    "MonteCarloResult",
    "WavFormatError",
    "load_wav",
    "write_wav",
    "zero_crossing_rate",
    "proximity_rate",
    "signal_stats",
    "corpus_summary",
    "white_noise",
    "wilson_interval",
    "monte_carlo_tail",
]

NOISE_ALGORITHM = "pcg64"

# 95% two-sided normal quantile, for Wilson intervals.
_Z95 = 1.959963984540054


class WavFormatError(ValueError):
    """The file is not a WAV this module can read (message names the chunk)."""


@dataclass(frozen=True)
class AudioBuffer:
    """Mono samples normalized to [-1, 1] plus the sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError(f"samples must be 1-D, got shape {samples.shape}")
        if samples.size and float(np.max(np.abs(samples))) > 1.0:
            raise ValueError("samples must lie in [-1, 1]")
        if self.sample_rate <= 0:
            raise ValueError(f"sample_rate must be > 0, got {self.sample_rate}")
        samples = samples.copy()
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    def __len__(self) -> int:
        return int(self.samples.size)

    @property
    def duration(self) -> float:
        return self.samples.size / self.sample_rate


@dataclass(frozen=True)
class SignalStats:
    """Pairwise statistics of one signal: zero-crossing rate and the fraction
    of successive samples moving by less than epsilon."""

    zcr: float
    proximity_rate: float
    epsilon: float
    pair_count: int


@dataclass(frozen=True)
class FileStats:
    path: str
    samples: int
    sample_rate: int
    stats: SignalStats


@dataclass(frozen=True)
class CorpusSummary:
    per_file: tuple[FileStats, ...]
    pooled: SignalStats
    skipped: tuple[tuple[str, str], ...]  # (path, reason)


def _require_pairs(samples: np.ndarray):
    if samples.size < 2:
        raise ValueError(f"need at least 2 samples, got {samples.size}")


def zero_crossing_rate(buffer: AudioBuffer) -> float:
    """Fraction of successive pairs with a strict sign change.

    Exact zeros never count as crossings (sign product < 0 is required).
    """
    x = buffer.samples
    _require_pairs(x)
    s = np.sign(x)
    crossings = int(np.count_nonzero(s[:-1] * s[1:] < 0))
    return crossings / (x.size - 1)


def proximity_rate(buffer: AudioBuffer, epsilon: float) -> float:
    """Fraction of successive pairs with |x[i] - x[i-1]| strictly below epsilon."""
    x = buffer.samples
    _require_pairs(x)
    if epsilon <= 0:
        raise ValueError(f"epsilon must be > 0, got {epsilon}")
    near = int(np.count_nonzero(np.abs(np.diff(x)) < epsilon))
    return near / (x.size - 1)


def signal_stats(buffer: AudioBuffer, epsilon: float = 0.1) -> SignalStats:
    return SignalStats(
        zcr=zero_crossing_rate(buffer),
        proximity_rate=proximity_rate(buffer, epsilon),
        epsilon=epsilon,
        pair_count=len(buffer) - 1,
    )


# ---------------------------------------------------------------------------
# WAV I/O
# ---------------------------------------------------------------------------

def load_wav(path) -> AudioBuffer:
    """Read a RIFF/WAVE file into a normalized mono buffer.

    Supports PCM 16/24/32-bit (format code 1) and 32-bit float (format code
    3). Multichannel input is downmixed by per-frame channel averaging.
    16-bit samples divide by 32768 (24/32-bit analogously); float samples are
    clipped to [-1, 1].
    """
    data = Path(path).read_bytes()
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise WavFormatError(f"{path}: not a RIFF/WAVE file (missing RIFF header)")
    fmt = None
    raw = None
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        size = int.from_bytes(data[pos + 4 : pos + 8], "little")
        body = data[pos + 8 : pos + 8 + size]
        name = cid.decode("ascii", "replace").strip()
        if len(body) < size:
            raise WavFormatError(f"{path}: truncated '{name}' chunk ({len(body)} of {size} bytes)")
        if cid == b"fmt ":
            if size < 16:
                raise WavFormatError(f"{path}: 'fmt ' chunk too short ({size} bytes)")
            fmt = struct.unpack("<HHIIHH", body[:16])
        elif cid == b"data":
            raw = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned
    if fmt is None:
        raise WavFormatError(f"{path}: missing 'fmt ' chunk")
    if raw is None:
        raise WavFormatError(f"{path}: missing 'data' chunk")
    if len(raw) == 0:
        raise WavFormatError(f"{path}: zero-length 'data' chunk")
    code, channels, rate, _byte_rate, _block_align, bits = fmt
    if channels < 1:
        raise WavFormatError(f"{path}: 'fmt ' chunk declares zero channels")
    if code == 1 and bits == 16:
        frame = 2 * channels
        _check_frame(path, len(raw), frame)
        vals = np.frombuffer(raw, dtype="<i2").astype(np.float64) / 32768.0
    elif code == 1 and bits == 24:
        frame = 3 * channels
        _check_frame(path, len(raw), frame)
        b = np.frombuffer(raw, dtype=np.uint8).reshape(-1, 3).astype(np.int32)
        vals = b[:, 0] | (b[:, 1] << 8) | (b[:, 2] << 16)
        vals = np.where(vals & 0x800000, vals - 0x1000000, vals).astype(np.float64)
        vals /= 8388608.0
    elif code == 1 and bits == 32:
        frame = 4 * channels
        _check_frame(path, len(raw), frame)
        vals = np.frombuffer(raw, dtype="<i4").astype(np.float64) / 2147483648.0
    elif code == 3 and bits == 32:
        frame = 4 * channels
        _check_frame(path, len(raw), frame)
        vals = np.clip(np.frombuffer(raw, dtype="<f4").astype(np.float64), -1.0, 1.0)
    else:
        raise WavFormatError(
            f"{path}: unsupported 'fmt ' chunk (format code {code}, {bits}-bit)"
        )
    if channels > 1:
        vals = vals.reshape(-1, channels).mean(axis=1)
    return AudioBuffer(samples=vals, sample_rate=rate)


def _check_frame(path, nbytes: int, frame: int):
    if nbytes % frame:
        raise WavFormatError(
            f"{path}: 'data' chunk length {nbytes} is not a multiple of the {frame}-byte frame"
        )


def write_wav(buffer: AudioBuffer, path, bit_depth: int = 16) -> None:
    """Write mono 16-bit little-endian PCM; samples quantize by
    round-to-nearest of sample*32767, clamped to the int16 range."""
    if bit_depth != 16:
        raise ValueError(f"only 16-bit output is supported, got {bit_depth}")
    ints = np.clip(np.rint(buffer.samples * 32767.0), -32768, 32767).astype("<i2")
    raw = ints.tobytes()
    rate = buffer.sample_rate
    header = b"RIFF" + struct.pack("<I", 36 + len(raw)) + b"WAVE"
    header += b"fmt " + struct.pack("<IHHIIHH", 16, 1, 1, rate, rate * 2, 2, 16)
    header += b"data" + struct.pack("<I", len(raw))
    Path(path).write_bytes(header + raw)


def corpus_summary(paths, epsilon: float = 0.1) -> CorpusSummary:
    """Per-file statistics plus a pooled summary weighted by pair count.

    Unreadable files are reported in `skipped`, never silently dropped; an
    entirely unreadable corpus is an error.
    """
    per_file = []
    skipped = []
    for path in paths:
        try:
            buf = load_wav(path)
            stats = signal_stats(buf, epsilon)
        except (OSError, ValueError) as exc:
            skipped.append((str(path), str(exc)))
            continue
        per_file.append(
            FileStats(path=str(path), samples=len(buf), sample_rate=buf.sample_rate, stats=stats)
        )
    if not per_file:
        raise ValueError(f"no readable audio files among {len(skipped)} inputs")
    pairs = sum(f.stats.pair_count for f in per_file)
    pooled = SignalStats(
        zcr=sum(f.stats.zcr * f.stats.pair_count for f in per_file) / pairs,
        proximity_rate=sum(f.stats.proximity_rate * f.stats.pair_count for f in per_file) / pairs,
        epsilon=epsilon,
        pair_count=pairs,
    )
    return CorpusSummary(per_file=tuple(per_file), pooled=pooled, skipped=tuple(skipped))


# ---------------------------------------------------------------------------
# White noise and Monte Carlo
# ---------------------------------------------------------------------------

def white_noise(n: int, seed: int, amplitude: float = 1.0, sample_rate: int = 44100) -> AudioBuffer:
    """n i.i.d. uniform draws on [-amplitude, amplitude] from PCG64(seed)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not (0 < amplitude <= 1.0):
        raise ValueError(f"amplitude must be in (0, 1], got {amplitude}")
    rng = np.random.Generator(np.random.PCG64(seed))
    samples = rng.uniform(-amplitude, amplitude, n)
    return AudioBuffer(samples=samples, sample_rate=sample_rate)


def wilson_interval(successes: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not (0 <= successes <= trials):
        raise ValueError("successes must be in [0, trials]")
    phat = successes / trials
    denom = 1 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class MonteCarloResult:
    trials: int
    successes: int
    estimate: float
    ci_low: float
    ci_high: float
    seed: int
    algorithm: str = NOISE_ALGORITHM


def _mc_chunk_sizes(trials: int, n: int) -> list[int]:
    # fixed partition: depends only on (trials, n), never on worker count
    chunk = max(1, min(32768, 4_194_304 // max(1, n)))
    sizes = [chunk] * (trials // chunk)
    if trials % chunk:
        sizes.append(trials % chunk)
    return sizes


def monte_carlo_tail(
    n: int,
    threshold: int,
    p,
    direction: str,
    trials: int,
    seed: int,
) -> MonteCarloResult:
    """Estimate the tail probability by direct simulation.

    Each trial draws n Bernoulli(p) outcomes and tests the tail predicate.
    Trials are split into fixed-size chunks seeded by (seed, chunk index), so
    the count is reproducible and independent of execution order.
    """
    _check_direction(direction)
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    if not (0 <= threshold <= n):
        raise ValueError(f"threshold must be in [0, n={n}], got {threshold}")
    p_frac = parse_probability(p)
    if not (0 < p_frac < 1):
        raise ValueError(f"p must be in (0, 1), got {p_frac}")
    p_float = float(p_frac)
    successes = 0
    for idx, size in enumerate(_mc_chunk_sizes(trials, n)):
        rng = np.random.Generator(
            np.random.PCG64(np.random.SeedSequence(entropy=seed, spawn_key=(idx,)))
        )
        draws = rng.random((size, n)) < p_float
        counts = draws.sum(axis=1)
        if direction == UPPER:
            successes += int(np.count_nonzero(counts >= threshold))
        else:
            successes += int(np.count_nonzero(counts <= threshold))
    estimate = successes / trials
    ci_low, ci_high = wilson_interval(successes, trials)
    return MonteCarloResult(
        trials=trials, successes=successes, estimate=estimate,
        ci_low=ci_low, ci_high=ci_high, seed=seed,
    )
