"""Recording ingestion, block-mean downsampling, synthesis and exporters.

File formats:

* Recording CSV: leading ``#`` comment lines (one must be
  ``# sample_rate=<Hz>``), a header row of channel names, then one row per
  sample.  Values are written with ``repr`` so a write/read round trip is
  exact.
* Raw: little-endian 32-bit floats, channel-interleaved frames, described
  by a JSON sidecar ``{"channels": C, "sample_rate": Hz, "encoding":
  "float32-le"}``.
* Matrix CSV: ``# segment_duration=`` comment, a header of segment start
  times, then one row per matrix row: label plus values at 9 significant
  digits.
* PGM (P5): one pixel per matrix cell, min-max scaled to 0..255, row 0 at
  the top.  Byte-exact for identical inputs.
"""

from __future__ import annotations

import json
import math
import os
import re
import tempfile
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import ConfigError, FormatError, InvalidInputError
from .fingerprint import FingerprintMatrix

__all__ = [
    "Recording",
    "RawMeta",
    "SynthConfig",
    "read_csv",
    "write_csv",
    "read_raw",
    "downsample_mean",
    "synth",
    "write_matrix_csv",
    "read_matrix_csv",
    "write_pgm",
]


@dataclass(frozen=True)
class Recording:
    """Multichannel sampled signal: names, rate, and a channels x N matrix."""

    channel_names: tuple[str, ...]
    sample_rate: float
    samples: np.ndarray

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 2:
            raise InvalidInputError(f"samples must be 2-D (channels x N), got shape {samples.shape}")
        names = tuple(str(n) for n in self.channel_names)
        if len(names) != samples.shape[0]:
            raise InvalidInputError(
                f"{len(names)} channel names for {samples.shape[0]} channels"
            )
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise InvalidInputError(f"sample_rate must be positive, got {self.sample_rate!r}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "channel_names", names)

    @property
    def n_channels(self) -> int:
        return self.samples.shape[0]

    @property
    def n_samples(self) -> int:
        return self.samples.shape[1]

    @property
    def duration(self) -> float:
        return self.n_samples / self.sample_rate


@dataclass(frozen=True)
class RawMeta:
    """Sidecar metadata for the raw float32 interleaved format."""

    channels: int
    sample_rate: float
    encoding: str = "float32-le"

    def __post_init__(self):
        if self.channels < 1:
            raise FormatError(f"channels must be >= 1, got {self.channels}")
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise FormatError(f"sample_rate must be positive, got {self.sample_rate!r}")
        if self.encoding != "float32-le":
            raise FormatError(f"unsupported encoding {self.encoding!r}")

    @classmethod
    def from_json(cls, path) -> "RawMeta":
        with open(path, encoding="utf-8") as fh:
            try:
                doc = json.load(fh)
            except json.JSONDecodeError as exc:
                raise FormatError(f"{path}: invalid JSON sidecar: {exc}") from exc
        if not isinstance(doc, dict):
            raise FormatError(f"{path}: sidecar must be a JSON object")
        unknown = set(doc) - {"channels", "sample_rate", "encoding"}
        if unknown:
            raise FormatError(f"{path}: unknown sidecar keys {sorted(unknown)}")
        if "channels" not in doc or "sample_rate" not in doc:
            raise FormatError(f"{path}: sidecar needs 'channels' and 'sample_rate'")
        return cls(
            channels=int(doc["channels"]),
            sample_rate=float(doc["sample_rate"]),
            encoding=str(doc.get("encoding", "float32-le")),
        )


def _atomic_write(path, writer: Callable) -> None:
    """Write via a temp file in the target directory, then rename into place."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=os.path.basename(path) + ".")
    try:
        with os.fdopen(fd, "wb") as fh:
            writer(fh)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


_SAMPLE_RATE_RE = re.compile(r"#\s*sample_rate\s*=\s*([^\s,]+)\s*$")


def read_csv(path) -> Recording:
    """Parse a recording CSV; malformed input raises FormatError with its position."""
    sample_rate = None
    header = None
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if header is None:
                if line.startswith("#"):
                    m = _SAMPLE_RATE_RE.match(line)
                    if m:
                        try:
                            sample_rate = float(m.group(1))
                        except ValueError as exc:
                            raise FormatError(
                                f"{path}: line {lineno}: bad sample_rate {m.group(1)!r}"
                            ) from exc
                    continue
                header = [c.strip() for c in line.split(",")]
                if any(not name for name in header):
                    raise FormatError(f"{path}: line {lineno}: empty channel name in header")
                continue
            cells = line.split(",")
            if len(cells) != len(header):
                raise FormatError(
                    f"{path}: row at line {lineno} has {len(cells)} values, expected {len(header)}"
                )
            row = []
            for col, cell in enumerate(cells, start=1):
                try:
                    value = float(cell)
                except ValueError as exc:
                    raise FormatError(
                        f"{path}: line {lineno}, column {col}: non-numeric cell {cell.strip()!r}"
                    ) from exc
                if not math.isfinite(value):
                    raise FormatError(
                        f"{path}: line {lineno}, column {col}: non-finite sample {cell.strip()!r}"
                    )
                row.append(value)
            rows.append(row)
    if header is None:
        raise FormatError(f"{path}: missing header row")
    if sample_rate is None:
        raise FormatError(f"{path}: missing '# sample_rate=<Hz>' comment")
    if rows:
        samples = np.array(rows, dtype=float).T
    else:
        samples = np.empty((len(header), 0))
    return Recording(channel_names=tuple(header), sample_rate=sample_rate, samples=samples)


def write_csv(rec: Recording, path) -> None:
    """Write a recording CSV readable by :func:`read_csv`; values round-trip exactly."""
    for name in rec.channel_names:
        if "," in name or "\n" in name or name.startswith("#"):
            raise InvalidInputError(f"channel name {name!r} cannot be written to CSV")

    def writer(fh):
        lines = [f"# sample_rate={rec.sample_rate!r}", ",".join(rec.channel_names)]
        for i in range(rec.n_samples):
            lines.append(",".join(repr(v) for v in rec.samples[:, i].tolist()))
        fh.write(("\n".join(lines) + "\n").encode("utf-8"))

    _atomic_write(path, writer)


def read_raw(path, meta: RawMeta) -> Recording:
    """Read little-endian float32 channel-interleaved frames."""
    with open(path, "rb") as fh:
        blob = fh.read()
    frame_size = 4 * meta.channels
    if len(blob) % frame_size != 0:
        raise FormatError(
            f"{path}: {len(blob)} bytes is not a whole number of "
            f"{meta.channels}-channel float32 frames"
        )
    flat = np.frombuffer(blob, dtype="<f4")
    samples = flat.reshape(-1, meta.channels).T.astype(float)
    names = tuple(f"ch{i}" for i in range(meta.channels))
    return Recording(channel_names=names, sample_rate=meta.sample_rate, samples=samples)


def downsample_mean(rec: Recording, factor: int) -> Recording:
    """Average blocks of ``factor`` consecutive samples; remainder dropped."""
    if int(factor) != factor or factor < 1:
        raise ConfigError(f"downsample factor must be a positive integer, got {factor!r}")
    factor = int(factor)
    if factor == 1:
        return rec
    n_out = rec.n_samples // factor
    kept = rec.samples[:, : n_out * factor]
    samples = kept.reshape(rec.n_channels, n_out, factor).mean(axis=2)
    return Recording(
        channel_names=rec.channel_names,
        sample_rate=rec.sample_rate / factor,
        samples=samples,
    )


# Synthetic waveform shape constants (signal units / seconds).  Interictal
# discharges are asymmetric biphasic: a sharp positive lobe followed by a
# broader, weaker negative lobe.
_INTERICTAL_SPIKE_AMP = 1.0
_INTERICTAL_SPIKE_S = 0.5
_INTERICTAL_WAVE_AMP = 0.15
_INTERICTAL_WAVE_S = 1.0
_ICTAL_SLOW_AMP = 1.2
_ICTAL_FAST_AMP = 2.0
_ICTAL_WAVE_S = 2.0
_ICTAL_EVENT_SEP_S = 4.5
_ICTAL_START_S = 10.0
_MIXED_BLOCK_S = 30.0


@dataclass(frozen=True)
class SynthConfig:
    """Deterministic test-signal generator settings."""

    duration: float
    sample_rate: float = 400.0
    regime: str = "mixed"
    event_separation: float = 15.0
    ictal_burst_rate: float = 4.0
    fast_oscillation: float = 80.0
    noise_amplitude: float = 0.05
    seed: int = 0

    def __post_init__(self):
        if self.regime not in ("interictal", "ictal", "mixed"):
            raise ConfigError(f"unknown regime {self.regime!r}")
        if self.duration <= 0:
            raise ConfigError("duration must be positive")
        if min(self.sample_rate, self.event_separation, self.ictal_burst_rate, self.fast_oscillation) <= 0:
            raise ConfigError("rates and separations must be positive")
        if self.noise_amplitude < 0:
            raise ConfigError("noise_amplitude must be non-negative")


def _add_interictal(sig: np.ndarray, t: np.ndarray, cfg: SynthConfig, t0: float, t1: float) -> None:
    """Isolated biphasic discharges every ``event_separation`` seconds in [t0, t1)."""
    total = _INTERICTAL_SPIKE_S + _INTERICTAL_WAVE_S
    start = t0 + cfg.event_separation
    while start + total <= t1:
        spike = (t >= start) & (t < start + _INTERICTAL_SPIKE_S)
        sig[spike] += _INTERICTAL_SPIKE_AMP * np.sin(
            np.pi * (t[spike] - start) / _INTERICTAL_SPIKE_S
        )
        wave = (t >= start + _INTERICTAL_SPIKE_S) & (t < start + total)
        sig[wave] -= _INTERICTAL_WAVE_AMP * np.sin(
            np.pi * (t[wave] - start - _INTERICTAL_SPIKE_S) / _INTERICTAL_WAVE_S
        )
        start += cfg.event_separation


def _add_ictal(sig: np.ndarray, t: np.ndarray, cfg: SynthConfig, t0: float, t1: float) -> None:
    """Clustered slow waves carrying burst-gated fast oscillations in [t0, t1)."""
    start = t0
    while start + _ICTAL_WAVE_S <= t1:
        window = (t >= start) & (t < start + _ICTAL_WAVE_S)
        local = t[window] - start
        slow = _ICTAL_SLOW_AMP * np.sin(2 * np.pi * local / _ICTAL_WAVE_S)
        bursts = np.maximum(0.0, np.sin(2 * np.pi * cfg.ictal_burst_rate * local))
        fast = _ICTAL_FAST_AMP * bursts * np.sin(2 * np.pi * cfg.fast_oscillation * local)
        sig[window] += slow + fast
        start += _ICTAL_EVENT_SEP_S


def synth(config: SynthConfig) -> Recording:
    """Generate a single-channel recording; bit-identical for equal configs."""
    n = int(round(config.duration * config.sample_rate))
    t = np.arange(n) / config.sample_rate
    rng = np.random.default_rng(config.seed)
    sig = config.noise_amplitude * rng.standard_normal(n)

    if config.regime == "interictal":
        _add_interictal(sig, t, config, 0.0, config.duration)
    elif config.regime == "ictal":
        _add_ictal(sig, t, config, _ICTAL_START_S, config.duration)
    else:
        block_start = 0.0
        interictal_block = True
        while block_start < config.duration:
            block_end = min(block_start + _MIXED_BLOCK_S, config.duration)
            if interictal_block:
                _add_interictal(sig, t, config, block_start, block_end)
            else:
                _add_ictal(sig, t, config, block_start + 2.0, block_end)
            block_start = block_end
            interictal_block = not interictal_block

    return Recording(
        channel_names=("ch0",),
        sample_rate=config.sample_rate,
        samples=sig[np.newaxis, :],
    )


def _format_sig9(value: float) -> str:
    return format(value, ".9g")


def write_matrix_csv(matrix: FingerprintMatrix, path) -> None:
    """Write a fingerprint matrix: header of segment start times, one row per label."""

    def writer(fh):
        times = [_format_sig9(c * matrix.segment_duration) for c in range(matrix.n_segments)]
        lines = [
            f"# segment_duration={matrix.segment_duration!r}",
            ",".join([""] + times),
        ]
        for label, row in zip(matrix.row_labels, matrix.values):
            lines.append(",".join([label] + [_format_sig9(v) for v in row.tolist()]))
        fh.write(("\n".join(lines) + "\n").encode("utf-8"))

    _atomic_write(path, writer)


def read_matrix_csv(path) -> FingerprintMatrix:
    """Inverse of :func:`write_matrix_csv` (to the printed precision)."""
    segment_duration = None
    header = None
    labels: list[str] = []
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.rstrip("\r\n")
            if header is None and line.startswith("#"):
                m = re.match(r"#\s*segment_duration\s*=\s*(\S+)\s*$", line)
                if m:
                    segment_duration = float(m.group(1))
                continue
            cells = line.split(",")
            if header is None:
                header = cells
                continue
            if len(cells) != len(header):
                raise FormatError(
                    f"{path}: row at line {lineno} has {len(cells)} values, expected {len(header)}"
                )
            labels.append(cells[0])
            try:
                rows.append([float(c) for c in cells[1:]])
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: non-numeric cell") from exc
    if header is None:
        raise FormatError(f"{path}: missing header row")
    if segment_duration is None:
        raise FormatError(f"{path}: missing '# segment_duration=' comment")
    values = np.array(rows, dtype=float) if rows else np.empty((0, len(header) - 1))
    return FingerprintMatrix(
        row_labels=tuple(labels), values=values, segment_duration=segment_duration
    )


def write_pgm(matrix: FingerprintMatrix, path) -> None:
    """Render a matrix as a binary PGM image, min-max scaled to 0..255.

    One pixel per cell, row 0 at the top; a constant matrix renders black.
    """
    if matrix.values.size == 0:
        raise InvalidInputError("cannot render an empty matrix")
    values = matrix.values
    lo = float(values.min())
    hi = float(values.max())
    if hi == lo:
        pixels = np.zeros(values.shape, dtype=np.uint8)
    else:
        scaled = 255.0 * (values - lo) / (hi - lo)
        pixels = np.floor(scaled + 0.5).astype(np.uint8)

    def writer(fh):
        height, width = pixels.shape
        fh.write(f"P5\n{width} {height}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes(order="C"))

    _atomic_write(path, writer)
