"""Conductance-drop fingerprints of sample streams.

Samples are mapped to erase-pulse amplitudes, grouped into fixed-length
segments (15 samples by default), and each segment is "applied" to a fresh
model device: the device is reset to its ON conductance, one pulse per
sample is applied, and the total conductance drop becomes one matrix cell.
Rows are channels (clip mode) or band components (running mode); columns
are consecutive segments, so the matrix reads like a coarse spectrogram.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .device import MemristorParams, total_erase
from .errors import CalibrationError, InvalidInputError
from .multiscale import BAND_NAMES, MultiScaleFrame

__all__ = [
    "AmplitudeCalibration",
    "FingerprintConfig",
    "FingerprintMatrix",
    "map_amplitude",
    "auto_calibrate",
    "fingerprint_segment",
    "fingerprint_clip",
    "fingerprint_bands",
    "BandFingerprinter",
]


@dataclass(frozen=True)
class AmplitudeCalibration:
    """Affine sample-to-voltage mapping, clamped to [v_min, v_max].

    ``mode`` is "absolute" (rectify the sample first; polarity-agnostic,
    the default) or "signed" (use the raw sample).
    """

    in_lo: float
    in_hi: float
    v_min: float = 1.3
    v_max: float = 1.8
    mode: str = "absolute"

    def __post_init__(self):
        if self.mode not in ("absolute", "signed"):
            raise InvalidInputError(f"mode must be 'absolute' or 'signed', got {self.mode!r}")
        for name in ("in_lo", "in_hi", "v_min", "v_max"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"calibration field {name!r} must be finite")
        if not self.in_lo < self.in_hi:
            raise InvalidInputError("require in_lo < in_hi")
        if not self.v_min < self.v_max:
            raise InvalidInputError("require v_min < v_max")


@dataclass(frozen=True)
class FingerprintConfig:
    """Segment length and the device evaluating each segment."""

    params: MemristorParams = MemristorParams()
    segment_len: int = 15

    def __post_init__(self):
        if int(self.segment_len) != self.segment_len or self.segment_len < 1:
            raise InvalidInputError(f"segment_len must be a positive integer, got {self.segment_len!r}")
        object.__setattr__(self, "segment_len", int(self.segment_len))


@dataclass(frozen=True)
class FingerprintMatrix:
    """Total conductance drop per (row, segment).

    values has shape (len(row_labels), n_segments); every cell lies in
    [0, g_on - g_floor].  segment_duration is the time covered by one
    column, in seconds.
    """

    row_labels: tuple[str, ...]
    values: np.ndarray
    segment_duration: float

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] != len(self.row_labels):
            raise InvalidInputError(
                f"values shape {values.shape} does not match {len(self.row_labels)} row labels"
            )
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "row_labels", tuple(self.row_labels))

    @property
    def n_segments(self) -> int:
        return self.values.shape[1]


def map_amplitude(cal: AmplitudeCalibration, sample: float) -> float:
    """Pulse amplitude in volts for one sample."""
    sample = float(sample)
    if not math.isfinite(sample):
        raise InvalidInputError(f"sample must be finite, got {sample!r}")
    u = abs(sample) if cal.mode == "absolute" else sample
    if u <= cal.in_lo:
        return cal.v_min
    if u >= cal.in_hi:
        return cal.v_max
    span = (cal.v_max - cal.v_min) / (cal.in_hi - cal.in_lo)
    return cal.v_min + (u - cal.in_lo) * span


def auto_calibrate(
    signal: Sequence[float],
    lo_pct: float = 1.0,
    hi_pct: float = 99.0,
    *,
    mode: str = "absolute",
    v_min: float = 1.3,
    v_max: float = 1.8,
) -> AmplitudeCalibration:
    """Calibration whose input range spans the given percentiles of the signal.

    Rectified values are used in "absolute" mode.  A signal whose two
    percentiles coincide (constant magnitude) cannot be calibrated and
    raises CalibrationError.
    """
    values = np.asarray(signal, dtype=float).ravel()
    if values.size < 100:
        raise InvalidInputError(f"need at least 100 samples to calibrate, got {values.size}")
    if not np.all(np.isfinite(values)):
        raise InvalidInputError("signal contains non-finite samples")
    if not (0 <= lo_pct < hi_pct <= 100):
        raise InvalidInputError(f"require 0 <= lo_pct < hi_pct <= 100, got {lo_pct}, {hi_pct}")
    if mode == "absolute":
        values = np.abs(values)
    in_lo, in_hi = np.percentile(values, [lo_pct, hi_pct])
    if in_lo == in_hi:
        raise CalibrationError(
            f"percentiles {lo_pct} and {hi_pct} coincide at {in_lo}; input range is degenerate"
        )
    return AmplitudeCalibration(in_lo=float(in_lo), in_hi=float(in_hi), v_min=v_min, v_max=v_max, mode=mode)


def fingerprint_segment(
    cfg: FingerprintConfig, cal: AmplitudeCalibration, samples: Sequence[float]
) -> float:
    """Total conductance drop of one segment on a freshly reset device."""
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size != cfg.segment_len:
        raise InvalidInputError(
            f"segment must have exactly {cfg.segment_len} samples, got {samples.size}"
        )
    volts = [map_amplitude(cal, s) for s in samples]
    return total_erase(cfg.params, volts)


def _per_row_calibrations(cals, n_rows: int) -> list[AmplitudeCalibration]:
    if isinstance(cals, AmplitudeCalibration):
        return [cals] * n_rows
    cals = list(cals)
    if len(cals) != n_rows:
        raise InvalidInputError(f"got {len(cals)} calibrations for {n_rows} rows")
    return cals


def fingerprint_clip(
    cfg: FingerprintConfig,
    cals: AmplitudeCalibration | Sequence[AmplitudeCalibration],
    clip: np.ndarray,
    channel_names: Sequence[str] | None = None,
    sample_rate: float = 400.0,
) -> FingerprintMatrix:
    """Fingerprint a channels x samples clip; one row per channel.

    Columns cover floor(N / segment_len) complete segments; trailing
    samples are dropped.  ``cals`` is one calibration shared by all
    channels or one per channel.
    """
    try:
        data = np.asarray(clip, dtype=float)
    except ValueError as exc:
        raise InvalidInputError("clip channels must all have the same length") from exc
    if data.ndim == 1:
        data = data[np.newaxis, :]
    if data.ndim != 2:
        raise InvalidInputError(f"clip must be 2-D (channels x samples), got shape {data.shape}")
    n_channels, n_samples = data.shape
    n_segments = n_samples // cfg.segment_len
    if n_segments == 0:
        raise InvalidInputError(
            f"{n_samples} samples hold no complete segment of {cfg.segment_len}"
        )
    if channel_names is None:
        channel_names = [f"ch{i}" for i in range(n_channels)]
    elif len(channel_names) != n_channels:
        raise InvalidInputError(
            f"got {len(channel_names)} channel names for {n_channels} channels"
        )
    row_cals = _per_row_calibrations(cals, n_channels)

    values = np.empty((n_channels, n_segments))
    for r in range(n_channels):
        for c in range(n_segments):
            seg = data[r, c * cfg.segment_len : (c + 1) * cfg.segment_len]
            values[r, c] = fingerprint_segment(cfg, row_cals[r], seg)
    return FingerprintMatrix(
        row_labels=tuple(channel_names),
        values=values,
        segment_duration=cfg.segment_len / float(sample_rate),
    )


class BandFingerprinter:
    """Streaming band fingerprint: one new column every ``segment_len`` frames.

    Rows are fixed as (f10, f21, f32, f43).  ``push`` returns the completed
    column when one is emitted, else None; ``matrix`` snapshots all columns
    emitted so far.
    """

    def __init__(
        self,
        cfg: FingerprintConfig,
        cals: AmplitudeCalibration | Sequence[AmplitudeCalibration],
        sample_rate: float = 400.0,
    ):
        self.cfg = cfg
        self.cals = _per_row_calibrations(cals, len(BAND_NAMES))
        self.sample_rate = float(sample_rate)
        self._pending: list[MultiScaleFrame] = []
        self._columns: list[np.ndarray] = []

    def push(self, frame: MultiScaleFrame) -> np.ndarray | None:
        self._pending.append(frame)
        if len(self._pending) < self.cfg.segment_len:
            return None
        bands = np.array([f.bands for f in self._pending])  # segment_len x 4
        self._pending.clear()
        column = np.array(
            [
                fingerprint_segment(self.cfg, self.cals[r], bands[:, r])
                for r in range(len(BAND_NAMES))
            ]
        )
        self._columns.append(column)
        return column

    def matrix(self) -> FingerprintMatrix:
        if self._columns:
            values = np.column_stack(self._columns)
        else:
            values = np.empty((len(BAND_NAMES), 0))
        return FingerprintMatrix(
            row_labels=BAND_NAMES,
            values=values,
            segment_duration=self.cfg.segment_len / self.sample_rate,
        )


def fingerprint_bands(
    cfg: FingerprintConfig,
    cals: AmplitudeCalibration | Sequence[AmplitudeCalibration],
    frames: Iterable[MultiScaleFrame],
    sample_rate: float = 400.0,
) -> FingerprintMatrix:
    """Fingerprint of the four band components of a frame sequence.

    Batch form of :class:`BandFingerprinter`; the two agree bit for bit on
    the same frames.
    """
    frames = list(frames)
    if not frames:
        raise InvalidInputError("frames must be nonempty")
    if len(frames) < cfg.segment_len:
        raise InvalidInputError(
            f"{len(frames)} frames hold no complete segment of {cfg.segment_len}"
        )
    streamer = BandFingerprinter(cfg, cals, sample_rate=sample_rate)
    for frame in frames:
        streamer.push(frame)
    return streamer.matrix()
