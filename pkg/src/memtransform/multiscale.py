"""Streaming multi-scale running averages and band components.

Five signals are maintained per input stream: f0..f3 are trailing-window
means over progressively shorter windows (defaults 10 s, 1 s, 100 ms,
10 ms) and f4 is the raw sample.  Adjacent differences f10 = f1 - f0,
f21 = f2 - f1, f32 = f3 - f2, f43 = f4 - f3 isolate one decade of timing
behaviour each, giving a cheap band decomposition of the stream.

Each scale keeps a ring buffer and a running sum, so a push costs O(1)
amortized regardless of window length.  The running sums are recomputed
from the buffers once per full window rotation to bound floating-point
drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ConfigError, InvalidInputError

__all__ = ["ScaleBank", "MultiScaleFrame", "MultiScaleState", "new_state", "process"]

BAND_NAMES = ("f10", "f21", "f32", "f43")


@dataclass(frozen=True)
class ScaleBank:
    """Sampling rate and the four averaging windows, longest first."""

    sample_rate: float = 400.0
    window_durations: tuple[float, float, float, float] = (10.0, 1.0, 0.1, 0.01)

    def __post_init__(self):
        if not (math.isfinite(self.sample_rate) and self.sample_rate > 0):
            raise ConfigError(f"sample_rate must be positive, got {self.sample_rate!r}")
        durations = tuple(float(d) for d in self.window_durations)
        object.__setattr__(self, "window_durations", durations)
        if len(durations) != 4:
            raise ConfigError("exactly four window durations are required")
        if any(d <= 0 for d in durations):
            raise ConfigError("window durations must be positive")
        if any(later >= earlier for earlier, later in zip(durations, durations[1:])):
            raise ConfigError("window durations must be strictly decreasing")
        for d in durations:
            n = d * self.sample_rate
            if abs(n - round(n)) > 1e-9 or round(n) < 1:
                raise ConfigError(
                    f"window of {d} s is not a whole number of samples at "
                    f"{self.sample_rate} Hz"
                )

    @property
    def window_lengths(self) -> tuple[int, int, int, int]:
        """Window sizes in samples, longest first."""
        return tuple(int(round(d * self.sample_rate)) for d in self.window_durations)


class MultiScaleFrame(NamedTuple):
    """One time step of the decomposition (averages, bands, sample index)."""

    time_index: int
    f0: float
    f1: float
    f2: float
    f3: float
    f4: float
    f10: float
    f21: float
    f32: float
    f43: float

    @property
    def bands(self) -> tuple[float, float, float, float]:
        return (self.f10, self.f21, self.f32, self.f43)


class MultiScaleState:
    """Streaming state: one ring buffer and running sum per averaging scale."""

    def __init__(self, bank: ScaleBank):
        self.bank = bank
        self._windows = bank.window_lengths
        self._buffers = [np.zeros(w) for w in self._windows]
        self._sums = [0.0] * len(self._windows)
        self._count = 0

    @property
    def samples_seen(self) -> int:
        return self._count

    def push(self, sample: float) -> MultiScaleFrame:
        """Ingest one sample and return the current frame.

        Before a window has filled, its mean is taken over the samples seen
        so far.  Non-finite samples are rejected with the state unchanged.
        """
        sample = float(sample)
        if not math.isfinite(sample):
            raise InvalidInputError(f"sample must be finite, got {sample!r}")

        count = self._count
        means = []
        for i, w in enumerate(self._windows):
            buf = self._buffers[i]
            pos = count % w
            s = self._sums[i] + sample
            if count >= w:
                s -= float(buf[pos])
            buf[pos] = sample
            if pos == w - 1:
                # full rotation: resum exactly to cancel accumulated drift
                s = float(np.sum(buf))
            self._sums[i] = s
            means.append(s / min(count + 1, w))
        self._count = count + 1

        f0, f1, f2, f3 = means
        f4 = sample
        return MultiScaleFrame(
            time_index=count,
            f0=f0,
            f1=f1,
            f2=f2,
            f3=f3,
            f4=f4,
            f10=f1 - f0,
            f21=f2 - f1,
            f32=f3 - f2,
            f43=f4 - f3,
        )


def new_state(bank: ScaleBank) -> MultiScaleState:
    """Fresh streaming state for ``bank``."""
    return MultiScaleState(bank)


def process(bank: ScaleBank, signal: Sequence[float]) -> list[MultiScaleFrame]:
    """Run the whole signal through a fresh state, one frame per sample."""
    state = MultiScaleState(bank)
    return [state.push(v) for v in np.asarray(signal, dtype=float).ravel()]
