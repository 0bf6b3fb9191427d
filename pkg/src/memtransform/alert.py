"""Event detection on the slow band and the decaying alert level.

Events are excursions of |f10| detected with a dual-threshold hysteresis
(enter high, exit low) and a minimum duration, which keeps chatter on
noisy data from fragmenting one discharge into many events.  Each event
carries its width, its separation from the previous event, and the number
of full cycles the faster f32 band completed inside it.

The alert level is a leaky integrator: it decays as exp(-dt/tau) and each
closed event adds a bounded increment that grows with short separations,
many fast cycles and long widths.  The level is clamped to [0, cap].
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Iterable, Sequence

from .errors import ConfigError, InvalidInputError
from .multiscale import MultiScaleFrame

__all__ = [
    "EventDetectorConfig",
    "Event",
    "AlertConfig",
    "AlertState",
    "detect_events",
    "count_fast_cycles",
    "alert_step",
    "alert_series",
]


@dataclass(frozen=True)
class EventDetectorConfig:
    """Hysteresis thresholds on |f10|, debounce duration, cycle noise floor."""

    enter_threshold: float
    exit_threshold: float
    min_duration: float = 0.25
    noise_floor: float = 0.0

    def __post_init__(self):
        if not (0 <= self.exit_threshold < self.enter_threshold):
            raise ConfigError(
                f"require 0 <= exit_threshold < enter_threshold, got "
                f"{self.exit_threshold!r} and {self.enter_threshold!r}"
            )
        if self.min_duration <= 0:
            raise ConfigError("min_duration must be positive")
        if self.noise_floor < 0:
            raise ConfigError("noise_floor must be non-negative")


@dataclass(frozen=True)
class Event:
    """One detected slow-band event.

    separation is the gap (seconds) from the previous event's close to this
    event's onset; None for the first event of a recording.
    """

    onset: float
    width: float
    peak: float
    separation: float | None = None
    fast_cycles: int = 0

    @property
    def close(self) -> float:
        return self.onset + self.width


@dataclass(frozen=True)
class AlertConfig:
    """Leaky-integrator decay constant, per-feature weights and references.

    Each closed event adds
        w_sep  * min(1, sep_ref / separation)   (0 for the first event)
      + w_fast * min(1, fast_cycles / fast_ref)
      + w_width* min(1, width / width_ref)
    and the level is clamped to [0, cap].
    """

    tau: float = 30.0
    w_sep: float = 1.0
    w_fast: float = 1.0
    w_width: float = 1.0
    sep_ref: float = 10.0
    fast_ref: float = 5.0
    width_ref: float = 10.0
    cap: float = 3.0

    def __post_init__(self):
        if self.tau <= 0 or self.cap <= 0:
            raise ConfigError("tau and cap must be positive")
        if min(self.sep_ref, self.fast_ref, self.width_ref) <= 0:
            raise ConfigError("reference values must be positive")
        if min(self.w_sep, self.w_fast, self.w_width) < 0:
            raise ConfigError("weights must be non-negative")


@dataclass(frozen=True)
class AlertState:
    """Current alert level and the time it was last updated."""

    level: float = 0.0
    last_update: float = 0.0


def detect_events(
    series: Iterable[tuple[float, float]], cfg: EventDetectorConfig
) -> list[Event]:
    """Hysteresis event detection on a time-ordered (time, f10) series.

    An event opens when |f10| rises above enter_threshold and closes when
    it falls below exit_threshold (or at the end of the series).  Events
    narrower than min_duration are discarded.
    """
    events: list[Event] = []
    open_time = None
    peak = 0.0
    prev_close = None
    prev_time = None

    def close_event(t_close: float):
        nonlocal open_time, peak, prev_close
        width = t_close - open_time
        if width >= cfg.min_duration:
            separation = None if prev_close is None else open_time - prev_close
            events.append(Event(onset=open_time, width=width, peak=peak, separation=separation))
            prev_close = t_close
        open_time = None
        peak = 0.0

    for t, v in series:
        t = float(t)
        if prev_time is not None and t <= prev_time:
            raise InvalidInputError(f"timestamps must be strictly increasing at t={t}")
        prev_time = t
        mag = abs(float(v))
        if open_time is None:
            if mag > cfg.enter_threshold:
                open_time = t
                peak = mag
        else:
            if mag < cfg.exit_threshold:
                close_event(t)
            else:
                peak = max(peak, mag)
    if open_time is not None and prev_time is not None:
        close_event(prev_time)
    return events


def count_fast_cycles(
    frames: Sequence[MultiScaleFrame],
    event: Event,
    cfg: EventDetectorConfig,
    sample_rate: float = 400.0,
) -> int:
    """Full f32 cycles inside the event window.

    f32 samples are classified as +1/-1 when they exceed noise_floor in
    magnitude and ignored otherwise; a full cycle is one positive plus one
    negative excursion, so the count is min(#positive runs, #negative runs).
    """
    pos_runs = 0
    neg_runs = 0
    last_sign = 0
    for frame in frames:
        t = frame.time_index / sample_rate
        if t < event.onset or t > event.close:
            continue
        if frame.f32 > cfg.noise_floor:
            sign = 1
        elif frame.f32 < -cfg.noise_floor:
            sign = -1
        else:
            continue
        if sign != last_sign:
            if sign > 0:
                pos_runs += 1
            else:
                neg_runs += 1
            last_sign = sign
    return min(pos_runs, neg_runs)


def alert_step(
    state: AlertState, now: float, event: Event | None, cfg: AlertConfig
) -> AlertState:
    """Decay the level to ``now`` and apply one event's increment, if any."""
    if now < state.last_update:
        raise InvalidInputError(
            f"time went backwards: {now} < last update {state.last_update}"
        )
    level = state.level * math.exp(-(now - state.last_update) / cfg.tau)
    if event is not None:
        if event.separation is not None:
            level += cfg.w_sep * min(1.0, cfg.sep_ref / event.separation)
        level += cfg.w_fast * min(1.0, event.fast_cycles / cfg.fast_ref)
        level += cfg.w_width * min(1.0, event.width / cfg.width_ref)
    level = min(max(level, 0.0), cfg.cap)
    return AlertState(level=level, last_update=now)


def alert_series(
    frames: Sequence[MultiScaleFrame],
    detector_cfg: EventDetectorConfig,
    alert_cfg: AlertConfig,
    sample_rate: float = 400.0,
) -> list[tuple[float, float]]:
    """Alert level over time: detection plus per-sample decay/increments.

    Each event's increment lands on the first frame at or after the event
    closes (its features are only known then).  Returns one (time, level)
    pair per frame.
    """
    if not frames:
        raise InvalidInputError("frames must be nonempty")
    times = [f.time_index / sample_rate for f in frames]
    events = detect_events(((t, f.f10) for t, f in zip(times, frames)), detector_cfg)
    events = [
        replace(e, fast_cycles=count_fast_cycles(frames, e, detector_cfg, sample_rate))
        for e in events
    ]

    state = AlertState(level=0.0, last_update=times[0])
    out = []
    next_event = 0
    for t in times:
        event = None
        if next_event < len(events) and events[next_event].close <= t:
            event = events[next_event]
            next_event += 1
        state = alert_step(state, t, event, alert_cfg)
        out.append((t, state.level))
    return out
