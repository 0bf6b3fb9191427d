"""Command-line pipeline: ingest -> running averages -> fingerprint -> alert.

A run is described by a JSON config file; command-line flags override the
matching config entries.  Unknown keys anywhere in the config are hard
errors so typos in numeric parameters cannot pass silently.

Exit codes: 0 success, 1 usage error, 2 input/format error, 3 numeric or
configuration error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass, field, fields, replace
from pathlib import Path

import numpy as np

from .alert import AlertConfig, EventDetectorConfig, alert_series, detect_events
from .device import EraseObservation, MemristorParams, fit_params
from .errors import (
    CalibrationError,
    ConfigError,
    FitDegenerateError,
    FormatError,
    InvalidInputError,
    RangeError,
    SingularityError,
)
from .fingerprint import (
    AmplitudeCalibration,
    FingerprintConfig,
    auto_calibrate,
    fingerprint_bands,
    fingerprint_clip,
)
from .multiscale import BAND_NAMES, ScaleBank, process
from .signal_io import (
    RawMeta,
    Recording,
    SynthConfig,
    _atomic_write,
    downsample_mean,
    read_csv,
    read_raw,
    synth,
    write_csv,
    write_matrix_csv,
    write_pgm,
)

__all__ = ["RunConfig", "CalibrationSettings", "load_config", "main", "entry"]


@dataclass(frozen=True)
class CalibrationSettings:
    """How to map samples to pulse volts: explicit range or percentiles."""

    mode: str = "absolute"
    v_min: float = 1.3
    v_max: float = 1.8
    lo_pct: float = 1.0
    hi_pct: float = 99.0
    in_lo: float | None = None
    in_hi: float | None = None

    def __post_init__(self):
        if (self.in_lo is None) != (self.in_hi is None):
            raise ConfigError("calibration needs both in_lo and in_hi or neither")

    def resolve(self, values) -> AmplitudeCalibration:
        if self.in_lo is not None:
            return AmplitudeCalibration(
                in_lo=self.in_lo,
                in_hi=self.in_hi,
                v_min=self.v_min,
                v_max=self.v_max,
                mode=self.mode,
            )
        return auto_calibrate(
            values,
            self.lo_pct,
            self.hi_pct,
            mode=self.mode,
            v_min=self.v_min,
            v_max=self.v_max,
        )


@dataclass(frozen=True)
class RunConfig:
    """Everything one command needs; see README for the JSON layout."""

    input: str | None = None
    format: str = "csv"
    downsample: int = 1
    out: str = "."
    clip: bool = False
    segment_len: int = 15
    window_durations: tuple[float, ...] = (10.0, 1.0, 0.1, 0.01)
    device: MemristorParams = field(default_factory=MemristorParams)
    calibration: CalibrationSettings = field(default_factory=CalibrationSettings)
    detector: EventDetectorConfig = field(
        default_factory=lambda: EventDetectorConfig(enter_threshold=0.18, exit_threshold=0.06)
    )
    alert: AlertConfig = field(default_factory=AlertConfig)
    synth: SynthConfig = field(default_factory=lambda: SynthConfig(duration=60.0))

    def __post_init__(self):
        if self.format not in ("csv", "raw"):
            raise ConfigError(f"format must be 'csv' or 'raw', got {self.format!r}")
        if not isinstance(self.downsample, int) or self.downsample < 1:
            raise ConfigError(f"downsample must be a positive integer, got {self.downsample!r}")
        if not isinstance(self.segment_len, int) or self.segment_len < 1:
            raise ConfigError(f"segment_len must be a positive integer, got {self.segment_len!r}")


_SECTIONS = {
    "device": MemristorParams,
    "calibration": CalibrationSettings,
    "detector": EventDetectorConfig,
    "alert": AlertConfig,
    "synth": SynthConfig,
}
_SCALAR_KEYS = {"input", "format", "downsample", "out", "clip", "segment_len", "window_durations"}


def _build_section(cls, data: dict, where: str):
    allowed = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"unknown {where} config keys: {', '.join(unknown)}")
    try:
        return cls(**data)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad {where} config: {exc}") from exc


def config_from_dict(data: dict) -> RunConfig:
    """Build a RunConfig from parsed JSON, rejecting unknown keys at every level."""
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = sorted(set(data) - _SCALAR_KEYS - set(_SECTIONS))
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    kwargs = {k: data[k] for k in _SCALAR_KEYS if k in data}
    if "window_durations" in kwargs:
        kwargs["window_durations"] = tuple(kwargs["window_durations"])
    for key, cls in _SECTIONS.items():
        if key in data:
            if not isinstance(data[key], dict):
                raise ConfigError(f"config section {key!r} must be a JSON object")
            kwargs[key] = _build_section(cls, data[key], key)
    try:
        return RunConfig(**kwargs)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad config: {exc}") from exc


def load_config(path) -> RunConfig:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path} is not valid JSON: {exc}") from exc
    return config_from_dict(data)


def _load_recording(cfg: RunConfig) -> Recording:
    if cfg.input is None:
        raise ConfigError("no input path given (use --input or the config)")
    if cfg.format == "csv":
        rec = read_csv(cfg.input)
    else:
        rec = read_raw(cfg.input, RawMeta.from_json(str(cfg.input) + ".json"))
    if cfg.downsample > 1:
        rec = downsample_mean(rec, cfg.downsample)
    return rec


def _out_dir(cfg: RunConfig) -> Path:
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _write_table(path: Path, header: list[str], rows) -> None:
    def writer(fh):
        lines = [",".join(header)]
        for row in rows:
            lines.append(",".join(row))
        fh.write(("\n".join(lines) + "\n").encode("utf-8"))

    _atomic_write(path, writer)


def cmd_bands(cfg: RunConfig) -> None:
    """Dump every channel's running averages and band components as CSV."""
    rec = _load_recording(cfg)
    bank = ScaleBank(sample_rate=rec.sample_rate, window_durations=cfg.window_durations)
    out = _out_dir(cfg)
    header = ["time", "f0", "f1", "f2", "f3", "f4", *BAND_NAMES]
    for i, name in enumerate(rec.channel_names):
        frames = process(bank, rec.samples[i])
        rows = (
            [repr(fr.time_index / rec.sample_rate)]
            + [repr(v) for v in (fr.f0, fr.f1, fr.f2, fr.f3, fr.f4)]
            + [repr(v) for v in fr.bands]
            for fr in frames
        )
        path = out / f"bands_{name}.csv"
        _write_table(path, header, rows)
        print(path)


def cmd_fingerprint(cfg: RunConfig) -> None:
    """Write fingerprint matrices (CSV + PGM): per-channel bands, or one clip matrix."""
    rec = _load_recording(cfg)
    out = _out_dir(cfg)
    fp_cfg = FingerprintConfig(params=cfg.device, segment_len=cfg.segment_len)
    if cfg.clip:
        cals = [cfg.calibration.resolve(rec.samples[i]) for i in range(rec.n_channels)]
        matrix = fingerprint_clip(
            fp_cfg, cals, rec.samples, channel_names=rec.channel_names, sample_rate=rec.sample_rate
        )
        write_matrix_csv(matrix, out / "clip_fingerprint.csv")
        write_pgm(matrix, out / "clip_fingerprint.pgm")
        print(out / "clip_fingerprint.csv")
        print(out / "clip_fingerprint.pgm")
        return
    bank = ScaleBank(sample_rate=rec.sample_rate, window_durations=cfg.window_durations)
    for i, name in enumerate(rec.channel_names):
        frames = process(bank, rec.samples[i])
        band_values = np.array([fr.bands for fr in frames])
        cals = [cfg.calibration.resolve(band_values[:, r]) for r in range(len(BAND_NAMES))]
        matrix = fingerprint_bands(fp_cfg, cals, frames, sample_rate=rec.sample_rate)
        write_matrix_csv(matrix, out / f"fingerprint_{name}.csv")
        write_pgm(matrix, out / f"fingerprint_{name}.pgm")
        print(out / f"fingerprint_{name}.csv")
        print(out / f"fingerprint_{name}.pgm")


def cmd_alert(cfg: RunConfig) -> None:
    """Run event detection and the alert level per channel; summarize to stdout."""
    rec = _load_recording(cfg)
    bank = ScaleBank(sample_rate=rec.sample_rate, window_durations=cfg.window_durations)
    out = _out_dir(cfg)
    header = ["time", "f10", "alert_level", "event"]
    for i, name in enumerate(rec.channel_names):
        frames = process(bank, rec.samples[i])
        levels = alert_series(frames, cfg.detector, cfg.alert, sample_rate=rec.sample_rate)
        times = [fr.time_index / rec.sample_rate for fr in frames]
        events = detect_events(
            ((t, fr.f10) for t, fr in zip(times, frames)), cfg.detector
        )
        rows = []
        k = 0
        for (t, level), fr in zip(levels, frames):
            while k < len(events) and events[k].close < t:
                k += 1
            inside = k < len(events) and events[k].onset <= t <= events[k].close
            rows.append([repr(t), repr(fr.f10), repr(level), "1" if inside else "0"])
        path = out / f"alert_{name}.csv"
        _write_table(path, header, rows)
        peak = max(level for _, level in levels)
        print(f"{name}: peak={peak:.6g} events={len(events)} -> {path}")


def cmd_fit(cfg: RunConfig) -> None:
    """Fit device parameters to an erase-observation table (columns x, g, delta_g)."""
    if cfg.input is None:
        raise ConfigError("no input path given (use --input or the config)")
    table = read_csv(cfg.input)
    needed = ("x", "g", "delta_g")
    missing = [c for c in needed if c not in table.channel_names]
    if missing:
        raise InvalidInputError(
            f"observation table lacks columns: {', '.join(missing)}"
        )
    if table.n_samples == 0:
        raise InvalidInputError("observation table has no rows")
    cols = {name: table.samples[table.channel_names.index(name)] for name in needed}
    observations = [
        EraseObservation(x=float(x), g_before=float(g), delta_g=float(dg))
        for x, g, dg in zip(cols["x"], cols["g"], cols["delta_g"])
    ]
    params = fit_params(observations, g_on=cfg.device.g_on, g_floor=cfg.device.g_floor)
    predicted = [
        math.log(params.k) + params.p * o.x + (params.b - params.a * o.x) * math.log(o.g_before)
        for o in observations
    ]
    actual = [math.log(-o.delta_g) for o in observations]
    residual = math.sqrt(
        sum((a - p) ** 2 for a, p in zip(actual, predicted)) / len(observations)
    )
    print(f"a={params.a!r} b={params.b!r} k={params.k!r} p={params.p!r}")
    print(f"log-residual rms={residual:.6g} over {len(observations)} observations")


def cmd_synth(cfg: RunConfig) -> None:
    """Generate a synthetic recording and write it as CSV."""
    rec = synth(cfg.synth)
    out = _out_dir(cfg)
    path = out / "synth.csv"
    write_csv(rec, path)
    print(path)


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # route argparse failures through the exit-code contract instead of exiting
    def error(self, message):
        raise _UsageError(message)


def build_parser() -> _Parser:
    parser = _Parser(prog="memtransform", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON run config")
    common.add_argument("--input", metavar="PATH", help="input recording or table")
    common.add_argument("--format", choices=("csv", "raw"), help="input encoding")
    common.add_argument("--downsample", type=int, metavar="N", help="block-mean factor")
    common.add_argument("--out", metavar="DIR", help="output directory")
    common.add_argument("--seed", type=int, metavar="N", help="synthesis seed")
    common.add_argument(
        "--clip", action="store_true", default=None, help="channels x segments clip matrix"
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, func, text in (
        ("bands", cmd_bands, "dump running averages and band components"),
        ("fingerprint", cmd_fingerprint, "write fingerprint matrices (CSV and PGM)"),
        ("alert", cmd_alert, "detect events and write the alert-level series"),
        ("fit", cmd_fit, "fit device parameters to an observation table"),
        ("synth", cmd_synth, "generate a synthetic recording"),
    ):
        p = sub.add_parser(name, parents=[common], help=text)
        p.set_defaults(func=func)
    return parser


def _resolve_config(args) -> RunConfig:
    cfg = load_config(args.config) if args.config else RunConfig()
    if args.input is not None:
        cfg = replace(cfg, input=args.input)
    if args.format is not None:
        cfg = replace(cfg, format=args.format)
    if args.downsample is not None:
        cfg = replace(cfg, downsample=args.downsample)
    if args.out is not None:
        cfg = replace(cfg, out=args.out)
    if args.clip is not None:
        cfg = replace(cfg, clip=True)
    if args.seed is not None:
        cfg = replace(cfg, synth=replace(cfg.synth, seed=args.seed))
    return cfg


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    try:
        cfg = _resolve_config(args)
        args.func(cfg)
    except (FormatError, InvalidInputError, OSError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except (ConfigError, RangeError, SingularityError, FitDegenerateError, CalibrationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    return 0


def entry() -> None:
    raise SystemExit(main(sys.argv[1:]))


if __name__ == "__main__":
    entry()
