"""Idealized memristor erase dynamics.

A device starts in a high-conductance ON state and each erase pulse of
amplitude ``x`` (volts) decreases its conductance ``g`` by

    delta_g = alpha(x) * g ** gamma(x)

with amplitude dependence

    gamma(x) = -A*x + B
    alpha(x) = -K * exp(P*x)

``A``, ``B``, ``K``, ``P`` are device constants obtained by fitting erase
curves; the defaults below come from such a fit.  ``alpha`` is strictly
negative, so conductance can only move down, and the drop magnitude grows
with amplitude as long as ``g < exp(P/A)`` (about 100 in normalized units
with the default constants).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FitDegenerateError, InvalidInputError, RangeError, SingularityError

__all__ = [
    "MemristorParams",
    "ConductanceState",
    "EraseObservation",
    "gamma_of",
    "alpha_of",
    "delta_g",
    "apply_pulse",
    "apply_pulse_train",
    "total_erase",
    "fit_params",
]


@dataclass(frozen=True)
class MemristorParams:
    """Erase-model constants plus the initial and floor conductance.

    a: per-volt slope of the conductance exponent (> 0)
    b: dimensionless intercept of the exponent
    k: magnitude constant of the pulse coefficient (> 0, normalized units)
    p: per-volt exponent constant of the pulse coefficient (> 0)
    g_on: conductance the device is (re)set to before an erase train
    g_floor: clamping floor; conductance never drops below it
    """

    a: float = 7.0
    b: float = 16.1
    k: float = 6.31e-30
    p: float = 32.24
    g_on: float = 10.0
    g_floor: float = 0.0

    def __post_init__(self):
        for name in ("a", "b", "k", "p", "g_on", "g_floor"):
            if not math.isfinite(getattr(self, name)):
                raise InvalidInputError(f"parameter {name!r} must be finite")
        if self.a <= 0 or self.k <= 0 or self.p <= 0:
            raise InvalidInputError("a, k and p must all be positive")
        if self.g_floor < 0 or self.g_on <= self.g_floor:
            raise InvalidInputError("require g_on > g_floor >= 0")


@dataclass
class ConductanceState:
    """Mutable conductance of a single device."""

    g: float

    def __post_init__(self):
        if not math.isfinite(self.g) or self.g < 0:
            raise InvalidInputError("conductance must be finite and non-negative")


@dataclass(frozen=True)
class EraseObservation:
    """One measured erase step: amplitude, conductance before, observed drop."""

    x: float
    g_before: float
    delta_g: float

    def __post_init__(self):
        if not (math.isfinite(self.x) and math.isfinite(self.g_before) and math.isfinite(self.delta_g)):
            raise InvalidInputError("observation fields must be finite")
        if self.g_before <= 0:
            raise InvalidInputError("g_before must be positive")
        if self.delta_g > 0:
            raise InvalidInputError("delta_g must be non-positive for an erase step")


def _check_finite_amplitude(x: float) -> float:
    x = float(x)
    if not math.isfinite(x):
        raise InvalidInputError(f"pulse amplitude must be finite, got {x!r}")
    return x


def gamma_of(params: MemristorParams, x: float) -> float:
    """Conductance exponent at pulse amplitude ``x`` volts."""
    x = _check_finite_amplitude(x)
    return -params.a * x + params.b


def alpha_of(params: MemristorParams, x: float) -> float:
    """Pulse coefficient at amplitude ``x`` volts; strictly negative."""
    x = _check_finite_amplitude(x)
    try:
        return -params.k * math.exp(params.p * x)
    except OverflowError as exc:
        raise RangeError(f"alpha overflows at amplitude {x} V") from exc


def delta_g(params: MemristorParams, g: float, x: float) -> float:
    """Conductance change of one erase pulse of amplitude ``x`` at conductance ``g``."""
    g = float(g)
    if not math.isfinite(g) or g < 0:
        raise InvalidInputError(f"conductance must be finite and non-negative, got {g!r}")
    gam = gamma_of(params, x)
    if g == 0.0 and gam <= 0.0:
        raise SingularityError(
            f"g**gamma undefined at g=0 with gamma={gam} <= 0 (amplitude {x} V)"
        )
    try:
        return alpha_of(params, x) * g**gam
    except OverflowError as exc:
        raise RangeError(f"g**gamma overflows at g={g}, amplitude {x} V") from exc


def apply_pulse(state: ConductanceState, params: MemristorParams, x: float) -> ConductanceState:
    """Apply one erase pulse, clamping at the floor.  Mutates and returns ``state``."""
    state.g = max(state.g + delta_g(params, state.g, x), params.g_floor)
    return state


def apply_pulse_train(
    g0: float, params: MemristorParams, xs: Sequence[float]
) -> list[float]:
    """Conductance trajectory from ``g0`` through the pulses in ``xs``.

    Returns ``len(xs) + 1`` values starting with ``g0``; monotone nonincreasing.
    """
    g0 = float(g0)
    if not math.isfinite(g0) or g0 < params.g_floor:
        raise InvalidInputError(f"g0 must be finite and >= g_floor, got {g0!r}")
    state = ConductanceState(g0)
    trajectory = [g0]
    for x in xs:
        apply_pulse(state, params, x)
        trajectory.append(state.g)
    return trajectory


def total_erase(params: MemristorParams, xs: Sequence[float]) -> float:
    """Total conductance drop of a pulse train on a device reset to ``g_on``."""
    trajectory = apply_pulse_train(params.g_on, params, xs)
    return params.g_on - trajectory[-1]


def fit_params(
    observations: Sequence[EraseObservation],
    *,
    g_on: float = 10.0,
    g_floor: float = 0.0,
) -> MemristorParams:
    """Recover (a, b, k, p) from erase observations by log-space least squares.

    The model linearizes as

        log|delta_g| = log k + p*x + b*log g - a*x*log g

    which is ordinary least squares over the features (1, x, log g, x*log g).
    Noise-free data generated from the model is recovered exactly (to solver
    tolerance).  ``g_on``/``g_floor`` are passed through to the result; they
    are not identifiable from erase steps.
    """
    obs = list(observations)
    if len(obs) < 4:
        raise FitDegenerateError(f"need at least 4 observations, got {len(obs)}")
    for o in obs:
        if o.delta_g >= 0:
            raise InvalidInputError("all observed drops must be strictly negative")

    x = np.array([o.x for o in obs], dtype=float)
    ln_g = np.log([o.g_before for o in obs])
    y = np.log([-o.delta_g for o in obs])
    design = np.column_stack([np.ones_like(x), x, ln_g, x * ln_g])

    coef, _, rank, _ = np.linalg.lstsq(design, y, rcond=None)
    if rank < 4:
        raise FitDegenerateError(
            "design matrix is rank-deficient; observations must vary in both "
            "amplitude and conductance"
        )

    ln_k, p, b, neg_a = (float(c) for c in coef)
    a = -neg_a
    if a <= 0 or p <= 0:
        raise FitDegenerateError(
            f"fitted constants violate the model (a={a:.6g}, p={p:.6g} must be positive)"
        )
    return MemristorParams(a=a, b=b, k=math.exp(ln_k), p=p, g_on=g_on, g_floor=g_floor)
