"""Device model tests: erase law, pulse trains, and parameter fitting.

Expected numbers marked "frozen" were computed with a standalone
step-by-step evaluation of the erase law using plain math.exp/pow,
independent of this package.
"""

import math

import numpy as np
import pytest

from memtransform import (
    ConductanceState,
    EraseObservation,
    FitDegenerateError,
    InvalidInputError,
    MemristorParams,
    RangeError,
    SingularityError,
    alpha_of,
    apply_pulse,
    apply_pulse_train,
    delta_g,
    fit_params,
    gamma_of,
    total_erase,
)

PARAMS = MemristorParams()


def test_gamma_point_values():
    # frozen: -7*x + 16.1
    assert gamma_of(PARAMS, 1.3) == 7.000000000000002
    assert gamma_of(PARAMS, 2.3) == 3.552713678800501e-15
    assert gamma_of(PARAMS, 0.0) == 16.1


def test_alpha_point_values():
    # frozen: -6.31e-30 * exp(32.24*x)
    assert alpha_of(PARAMS, 0.0) == -6.31e-30
    assert alpha_of(PARAMS, 1.3) == -1.0050315254904426e-11
    assert alpha_of(PARAMS, 1.8) == -0.0001006947279866407


def test_alpha_always_negative():
    rng = np.random.default_rng(10)
    for x in rng.uniform(-2.0, 3.0, size=200):
        assert alpha_of(PARAMS, float(x)) < 0.0


def test_alpha_overflow_is_range_error():
    with pytest.raises(RangeError):
        alpha_of(PARAMS, 1e6)


def test_delta_g_point_values():
    # frozen one-step drops from g = 10
    assert delta_g(PARAMS, 10.0, 1.3) == -0.00010050315254904467
    assert delta_g(PARAMS, 10.0, 1.8) == -0.3184246888088869


def test_delta_g_zero_conductance():
    # gamma > 0 at x = 1.3: 0^positive = 0, no drop left
    assert delta_g(PARAMS, 0.0, 1.3) == 0.0
    # gamma <= 0 needs x >= 2.3: the law diverges at g = 0
    with pytest.raises(SingularityError):
        delta_g(PARAMS, 0.0, 2.4)


def test_monotone_erase_property():
    rng = np.random.default_rng(11)
    for _ in range(300):
        g = float(rng.uniform(0.01, 50.0))
        x = float(rng.uniform(0.5, 2.0))
        state = ConductanceState(g=g)
        apply_pulse(state, PARAMS, x)
        assert state.g <= g
        assert state.g >= PARAMS.g_floor


def test_amplitude_monotonicity_below_crossover():
    # |delta_g| strictly increasing in x while g < e^(P/A) ~ 100.05
    rng = np.random.default_rng(12)
    for _ in range(300):
        g = float(rng.uniform(0.05, 99.0))
        x1 = float(rng.uniform(0.8, 1.79))
        x2 = float(rng.uniform(x1 + 1e-3, 1.8))
        assert -delta_g(PARAMS, g, x2) > -delta_g(PARAMS, g, x1)


def test_soft_bound_vanishing_drop():
    # with gamma(x) > 0 the drop vanishes as g -> 0+
    drops = [-delta_g(PARAMS, g, 1.5) for g in (1e-2, 1e-4, 1e-8)]
    assert drops[0] > drops[1] > drops[2]
    assert drops[2] < 1e-50


def test_floor_clamp():
    # at x = 2.3 gamma ~ 0, so the drop is ~1e3 regardless of g: overshoot
    params = MemristorParams(g_floor=0.5)
    state = ConductanceState(g=10.0)
    apply_pulse(state, params, 2.3)
    assert state.g == 0.5


def test_pulse_train_trajectory_oracle():
    # literal one-step re-evaluation, written out with plain math calls
    for x in (1.3, 1.4, 1.5, 1.6, 1.7, 1.8):
        traj = apply_pulse_train(10.0, PARAMS, [x] * 15)
        assert len(traj) == 16
        g = 10.0
        for k in range(15):
            g = max(g + (-6.31e-30 * math.exp(32.24 * x)) * g ** (-7.0 * x + 16.1), 0.0)
            assert traj[k + 1] == pytest.approx(g, rel=1e-12)


def test_pulse_train_frozen_finals():
    assert apply_pulse_train(10.0, PARAMS, [1.3] * 15)[-1] == 9.998493194684283
    assert apply_pulse_train(10.0, PARAMS, [1.55] * 15)[-1] == 9.916865670062798
    assert apply_pulse_train(10.0, PARAMS, [1.8] * 15)[-1] == 7.242604721409614


def test_total_erase_matches_train():
    xs = [1.3, 1.5, 1.8, 1.4, 1.6] * 3
    traj = apply_pulse_train(PARAMS.g_on, PARAMS, xs)
    assert total_erase(PARAMS, xs) == PARAMS.g_on - traj[-1]


def _make_table(params, rng, n_g=10, noise=0.0):
    observations = []
    for x in np.linspace(1.3, 1.8, 6):
        for g in np.linspace(0.5, 20.0, n_g):
            dg = -params.k * math.exp(params.p * x) * g ** (-params.a * x + params.b)
            if noise:
                dg *= 1.0 + noise * rng.standard_normal()
            observations.append(EraseObservation(x=float(x), g_before=float(g), delta_g=float(dg)))
    return observations


def test_fit_round_trip_noise_free():
    rng = np.random.default_rng(13)
    for _ in range(5):
        true = MemristorParams(
            a=float(rng.uniform(3.0, 9.0)),
            b=float(rng.uniform(10.0, 20.0)),
            k=float(np.exp(rng.uniform(-70.0, -40.0))),
            p=float(rng.uniform(20.0, 40.0)),
        )
        fitted = fit_params(_make_table(true, rng))
        assert fitted.a == pytest.approx(true.a, rel=1e-6)
        assert fitted.b == pytest.approx(true.b, rel=1e-6)
        assert fitted.p == pytest.approx(true.p, rel=1e-6)
        assert math.log(fitted.k) == pytest.approx(math.log(true.k), rel=1e-6)


def test_fit_with_multiplicative_noise():
    rng = np.random.default_rng(14)
    fitted = fit_params(_make_table(PARAMS, rng, noise=0.01))
    assert fitted.a == pytest.approx(PARAMS.a, rel=0.05)
    assert fitted.b == pytest.approx(PARAMS.b, rel=0.05)
    assert fitted.p == pytest.approx(PARAMS.p, rel=0.05)
    assert math.log(fitted.k) == pytest.approx(math.log(PARAMS.k), rel=0.05)


def test_fit_single_amplitude_degenerate():
    obs = [
        EraseObservation(x=1.5, g_before=float(g), delta_g=-1e-6 * g)
        for g in np.linspace(1.0, 10.0, 12)
    ]
    with pytest.raises(FitDegenerateError):
        fit_params(obs)


def test_fit_single_conductance_degenerate():
    obs = [
        EraseObservation(x=float(x), g_before=5.0, delta_g=-1e-6 * x)
        for x in np.linspace(1.3, 1.8, 12)
    ]
    with pytest.raises(FitDegenerateError):
        fit_params(obs)


def test_observation_validation():
    with pytest.raises(InvalidInputError):
        EraseObservation(x=1.5, g_before=0.0, delta_g=-1e-6)
    with pytest.raises(InvalidInputError):
        EraseObservation(x=1.5, g_before=1.0, delta_g=1e-6)


def test_zero_delta_g_rejected_by_fit():
    obs = [
        EraseObservation(x=float(x), g_before=float(g), delta_g=0.0)
        for x in (1.3, 1.5)
        for g in (1.0, 2.0)
    ]
    with pytest.raises(InvalidInputError):
        fit_params(obs)


def test_params_validation():
    with pytest.raises(InvalidInputError):
        MemristorParams(a=-1.0)
    with pytest.raises(InvalidInputError):
        MemristorParams(k=0.0)
    with pytest.raises(InvalidInputError):
        MemristorParams(g_on=0.0, g_floor=0.5)
