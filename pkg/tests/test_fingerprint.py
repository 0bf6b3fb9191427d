"""Fingerprint tests: amplitude mapping, clip matrices, streaming bands."""

import numpy as np
import pytest

from memtransform import (
    AmplitudeCalibration,
    BandFingerprinter,
    CalibrationError,
    FingerprintConfig,
    FingerprintMatrix,
    InvalidInputError,
    MemristorParams,
    ScaleBank,
    auto_calibrate,
    fingerprint_bands,
    fingerprint_clip,
    fingerprint_segment,
    map_amplitude,
    process,
)

CFG = FingerprintConfig()
CAL = AmplitudeCalibration(in_lo=0.0, in_hi=2.0)

# frozen: 15 identical 1.3 V pulses from g_on = 10 end at 9.998493194684283
MIN_DROP = 10.0 - 9.998493194684283
# frozen: 15 identical 1.8 V pulses from g_on = 10 end at 7.242604721409614
MAX_DROP = 10.0 - 7.242604721409614


def test_map_amplitude_affine_and_clamp():
    assert map_amplitude(CAL, 0.0) == 1.3
    assert map_amplitude(CAL, 2.0) == 1.8
    assert map_amplitude(CAL, 1.0) == pytest.approx(1.55)
    assert map_amplitude(CAL, 5.0) == 1.8
    assert map_amplitude(CAL, -1.0) == pytest.approx(1.55)  # rectified


def test_map_amplitude_signed_mode():
    cal = AmplitudeCalibration(in_lo=-1.0, in_hi=1.0, mode="signed")
    assert map_amplitude(cal, -1.0) == 1.3
    assert map_amplitude(cal, 0.0) == pytest.approx(1.55)
    assert map_amplitude(cal, -5.0) == 1.3
    assert map_amplitude(cal, 5.0) == 1.8


def test_map_amplitude_below_range_clamps_low():
    cal = AmplitudeCalibration(in_lo=0.5, in_hi=2.0)
    assert map_amplitude(cal, 0.1) == 1.3


def test_calibration_validation():
    with pytest.raises(InvalidInputError):
        AmplitudeCalibration(in_lo=1.0, in_hi=1.0)
    with pytest.raises(InvalidInputError):
        AmplitudeCalibration(in_lo=0.0, in_hi=1.0, v_min=1.8, v_max=1.3)
    with pytest.raises(InvalidInputError):
        AmplitudeCalibration(in_lo=0.0, in_hi=1.0, mode="rms")
    with pytest.raises(InvalidInputError):
        map_amplitude(CAL, float("nan"))


def test_auto_calibrate_matches_percentiles():
    rng = np.random.default_rng(31)
    signal = rng.normal(size=4000)
    cal = auto_calibrate(signal, 5.0, 95.0)
    lo, hi = np.percentile(np.abs(signal), [5.0, 95.0])
    assert cal.in_lo == float(lo)
    assert cal.in_hi == float(hi)
    assert cal.mode == "absolute"


def test_auto_calibrate_signed():
    rng = np.random.default_rng(32)
    signal = rng.normal(size=4000)
    cal = auto_calibrate(signal, 1.0, 99.0, mode="signed")
    lo, hi = np.percentile(signal, [1.0, 99.0])
    assert (cal.in_lo, cal.in_hi) == (float(lo), float(hi))


def test_auto_calibrate_errors():
    with pytest.raises(InvalidInputError):
        auto_calibrate(np.zeros(99))
    with pytest.raises(CalibrationError):
        auto_calibrate(np.full(500, 0.7))
    with pytest.raises(InvalidInputError):
        auto_calibrate(np.zeros(500), 99.0, 1.0)


def test_segment_constant_minimum_amplitude():
    drop = fingerprint_segment(CFG, CAL, np.zeros(15))
    assert drop == pytest.approx(MIN_DROP, rel=1e-12)


def test_segment_constant_maximum_amplitude():
    drop = fingerprint_segment(CFG, CAL, np.full(15, 9.0))  # clamps to 1.8 V
    assert drop == pytest.approx(MAX_DROP, rel=1e-12)


def test_segment_length_enforced():
    with pytest.raises(InvalidInputError):
        fingerprint_segment(CFG, CAL, np.zeros(14))
    with pytest.raises(InvalidInputError):
        fingerprint_segment(CFG, CAL, np.zeros(16))


def test_clip_shape_16x64():
    rng = np.random.default_rng(33)
    clip = rng.normal(size=(16, 960))
    matrix = fingerprint_clip(CFG, CAL, clip)
    assert matrix.values.shape == (16, 64)
    assert matrix.n_segments == 64
    assert np.all(matrix.values >= 0.0)
    assert np.all(matrix.values <= CFG.params.g_on)
    assert matrix.row_labels == tuple(f"ch{i}" for i in range(16))


def test_clip_floor_rule():
    rng = np.random.default_rng(34)
    matrix = fingerprint_clip(CFG, CAL, rng.normal(size=(2, 159)))
    assert matrix.values.shape == (2, 10)  # 159 // 15


def test_clip_segment_duration():
    rng = np.random.default_rng(35)
    matrix = fingerprint_clip(CFG, CAL, rng.normal(size=(1, 30)), sample_rate=400.0)
    assert matrix.segment_duration == pytest.approx(15 / 400.0)


def test_clip_reset_independence():
    # same segment data, different neighbors: identical cell values
    rng = np.random.default_rng(36)
    seg = rng.normal(size=15)
    a = np.concatenate([rng.normal(size=15), seg])
    b = np.concatenate([rng.normal(size=15), seg])
    ma = fingerprint_clip(CFG, CAL, a[np.newaxis, :])
    mb = fingerprint_clip(CFG, CAL, b[np.newaxis, :])
    assert ma.values[0, 1] == mb.values[0, 1]


def test_clip_per_channel_calibrations():
    rng = np.random.default_rng(37)
    clip = rng.normal(size=(2, 45))
    hot = AmplitudeCalibration(in_lo=0.0, in_hi=0.5)
    cold = AmplitudeCalibration(in_lo=0.0, in_hi=50.0)
    matrix = fingerprint_clip(CFG, [hot, cold], clip)
    # the hot calibration saturates most samples at 1.8 V, the cold one barely moves
    assert np.all(matrix.values[0] > matrix.values[1])
    with pytest.raises(InvalidInputError):
        fingerprint_clip(CFG, [hot], clip)


def test_clip_errors():
    with pytest.raises(InvalidInputError):
        fingerprint_clip(CFG, CAL, np.zeros((2, 14)))
    with pytest.raises(InvalidInputError):
        fingerprint_clip(CFG, CAL, np.zeros((2, 30)), channel_names=["only_one"])


def test_clip_monotone_response():
    # pointwise larger magnitudes never shrink the drop
    rng = np.random.default_rng(38)
    base = np.abs(rng.normal(size=(1, 45)))
    bigger = base * 1.5
    cal = AmplitudeCalibration(in_lo=0.0, in_hi=10.0)
    m_base = fingerprint_clip(CFG, cal, base)
    m_big = fingerprint_clip(CFG, cal, bigger)
    assert np.all(m_big.values >= m_base.values)


def test_range_law_random_property():
    rng = np.random.default_rng(39)
    params = MemristorParams(g_on=4.0, g_floor=1.0)
    cfg = FingerprintConfig(params=params, segment_len=5)
    for _ in range(20):
        clip = rng.normal(scale=rng.uniform(0.1, 10.0), size=(3, 25))
        matrix = fingerprint_clip(cfg, CAL, clip)
        assert np.all(matrix.values >= 0.0)
        assert np.all(matrix.values <= params.g_on - params.g_floor)


def test_band_fingerprint_rows_and_shape():
    rng = np.random.default_rng(40)
    frames = process(ScaleBank(), rng.normal(size=150))
    matrix = fingerprint_bands(CFG, CAL, frames)
    assert matrix.row_labels == ("f10", "f21", "f32", "f43")
    assert matrix.values.shape == (4, 10)


def test_streaming_equals_batch_bitwise():
    rng = np.random.default_rng(41)
    frames = process(ScaleBank(), rng.normal(size=310))
    streamer = BandFingerprinter(CFG, CAL)
    columns = []
    for fr in frames:
        col = streamer.push(fr)
        if col is not None:
            columns.append(col)
    batch = fingerprint_bands(CFG, CAL, frames)
    assert len(columns) == batch.n_segments == 20
    assert np.array_equal(np.column_stack(columns), batch.values)
    assert np.array_equal(streamer.matrix().values, batch.values)


def test_streaming_column_cadence():
    rng = np.random.default_rng(42)
    frames = process(ScaleBank(), rng.normal(size=45))
    streamer = BandFingerprinter(CFG, CAL)
    emitted = [streamer.push(fr) is not None for fr in frames]
    assert [i for i, e in enumerate(emitted) if e] == [14, 29, 44]


def test_constant_signal_band_fingerprint_is_min_drop():
    # constant input: bands are all zero, mapping to the 1.3 V floor
    frames = process(ScaleBank(), np.full(60, 0.5))
    matrix = fingerprint_bands(CFG, CAL, frames)
    assert matrix.values.shape == (4, 4)
    assert np.allclose(matrix.values, MIN_DROP, rtol=1e-12, atol=0.0)


def test_fingerprint_bands_errors():
    with pytest.raises(InvalidInputError):
        fingerprint_bands(CFG, CAL, [])
    frames = process(ScaleBank(), np.zeros(10))
    with pytest.raises(InvalidInputError):
        fingerprint_bands(CFG, CAL, frames)


def test_matrix_validation():
    with pytest.raises(InvalidInputError):
        FingerprintMatrix(row_labels=("a", "b"), values=np.zeros((3, 4)), segment_duration=1.0)
