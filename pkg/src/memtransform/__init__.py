"""Memristor-transform engine for streaming epileptiform-like recordings.

Converts multichannel signals into multi-scale band components, cheap
conductance-drop fingerprint matrices, and a continuous alert-level signal.
"""

from .alert import (
    AlertConfig,
    AlertState,
    Event,
    EventDetectorConfig,
    alert_series,
    alert_step,
    count_fast_cycles,
    detect_events,
)
from .cli import CalibrationSettings, RunConfig, load_config
from .device import (
    ConductanceState,
    EraseObservation,
    MemristorParams,
    alpha_of,
    apply_pulse,
    apply_pulse_train,
    delta_g,
    fit_params,
    gamma_of,
    total_erase,
)
from .errors import (
    CalibrationError,
    ConfigError,
    FitDegenerateError,
    FormatError,
    InvalidInputError,
    MemtransformError,
    RangeError,
    SingularityError,
)
from .fingerprint import (
    AmplitudeCalibration,
    BandFingerprinter,
    FingerprintConfig,
    FingerprintMatrix,
    auto_calibrate,
    fingerprint_bands,
    fingerprint_clip,
    fingerprint_segment,
    map_amplitude,
)
from .multiscale import (
    BAND_NAMES,
    MultiScaleFrame,
    MultiScaleState,
    ScaleBank,
    new_state,
    process,
)
from .signal_io import (
    RawMeta,
    Recording,
    SynthConfig,
    downsample_mean,
    read_csv,
    read_matrix_csv,
    read_raw,
    synth,
    write_csv,
    write_matrix_csv,
    write_pgm,
)

__version__ = "0.1.0"
