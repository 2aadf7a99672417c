"""PPG postural-movement recognition: synthesis, segmentation, features, classifiers."""

from ._core import (
    GroundTruth,
    Label,
    ModelReport,
    PulseTemplate,
    Recording,
    ScenarioSpec,
    bandpass,
    benchmark,
    chi_squared_scores,
    detect_onsets,
    detrend,
    estimate_period,
    extract_feature_matrix,
    feature_names,
    generate_recording,
    model_presets,
    moving_average_baseline,
    process_recording,
    render_pulse,
    wire_decode,
    wire_encode,
)

__all__ = [
    "GroundTruth",
    "Label",
    "ModelReport",
    "PulseTemplate",
    "Recording",
    "ScenarioSpec",
    "bandpass",
    "benchmark",
    "chi_squared_scores",
    "detect_onsets",
    "detrend",
    "estimate_period",
    "extract_feature_matrix",
    "feature_names",
    "generate_recording",
    "model_presets",
    "moving_average_baseline",
    "process_recording",
    "render_pulse",
    "wire_decode",
    "wire_encode",
]
