"""Smoke tests for the python bindings."""

import math

import pytest

import ppgmotion as ppg


def test_render_pulse_landmarks():
    tpl = ppg.PulseTemplate()
    tpl.period = 1.0
    tpl.systolic_time_frac = 0.25
    pulse = ppg.render_pulse(tpl, 100.0)
    assert len(pulse) == 101
    assert pulse[0] == 0.0 and pulse[-1] == 0.0
    argmax = max(range(len(pulse)), key=lambda i: pulse[i])
    assert abs(argmax - 25) <= 1
    assert pulse[argmax] == pytest.approx(tpl.systolic_amp)


def test_generate_and_segment_recording():
    spec = ppg.ScenarioSpec.for_class(ppg.Label.STATIONARY, 5)
    spec.duration = 30.0
    spec.noise_sigma = 0.0
    rec, truth = ppg.generate_recording(spec)
    assert rec.sample_rate == 100.0
    filtered = ppg.bandpass(ppg.detrend(rec.value))
    onsets = ppg.detect_onsets(filtered, rec.sample_rate)
    detected = [rec.time_s[i] for i in onsets["indices"]]
    assert len(detected) == len(truth.onset_times)
    for g, d in zip(truth.onset_times, detected):
        assert abs(g - d) <= 0.030


def test_process_recording_poi_ordering():
    spec = ppg.ScenarioSpec.for_class(ppg.Label.SIT_TO_STAND, 9)
    spec.duration = 40.0
    rec, _ = ppg.generate_recording(spec)
    pulses = ppg.process_recording(rec)
    assert len(pulses) > 40
    for p in pulses[:20]:
        fil = p["filtered"]
        assert fil["onset"]["t"] < fil["systolic"]["t"]
        if fil["diastolic"] is not None:
            assert fil["systolic"]["t"] < fil["diastolic"]["t"] < fil["end"]["t"]


def test_feature_matrix_and_ranking():
    spec = ppg.ScenarioSpec.for_class(ppg.Label.LIE_TO_STAND, 3)
    rec, _ = ppg.generate_recording(spec)
    out = ppg.extract_feature_matrix(rec)
    names = out["feature_names"]
    assert len(names) == 21
    assert "dicrotic_magnitude" in names
    assert len(out["rows"]) > 50
    assert all(len(row) == 21 for row in out["rows"])
    labels = [int(l) for l in out["labels"]]
    assert set(labels) <= {0, 1, 2}

    ranking = ppg.chi_squared_scores(out["rows"], labels, names)
    assert len(ranking) == 21
    scores = [s for _, s in ranking]
    assert scores == sorted(scores, reverse=True)


def test_moving_average_and_period():
    assert ppg.moving_average_baseline([0.0, 3.0, 0.0], 3)[1] == pytest.approx(1.0)
    sine = [math.sin(2 * math.pi * 1.2 * i / 100.0) for i in range(1200)]
    lag, low_confidence = ppg.estimate_period(sine, 100.0)
    assert not low_confidence
    assert abs(lag - 83) <= 1


def test_benchmark_on_separable_blobs():
    import random

    rng = random.Random(7)
    rows, labels = [], []
    for c, (cx, cy) in enumerate([(0, 0), (8, 0), (0, 8)]):
        for _ in range(60):
            rows.append([cx + rng.gauss(0, 1), cy + rng.gauss(0, 1)])
            labels.append(c)
    reports = ppg.benchmark(rows, labels, ["lda", "knn_fine"], seed=3)
    assert len(reports) == 2
    for report in reports:
        assert report.ok
        assert report.test_accuracy >= 95.0
        assert len(report.f1_scores()) == 3


def test_wire_codec_round_trip():
    assert ppg.wire_encode(False, 1234) == b"1234,"
    assert ppg.wire_encode(True, 0) == b"2147483648,"
    records, malformed = ppg.wire_decode(b"1234,2147488648,abc,77,")
    assert malformed == 1
    assert records[0] == (False, 1234)
    assert records[1] == (True, 5000)
    assert records[2] == (False, 77)
