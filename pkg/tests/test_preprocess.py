import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ecgforge.preprocess import (
    HeartbeatSegment,
    ThresholdConfig,
    adaptive_threshold,
    denoise,
    detect_r_peaks,
    normalize,
    segment_beats,
)
from ecgforge.signals import (
    EcgSignal,
    LeadId,
    SyntheticBeatParams,
    snr_db,
    synth_patient,
    white_noise_sigma_for_snr,
)


class TestAdaptiveThreshold:
    def test_hand_case(self):
        # r=2, level 1: window taus are 2 and 4.5, everything gets zeroed
        out = adaptive_threshold(np.array([1.0, -1.0, 0.5, 4.0]), 1,
                                 ThresholdConfig(window_r=2))
        np.testing.assert_array_equal(out, np.zeros(4))

    def test_hand_case_independent_scalar_recheck(self):
        w = [1.0, -1.0, 0.5, 4.0]
        r, level = 2, 1
        expected = []
        for start in range(0, len(w), r):
            block = w[start:start + r]
            tau = sum(abs(v) for v in block) / len(block) * 2 ** level
            expected.extend(v if abs(v) >= tau else 0.0 for v in block)
        out = adaptive_threshold(np.array(w), level, ThresholdConfig(window_r=r))
        np.testing.assert_array_equal(out, expected)

    def test_all_zero(self):
        out = adaptive_threshold(np.zeros(64), 2)
        np.testing.assert_array_equal(out, np.zeros(64))

    def test_dominant_spike_survives(self):
        w = np.zeros(32)
        w[10] = 5.0
        out = adaptive_threshold(w, 3, ThresholdConfig(window_r=32))
        # tau = (5/32) * 8 = 1.25 < 5, the spike stays
        assert out[10] == 5.0
        assert np.count_nonzero(out) == 1

    def test_tail_window_uses_actual_length(self):
        # tail is the single value 6: tau = 6 * 2 = 12, so it must be zeroed;
        # averaging over the padded window length 2 would wrongly keep it
        w = np.array([4.0, 0.0, 0.0, 0.0, 6.0])
        out = adaptive_threshold(w, 1, ThresholdConfig(window_r=2))
        np.testing.assert_array_equal(out, [4.0, 0.0, 0.0, 0.0, 0.0])

    @given(st.sampled_from([0.25, 0.5, 2.0, 4.0, 1024.0]), st.integers(1, 4))
    @settings(max_examples=20, deadline=None)
    def test_power_of_two_scaling_is_exact(self, c, level):
        rng = np.random.default_rng(99)
        w = rng.standard_normal(100)
        base = adaptive_threshold(w, level)
        scaled = adaptive_threshold(c * w, level)
        np.testing.assert_array_equal(scaled, c * base)

    def test_bad_level_rejected(self):
        with pytest.raises(ValueError):
            adaptive_threshold(np.zeros(4), 0)
        with pytest.raises(ValueError):
            ThresholdConfig(window_r=0)


class TestNormalize:
    def test_affine_map(self):
        np.testing.assert_allclose(normalize(np.array([2.0, 4.0, 6.0])),
                                   [0.0, 0.5, 1.0])

    def test_constant_maps_to_zeros(self):
        np.testing.assert_array_equal(normalize(np.array([3.0, 3.0, 3.0])),
                                      np.zeros(3))

    @given(st.lists(st.floats(-1e6, 1e6), min_size=2, max_size=50))
    @settings(max_examples=100, deadline=None)
    def test_range_and_idempotence(self, values):
        x = np.array(values)
        y = normalize(x)
        assert y.min() >= 0.0 and y.max() <= 1.0
        if x.max() > x.min():
            assert y.min() == 0.0 and y.max() == 1.0
        np.testing.assert_array_equal(normalize(y), y)

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            normalize(np.array([]))


def _noisy_patient(seed, snr_target=10.0):
    params = SyntheticBeatParams(heart_rate_bpm=60.0 + (seed % 30), rng_seed=seed)
    clean, peaks = synth_patient(params, patient_id=f"p{seed}")
    rng = np.random.default_rng(seed + 10_000)
    noisy = {}
    for lead, s in clean.items():
        sigma = white_noise_sigma_for_snr(s.samples, snr_target)
        noisy[lead] = s.with_samples(s.samples + sigma * rng.standard_normal(len(s.samples)))
    return clean, noisy, peaks


class TestDenoise:
    def test_near_identity_on_clean_signal(self, clean_patient):
        signals, _ = clean_patient
        for lead in (LeadId.II, LeadId.V1):
            s = signals[lead]
            out = denoise(s)
            assert len(out.samples) == len(s.samples)
            rel = np.linalg.norm(out.samples - s.samples) / np.linalg.norm(s.samples)
            assert rel < 0.05

    def test_improves_snr_at_10db(self):
        clean, noisy, _ = _noisy_patient(3)
        improved = 0
        for lead in clean:
            out = denoise(noisy[lead])
            before = snr_db(clean[lead].samples, noisy[lead].samples)
            after = snr_db(clean[lead].samples, out.samples)
            improved += after > before
        assert improved >= 11  # out of 12 leads

    def test_preserves_r_peak_count(self):
        clean, noisy, peaks = _noisy_patient(5)
        for lead in (LeadId.I, LeadId.aVR, LeadId.V4):
            out = denoise(noisy[lead])
            normalized = out.with_samples(normalize(out.samples))
            detected = detect_r_peaks(normalized)
            assert len(detected) == len(peaks)

    def test_too_short_rejected_with_minimum(self):
        s = EcgSignal(LeadId.I, np.zeros(100), 500.0)
        with pytest.raises(ValueError, match="128"):
            denoise(s)


class TestDetectRPeaks:
    def test_matches_ground_truth_on_clean_corpus(self):
        for seed in range(4):
            params = SyntheticBeatParams(heart_rate_bpm=55.0 + 12 * seed, rng_seed=seed)
            signals, truth = synth_patient(params, patient_id=f"p{seed}")
            for lead in (LeadId.II, LeadId.aVR, LeadId.V6):
                s = signals[lead]
                detected = detect_r_peaks(s.with_samples(normalize(s.samples)))
                assert len(detected) == len(truth)
                assert np.max(np.abs(detected - truth)) <= 3

    def test_flat_zero_gives_empty(self):
        s = EcgSignal(LeadId.I, np.zeros(5000), 500.0)
        assert len(detect_r_peaks(s)) == 0

    def test_sixty_bpm_fifteen_seconds_gives_15(self, clean_patient):
        signals, _ = clean_patient
        s = signals[LeadId.II]
        detected = detect_r_peaks(s.with_samples(normalize(s.samples)))
        assert len(detected) == 15

    def test_sorted_ascending(self, clean_patient):
        signals, _ = clean_patient
        s = signals[LeadId.V1]
        detected = detect_r_peaks(s.with_samples(normalize(s.samples)))
        assert np.all(np.diff(detected) > 0)


class TestSegmentBeats:
    def _normalized(self, clean_patient, lead=LeadId.II):
        signals, peaks = clean_patient
        s = signals[lead]
        return s.with_samples(normalize(s.samples)), peaks

    def test_fifteen_peaks_give_fourteen_segments(self, clean_patient):
        s, peaks = self._normalized(clean_patient)
        segments = segment_beats(s, peaks, target_len=600)
        assert len(segments) == 14

    def test_uniform_interval_padding(self, clean_patient):
        s, peaks = self._normalized(clean_patient)
        segments = segment_beats(s, peaks, target_len=600)
        for seg in segments:
            assert seg.valid_len == 500
            assert np.all(seg.samples[500:] == 0.0)
            assert len(seg.samples) == 600

    def test_reconstruction_oracle(self, clean_patient):
        s, peaks = self._normalized(clean_patient)
        segments = segment_beats(s, peaks, target_len=600)
        joined = np.concatenate([seg.samples[:seg.valid_len] for seg in segments])
        original = s.samples[peaks[0]:peaks[-1]].astype(np.float32)
        np.testing.assert_array_equal(joined, original)

    def test_interval_exceeding_target_rejected(self, clean_patient):
        s, peaks = self._normalized(clean_patient)
        with pytest.raises(ValueError, match="recompute"):
            segment_beats(s, peaks, target_len=400)

    def test_decimation_stride(self, clean_patient):
        s, peaks = self._normalized(clean_patient)
        segments = segment_beats(s, peaks, target_len=150, stride=4)
        for seg in segments:
            assert seg.valid_len == 125
            np.testing.assert_array_equal(
                seg.samples[:seg.valid_len],
                s.samples[seg.r_peak_offset:seg.r_peak_offset + 500:4].astype(np.float32))

    def test_padding_invariant_enforced(self):
        with pytest.raises(ValueError, match="padding"):
            HeartbeatSegment("p", LeadId.I, 0, np.array([0.5, 0.5, 0.1]), 2, 0)
        with pytest.raises(ValueError, match="0, 1"):
            HeartbeatSegment("p", LeadId.I, 0, np.array([0.5, 1.5, 0.0]), 2, 0)
