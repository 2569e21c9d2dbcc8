import numpy as np
import pytest

from ecgforge.signals import (
    ALL_LEADS,
    EcgSignal,
    LeadId,
    SyntheticBeatParams,
    read_signal,
    read_signal_csv,
    signal_stats,
    snr_db,
    synth_patient,
    white_noise_sigma_for_snr,
    write_signal,
    write_signal_csv,
)


class TestLeadId:
    def test_twelve_distinct_leads(self):
        assert len(ALL_LEADS) == 12
        assert len({l.code for l in ALL_LEADS}) == 12

    def test_precordial_flag(self):
        precordial = {l for l in ALL_LEADS if l.is_precordial}
        assert precordial == {LeadId.V1, LeadId.V2, LeadId.V3,
                              LeadId.V4, LeadId.V5, LeadId.V6}

    def test_parse_and_codes(self):
        assert LeadId.parse("avr") is LeadId.aVR
        assert LeadId.from_code(0) is LeadId.I
        with pytest.raises(ValueError):
            LeadId.parse("V7")
        with pytest.raises(ValueError):
            LeadId.from_code(12)


class TestSynthPatient:
    def test_sixty_bpm_fifteen_seconds(self, clean_patient):
        signals, peaks = clean_patient
        assert len(signals) == 12
        for s in signals.values():
            assert len(s.samples) == 7500
        assert len(peaks) == 15

    def test_determinism(self):
        params = SyntheticBeatParams(heart_rate_bpm=72.0, noise_amplitude=0.05,
                                     rng_seed=7)
        a, peaks_a = synth_patient(params)
        b, peaks_b = synth_patient(params)
        assert np.array_equal(peaks_a, peaks_b)
        for lead in ALL_LEADS:
            assert np.array_equal(a[lead].samples, b[lead].samples)

    def test_zero_noise_signal_is_pure_template_sum(self, clean_patient):
        # with noise and wander off the signal is strictly periodic at the
        # beat period, which only the deterministic template sum produces
        # (tolerance covers the 7-sigma bump truncation, ~1e-11 mV)
        signals, _ = clean_patient
        rr = 500  # samples at 60 bpm, 500 Hz
        for lead in (LeadId.II, LeadId.aVR, LeadId.V3):
            x = signals[lead].samples
            np.testing.assert_allclose(x[rr:-rr], x[2 * rr:], rtol=0, atol=1e-9)

    def test_one_dominant_peak_per_beat(self, clean_patient):
        signals, peaks = clean_patient
        for lead, s in signals.items():
            x = s.samples if lead is not LeadId.aVR else -s.samples
            r_amp = x[peaks].mean()
            for p in peaks:
                window = x[p - 250:p + 250]
                big = window > 0.8 * r_amp
                # exactly one contiguous run of samples above 0.8 R
                runs = np.diff(big.astype(int))
                assert (runs == 1).sum() == 1

    def test_r_peaks_aligned_across_leads(self, clean_patient):
        signals, peaks = clean_patient
        for lead, s in signals.items():
            x = s.samples if lead is not LeadId.aVR else -s.samples
            for p in peaks:
                local = p - 5 + np.argmax(x[p - 5:p + 6])
                assert abs(local - p) <= 1

    def test_rejects_bad_inputs(self):
        with pytest.raises(ValueError):
            synth_patient(SyntheticBeatParams(), duration_s=0.0)
        with pytest.raises(ValueError):
            SyntheticBeatParams(heart_rate_bpm=30.0)
        with pytest.raises(ValueError):
            SyntheticBeatParams(heart_rate_bpm=200.0)
        with pytest.raises(ValueError):
            synth_patient(SyntheticBeatParams(heart_rate_bpm=40.0), duration_s=1.0)

    def test_r_dominance_enforced(self):
        from ecgforge.signals import WaveShape
        with pytest.raises(ValueError):
            SyntheticBeatParams(t=WaveShape(1.5, 0.04, 0.25))
        with pytest.raises(ValueError):
            SyntheticBeatParams(p=WaveShape(0.15, -0.01, -0.2))


class TestSignalStats:
    def test_constant(self):
        s = EcgSignal(LeadId.I, np.full(10, 0.5), 500.0)
        assert signal_stats(s) == (0.5, 0.5, 0.5, 0.0)

    def test_zero_one(self):
        s = EcgSignal(LeadId.I, np.array([0.0, 1.0]), 500.0)
        mn, mx, mean, _ = signal_stats(s)
        assert (mn, mx, mean) == (0.0, 1.0, 0.5)

    def test_against_streaming_recomputation(self, rng):
        x = rng.standard_normal(1001)
        s = EcgSignal(LeadId.V2, x, 500.0)
        mn, mx, mean, std = signal_stats(s)
        # independent second pass in plain Python
        lo = hi = x[0]
        total = 0.0
        for v in x:
            lo = min(lo, v)
            hi = max(hi, v)
            total += v
        mu = total / len(x)
        var = sum((v - mu) ** 2 for v in x) / len(x)
        assert mn == lo and mx == hi
        assert abs(mean - mu) < 1e-12
        assert abs(std - np.sqrt(var)) < 1e-12

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            EcgSignal(LeadId.I, np.array([]), 500.0)


class TestSignalIo:
    def test_binary_round_trip(self, tmp_path, rng):
        x = rng.standard_normal(777).astype(np.float32).astype(np.float64)
        s = EcgSignal(LeadId.V5, x, 500.0, patient_id="p1")
        path = tmp_path / "v5.bin"
        write_signal(path, s)
        back = read_signal(path, patient_id="p1")
        assert back.lead is LeadId.V5
        assert back.sampling_rate_hz == 500.0
        assert np.array_equal(back.samples, x)

    def test_truncated_file_rejected(self, tmp_path, rng):
        s = EcgSignal(LeadId.I, rng.standard_normal(64), 250.0)
        path = tmp_path / "x.bin"
        write_signal(path, s)
        data = path.read_bytes()
        path.write_bytes(data[:-3])
        with pytest.raises(ValueError, match="expected"):
            read_signal(path)

    def test_bad_magic_rejected(self, tmp_path):
        path = tmp_path / "bad.bin"
        path.write_bytes(b"NOPE" + bytes(20))
        with pytest.raises(ValueError, match="magic"):
            read_signal(path)

    def test_csv_round_trip(self, tmp_path):
        s = EcgSignal(LeadId.II, np.array([0.0, 0.25, 0.5, 1.0]), 250.0)
        path = tmp_path / "s.csv"
        write_signal_csv(path, s)
        back = read_signal_csv(path, LeadId.II)
        assert back.sampling_rate_hz == pytest.approx(250.0)
        np.testing.assert_allclose(back.samples, s.samples)


class TestSnrHelpers:
    def test_sigma_hits_target_snr(self, rng):
        clean = np.sin(np.linspace(0, 20, 4000))
        sigma = white_noise_sigma_for_snr(clean, 10.0)
        noise = sigma * rng.standard_normal(len(clean))
        measured = snr_db(clean, clean + noise)
        assert abs(measured - 10.0) < 0.5

    def test_snr_of_identical_is_inf(self):
        x = np.ones(10)
        assert snr_db(x, x) == float("inf")
