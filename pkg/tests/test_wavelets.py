import numpy as np
import pytest

from ecgforge.wavelets import (
    dwt_step,
    filter_bank,
    filter_length,
    idwt_step,
    min_signal_length,
    wavedec,
    waverec,
)


def brute_force_dwt(x, order):
    """Direct-convolution oracle: symmetric extension, explicit convolution
    loops with the decomposition filters, downsample odd indices.  Plain
    Python, no shared code with the implementation."""
    dec_lo, dec_hi, _, _ = filter_bank(order)
    taps = len(dec_lo)
    pad = taps - 1
    xe = list(x[:pad][::-1]) + list(x) + list(x[-pad:][::-1])
    n_valid = len(xe) - taps + 1
    ca_full = [sum(xe[i + k] * dec_lo[taps - 1 - k] for k in range(taps))
               for i in range(n_valid)]
    cd_full = [sum(xe[i + k] * dec_hi[taps - 1 - k] for k in range(taps))
               for i in range(n_valid)]
    return np.array(ca_full[1::2]), np.array(cd_full[1::2])


class TestDwtStep:
    def test_constant_signal_kills_detail(self):
        ca, cd = dwt_step(np.full(128, 3.7), order=4)
        assert np.max(np.abs(cd)) < 1e-10

    @pytest.mark.parametrize("order", [2, 4, 8])
    def test_matches_direct_convolution_oracle(self, order, rng):
        x = rng.standard_normal(97)
        ca, cd = dwt_step(x, order)
        ca_ref, cd_ref = brute_force_dwt(x, order)
        np.testing.assert_allclose(ca, ca_ref, rtol=0, atol=1e-12)
        np.testing.assert_allclose(cd, cd_ref, rtol=0, atol=1e-12)

    def test_impulse_coefficients_are_subsampled_taps(self):
        # an interior impulse turns correlation into a read-out of the taps
        order = 4
        dec_lo, _, _, _ = filter_bank(order)
        x = np.zeros(64)
        x[31] = 1.0
        ca, _ = dwt_step(x, order)
        nonzero = np.sort(np.abs(ca[np.abs(ca) > 1e-15]))
        taps = np.abs(dec_lo)
        # subsampling keeps every other tap (impulse parity picks which half)
        expected = np.sort(taps[np.arange(len(taps)) % 2 == 0])
        alt = np.sort(taps[np.arange(len(taps)) % 2 == 1])
        assert (np.allclose(nonzero, expected, atol=1e-15)
                or np.allclose(nonzero, alt, atol=1e-15))

    @pytest.mark.parametrize("order", [2, 4, 8])
    @pytest.mark.parametrize("n", [16, 17, 64, 101, 256])
    def test_round_trip(self, order, n, rng):
        if n < filter_length(order):
            pytest.skip("shorter than filter")
        x = rng.standard_normal(n)
        ca, cd = dwt_step(x, order)
        back = idwt_step(ca, cd, order, output_len=n)
        assert np.max(np.abs(back - x)) < 1e-10

    def test_output_length_contract(self):
        for order in (2, 4, 8):
            for n in (20, 21, 64, 65):
                ca, cd = dwt_step(np.zeros(n), order)
                assert len(ca) == len(cd) == int(np.ceil(n / 2)) + order - 1

    def test_too_short_rejected(self):
        with pytest.raises(ValueError, match="filter length"):
            dwt_step(np.zeros(7), order=4)

    def test_unsupported_order_rejected(self):
        with pytest.raises(ValueError, match="order"):
            dwt_step(np.zeros(64), order=3)

    def test_idwt_length_mismatch_rejected(self):
        with pytest.raises(ValueError, match="differ"):
            idwt_step(np.zeros(5), np.zeros(6), order=2)


class TestCascade:
    @pytest.mark.parametrize("order", [2, 4, 8])
    def test_four_level_round_trip(self, order, rng):
        x = rng.standard_normal(1000)
        dec = wavedec(x, order=order, n_filters=4)
        assert len(dec.details) == 4
        back = waverec(dec)
        assert len(back) == len(x)
        assert np.max(np.abs(back - x)) < 1e-10

    def test_detail_lengths_roughly_halve(self, rng):
        dec = wavedec(rng.standard_normal(512), order=4, n_filters=4)
        lengths = [len(d) for d in dec.details]
        for prev_len, next_len in zip(lengths, lengths[1:]):
            assert abs(next_len - (prev_len / 2 + 3)) <= 2

    def test_min_length_enforced_with_number_in_message(self):
        need = min_signal_length(4, 4)
        with pytest.raises(ValueError, match=str(need)):
            wavedec(np.zeros(need - 1), order=4, n_filters=4)
