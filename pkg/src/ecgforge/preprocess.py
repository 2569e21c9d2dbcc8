"""Signal conditioning: wavelet denoising with windowed adaptive thresholding,
[0, 1] normalization, R-peak detection and heartbeat segmentation.

The denoiser decomposes a signal into four Daubechies detail bands plus an
approximation, hard-thresholds each detail band with a level-scaled moving
average of coefficient magnitudes, and reconstructs.  The R-peak detector is
deliberately rule-based (amplitude threshold plus refractory period), not
learned, so it introduces no training bias into anything downstream.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.ndimage import maximum_filter1d

from .signals import EcgSignal, LeadId
from .wavelets import min_signal_length, wavedec, waverec


@dataclass(frozen=True)
class ThresholdConfig:
    """Adaptive-threshold window length (coefficients per window)."""

    window_r: int = 32

    def __post_init__(self) -> None:
        if self.window_r < 1:
            raise ValueError(f"window_r must be >= 1, got {self.window_r}")


def adaptive_threshold(w: np.ndarray, level_i: int,
                       cfg: ThresholdConfig = ThresholdConfig()) -> np.ndarray:
    """Hard-threshold one detail band.

    The band is cut into consecutive windows of ``cfg.window_r`` coefficients
    (a shorter tail window uses its actual length).  Within window ``j`` the
    threshold is ``mean(|w|) * 2**level_i`` and coefficients with magnitude
    below it are zeroed; the rest are kept unchanged.  Scaling the band by
    ``c > 0`` scales the output by exactly ``c`` (the keep/zero mask is
    scale-invariant).
    """
    if level_i < 1:
        raise ValueError(f"level_i must be >= 1, got {level_i}")
    w = np.asarray(w, dtype=np.float64)
    r = cfg.window_r
    out = np.zeros_like(w)
    scale = 2.0 ** level_i
    for start in range(0, len(w), r):
        block = w[start:start + r]
        tau = np.mean(np.abs(block)) * scale
        keep = np.abs(block) >= tau
        out[start:start + r] = np.where(keep, block, 0.0)
    return out


def denoise(s: EcgSignal, n_filters: int = 4, order: int = 4,
            cfg: ThresholdConfig = ThresholdConfig()) -> EcgSignal:
    """Wavelet-denoise one signal; output has the same length and rate.

    Rejects signals shorter than ``2**n_filters * filter_length`` with the
    minimum in the message.
    """
    min_len = min_signal_length(order, n_filters)
    if len(s.samples) < min_len:
        raise ValueError(f"signal too short to denoise: need at least {min_len} "
                         f"samples for {n_filters} levels at order {order}, "
                         f"got {len(s.samples)}")
    dec = wavedec(s.samples, order=order, n_filters=n_filters)
    dec.details = [adaptive_threshold(d, level_i=i + 1, cfg=cfg)
                   for i, d in enumerate(dec.details)]
    return s.with_samples(waverec(dec))


def normalize(x: np.ndarray) -> np.ndarray:
    """Affine map onto [0, 1]: ``(x - min) / (max - min)``.

    A constant input maps to all zeros (so no NaNs and ordering is kept).
    Idempotent.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("cannot normalize an empty sequence")
    lo = x.min()
    hi = x.max()
    if hi == lo:
        return np.zeros_like(x)
    return (x - lo) / (hi - lo)


def detect_r_peaks(s: EcgSignal, threshold_frac: float = 0.6,
                   window_s: float = 2.0, refractory_s: float = 0.25) -> np.ndarray:
    """Indices of R-peaks in a denoised, normalized signal, ascending.

    A sample is a candidate if it is a local maximum and at least
    ``threshold_frac`` times the rolling maximum over ``window_s`` seconds.
    Candidates closer than ``refractory_s`` keep only the taller one.  Leads
    with inverted dominant polarity (median above mid-range, as in aVR) are
    flipped before detection so the R deflection is upward.
    """
    x = np.asarray(s.samples, dtype=np.float64)
    if len(x) < 3:
        return np.zeros(0, dtype=np.int64)
    lo, hi = x.min(), x.max()
    if np.median(x) > 0.5 * (lo + hi):
        x = (lo + hi) - x

    window = max(1, int(round(window_s * s.sampling_rate_hz)))
    rolling_max = maximum_filter1d(x, size=window, mode="nearest")
    threshold = threshold_frac * rolling_max

    interior = np.arange(1, len(x) - 1)
    is_peak = (x[interior] > x[interior - 1]) & (x[interior] >= x[interior + 1])
    above = x[interior] >= threshold[interior]
    candidates = interior[is_peak & above]

    refractory = int(round(refractory_s * s.sampling_rate_hz))
    kept: list[int] = []
    for idx in candidates:
        if kept and idx - kept[-1] <= refractory:
            if x[idx] > x[kept[-1]]:
                kept[-1] = int(idx)
        else:
            kept.append(int(idx))
    return np.asarray(kept, dtype=np.int64)


@dataclass
class HeartbeatSegment:
    """One fixed-length, zero-padded heartbeat window.

    ``samples`` holds the normalized R-to-R window (float32, values in
    [0, 1]); entries past ``valid_len`` are exactly zero.  ``r_peak_offset``
    is the anchoring R-peak's sample index in the source signal (before any
    decimation).
    """

    patient_id: str
    lead: LeadId
    beat_index: int
    samples: np.ndarray
    valid_len: int
    r_peak_offset: int

    def __post_init__(self) -> None:
        self.samples = np.ascontiguousarray(self.samples, dtype=np.float32)
        if self.samples.ndim != 1:
            raise ValueError("segment samples must be 1-D")
        if not 0 < self.valid_len <= len(self.samples):
            raise ValueError(f"valid_len {self.valid_len} out of range for "
                             f"{len(self.samples)} samples")
        if self.samples.min() < 0.0 or self.samples.max() > 1.0:
            raise ValueError("segment samples must lie in [0, 1]")
        if self.valid_len < len(self.samples) and np.any(self.samples[self.valid_len:] != 0.0):
            raise ValueError("padding beyond valid_len must be exactly zero")


def segment_beats(s: EcgSignal, peaks: np.ndarray, target_len: int,
                  stride: int = 1) -> list[HeartbeatSegment]:
    """Cut one segment per full R-R interval, zero-padded to ``target_len``.

    ``stride`` optionally decimates each window (every ``stride``-th sample)
    to shrink the model input length; ``target_len`` applies after
    decimation.  An interval longer than ``target_len`` raises, since the
    caller is expected to size ``target_len`` from the corpus-wide maximum.
    ``len(peaks) - 1`` segments are produced (none for fewer than 2 peaks).
    """
    if stride < 1:
        raise ValueError(f"stride must be >= 1, got {stride}")
    x = np.asarray(s.samples, dtype=np.float64)
    peaks = np.asarray(peaks, dtype=np.int64)
    segments: list[HeartbeatSegment] = []
    for beat_index in range(len(peaks) - 1):
        start, stop = int(peaks[beat_index]), int(peaks[beat_index + 1])
        window = x[start:stop:stride]
        if len(window) > target_len:
            raise ValueError(
                f"R-R interval of {len(window)} samples (beat {beat_index}, "
                f"patient {s.patient_id!r}, lead {s.lead.name}) exceeds "
                f"target_len {target_len}; recompute the corpus maximum")
        padded = np.zeros(target_len, dtype=np.float32)
        padded[:len(window)] = window
        segments.append(HeartbeatSegment(
            patient_id=s.patient_id, lead=s.lead, beat_index=beat_index,
            samples=padded, valid_len=len(window), r_peak_offset=start))
    return segments
