"""Core waveform types, a synthetic 12-lead ECG generator, and signal file I/O.

The synthetic generator stands in for clinical recordings: each heartbeat is a
sum of five Gaussian wave templates (P, Q, R, S, T) placed relative to the
R-peak, repeated at a fixed heart rate, with optional white noise and baseline
wander.  All 12 standard leads share beat timing but differ in gain, polarity
and per-wave amplitude mix, so the cross-lead correlation structure a
lead-to-lead generator must learn is present.
"""
from __future__ import annotations

import enum
import struct
from dataclasses import dataclass, field, replace

import numpy as np

SIGNAL_MAGIC = b"ECGS"
SIGNAL_FORMAT_VERSION = 1

# 16-byte header: magic, u16 version, u16 lead code, u32 sample count, f32 rate
_HEADER = struct.Struct("<4sHHIf")


class LeadId(enum.Enum):
    """The 12 standard ECG leads, in conventional order (codes 0..11)."""

    I = 0
    II = 1
    III = 2
    aVR = 3
    aVL = 4
    aVF = 5
    V1 = 6
    V2 = 7
    V3 = 8
    V4 = 9
    V5 = 10
    V6 = 11

    @property
    def code(self) -> int:
        return self.value

    @property
    def is_precordial(self) -> bool:
        """True for the chest leads V1..V6."""
        return self.value >= 6

    @classmethod
    def from_code(cls, code: int) -> "LeadId":
        try:
            return cls(code)
        except ValueError:
            raise ValueError(f"lead code must be 0..11, got {code}") from None

    @classmethod
    def parse(cls, name: str) -> "LeadId":
        for lead in cls:
            if lead.name.lower() == name.lower():
                return lead
        raise ValueError(f"unknown lead name {name!r} (expected one of "
                         f"{', '.join(l.name for l in cls)})")


ALL_LEADS = tuple(LeadId)


@dataclass
class EcgSignal:
    """One lead's sampled waveform.

    Amplitudes are millivolts for raw signals or unitless in [0, 1] after
    normalization.  ``samples`` is always a 1-D float array.
    """

    lead: LeadId
    samples: np.ndarray
    sampling_rate_hz: float
    patient_id: str = ""

    def __post_init__(self) -> None:
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1 or self.samples.size == 0:
            raise ValueError("samples must be a non-empty 1-D sequence")
        if not self.sampling_rate_hz > 0:
            raise ValueError(f"sampling rate must be positive, got {self.sampling_rate_hz}")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sampling_rate_hz

    def with_samples(self, samples: np.ndarray) -> "EcgSignal":
        return replace(self, samples=samples)


@dataclass(frozen=True)
class WaveShape:
    """One PQRST component: a Gaussian bump of given amplitude (mV),
    width (Gaussian sigma, seconds) and center offset from the R-peak (s)."""

    amplitude_mv: float
    width_s: float
    offset_s: float


@dataclass(frozen=True)
class SyntheticBeatParams:
    """Parameters of the synthetic patient generator.

    The R wave must dominate the other four in absolute amplitude and all
    widths must be positive; violating either raises at construction.
    """

    heart_rate_bpm: float = 60.0
    p: WaveShape = field(default_factory=lambda: WaveShape(0.15, 0.020, -0.200))
    q: WaveShape = field(default_factory=lambda: WaveShape(-0.15, 0.008, -0.030))
    r: WaveShape = field(default_factory=lambda: WaveShape(1.00, 0.010, 0.000))
    s: WaveShape = field(default_factory=lambda: WaveShape(-0.25, 0.008, 0.030))
    t: WaveShape = field(default_factory=lambda: WaveShape(0.30, 0.040, 0.250))
    noise_amplitude: float = 0.0
    baseline_wander_amplitude: float = 0.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        if not 40.0 <= self.heart_rate_bpm <= 180.0:
            raise ValueError(f"heart rate must be in [40, 180] bpm, got {self.heart_rate_bpm}")
        waves = self.waves()
        for name, w in waves.items():
            if w.width_s <= 0:
                raise ValueError(f"{name} wave width must be > 0, got {w.width_s}")
        r_amp = abs(waves["r"].amplitude_mv)
        for name, w in waves.items():
            if name != "r" and abs(w.amplitude_mv) >= r_amp:
                raise ValueError(f"R amplitude must strictly dominate, but |{name}| = "
                                 f"{abs(w.amplitude_mv)} >= |R| = {r_amp}")
        if self.noise_amplitude < 0 or self.baseline_wander_amplitude < 0:
            raise ValueError("noise and baseline wander amplitudes must be >= 0")

    def waves(self) -> dict[str, WaveShape]:
        return {"p": self.p, "q": self.q, "r": self.r, "s": self.s, "t": self.t}


# Per-lead diversity: gain in [0.6, 1.0], polarity fixed (-1 for aVR, mimicking
# its clinically inverted deflections), and a per-wave amplitude mix drawn per
# lead.  The R mix is kept near 1 so R-dominance survives mixing.
_R_MIX_RANGE = (0.95, 1.05)
_OTHER_MIX_RANGE = (0.70, 1.30)
_GAIN_RANGE = (0.60, 1.00)


def _lead_mixing(rng: np.random.Generator) -> dict[LeadId, tuple[float, float, dict[str, float]]]:
    mixing = {}
    for lead in ALL_LEADS:
        gain = float(rng.uniform(*_GAIN_RANGE))
        polarity = -1.0 if lead is LeadId.aVR else 1.0
        mix = {name: float(rng.uniform(*(_R_MIX_RANGE if name == "r" else _OTHER_MIX_RANGE)))
               for name in ("p", "q", "r", "s", "t")}
        mixing[lead] = (gain, polarity, mix)
    return mixing


def r_peak_times(heart_rate_bpm: float, duration_s: float) -> np.ndarray:
    """R-peak times for a strictly periodic rhythm.

    Beats start half a period in, so 60 bpm over 15 s yields exactly 15 peaks
    at 0.5 s, 1.5 s, ..., 14.5 s.
    """
    rr = 60.0 / heart_rate_bpm
    if duration_s < rr:
        raise ValueError(f"duration {duration_s} s is shorter than one beat period {rr} s")
    n_beats = int(np.floor((duration_s - 0.5 * rr) / rr)) + 1
    return 0.5 * rr + rr * np.arange(n_beats)


def synth_patient(
    params: SyntheticBeatParams,
    duration_s: float = 15.0,
    sampling_rate_hz: float = 500.0,
    patient_id: str = "p000",
) -> tuple[dict[LeadId, EcgSignal], np.ndarray]:
    """Generate one patient's 12-lead record.

    Returns the map lead -> signal plus the ground-truth R-peak sample
    indices (shared by all leads; R timing is identical across of them).
    Deterministic for a fixed ``params`` (including its seed).
    """
    if duration_s <= 0:
        raise ValueError(f"duration must be positive, got {duration_s}")
    if sampling_rate_hz <= 0:
        raise ValueError(f"sampling rate must be positive, got {sampling_rate_hz}")

    peak_times = r_peak_times(params.heart_rate_bpm, duration_s)
    n = int(round(duration_s * sampling_rate_hz))
    t = np.arange(n) / sampling_rate_hz
    peak_idx = np.round(peak_times * sampling_rate_hz).astype(np.int64)
    peak_idx = peak_idx[peak_idx < n]

    rng = np.random.default_rng(np.random.SeedSequence([params.rng_seed & 0x7FFFFFFF]))
    mixing = _lead_mixing(rng)
    wander_phase = float(rng.uniform(0, 2 * np.pi))

    waves = params.waves()
    signals: dict[LeadId, EcgSignal] = {}
    for lead in ALL_LEADS:
        gain, polarity, mix = mixing[lead]
        y = np.zeros(n)
        for name, w in waves.items():
            amp = gain * polarity * mix[name] * w.amplitude_mv
            centers = peak_times + w.offset_s
            # each bump decays to ~1e-10 of peak within 7 sigma
            half = 7.0 * w.width_s
            for c in centers:
                lo = max(0, int(np.floor((c - half) * sampling_rate_hz)))
                hi = min(n, int(np.ceil((c + half) * sampling_rate_hz)) + 1)
                if lo >= hi:
                    continue
                tt = t[lo:hi] - c
                y[lo:hi] += amp * np.exp(-0.5 * (tt / w.width_s) ** 2)
        if params.baseline_wander_amplitude > 0:
            y += params.baseline_wander_amplitude * np.sin(2 * np.pi * 0.33 * t + wander_phase)
        if params.noise_amplitude > 0:
            lead_rng = np.random.default_rng(
                np.random.SeedSequence([params.rng_seed & 0x7FFFFFFF, lead.code]))
            y += params.noise_amplitude * lead_rng.standard_normal(n)
        signals[lead] = EcgSignal(lead=lead, samples=y,
                                  sampling_rate_hz=sampling_rate_hz, patient_id=patient_id)
    return signals, peak_idx


def white_noise_sigma_for_snr(clean: np.ndarray, snr_db: float) -> float:
    """Noise standard deviation that gives the requested SNR against ``clean``."""
    power = float(np.mean(np.square(clean)))
    return float(np.sqrt(power / (10.0 ** (snr_db / 10.0))))


def snr_db(clean: np.ndarray, noisy: np.ndarray) -> float:
    """Signal-to-noise ratio of ``noisy`` relative to the known clean signal."""
    clean = np.asarray(clean, dtype=np.float64)
    noisy = np.asarray(noisy, dtype=np.float64)
    if clean.shape != noisy.shape:
        raise ValueError("clean and noisy signals must have the same shape")
    err = float(np.sum(np.square(noisy - clean)))
    if err == 0:
        return float("inf")
    return 10.0 * float(np.log10(np.sum(np.square(clean)) / err))


def signal_stats(s: EcgSignal) -> tuple[float, float, float, float]:
    """(min, max, mean, population std) of the samples."""
    x = s.samples
    return float(x.min()), float(x.max()), float(x.mean()), float(x.std())


def write_signal(path, s: EcgSignal) -> None:
    """Write the little-endian binary signal format (f32 samples)."""
    data = np.asarray(s.samples, dtype="<f4")
    header = _HEADER.pack(SIGNAL_MAGIC, SIGNAL_FORMAT_VERSION, s.lead.code,
                          len(data), float(s.sampling_rate_hz))
    with open(path, "wb") as f:
        f.write(header)
        f.write(data.tobytes())


def read_signal(path, patient_id: str = "") -> EcgSignal:
    """Read a binary signal file; raises ValueError on bad magic or truncation."""
    with open(path, "rb") as f:
        raw = f.read()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated header ({len(raw)} bytes)")
    magic, version, lead_code, count, rate = _HEADER.unpack_from(raw)
    if magic != SIGNAL_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, expected {SIGNAL_MAGIC!r}")
    if version != SIGNAL_FORMAT_VERSION:
        raise ValueError(f"{path}: unsupported signal format version {version}")
    expected = _HEADER.size + 4 * count
    if len(raw) != expected:
        raise ValueError(f"{path}: expected {expected} bytes for {count} samples, got {len(raw)}")
    samples = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).astype(np.float64)
    return EcgSignal(lead=LeadId.from_code(lead_code), samples=samples,
                     sampling_rate_hz=float(rate), patient_id=patient_id)


def write_signal_csv(path, s: EcgSignal) -> None:
    """CSV alternative (header ``t_seconds,amplitude``) for interop and plotting."""
    with open(path, "w", newline="") as f:
        f.write("t_seconds,amplitude\n")
        for i, v in enumerate(s.samples):
            f.write(f"{i / s.sampling_rate_hz!r},{float(v)!r}\n")


def read_signal_csv(path, lead: LeadId, patient_id: str = "") -> EcgSignal:
    times = []
    values = []
    with open(path, "r", newline="") as f:
        header = f.readline().strip()
        if header != "t_seconds,amplitude":
            raise ValueError(f"{path}: expected header 't_seconds,amplitude', got {header!r}")
        for line in f:
            line = line.strip()
            if not line:
                continue
            ts, vs = line.split(",")
            times.append(float(ts))
            values.append(float(vs))
    if len(values) < 2:
        raise ValueError(f"{path}: need at least two samples to infer the sampling rate")
    rate = 1.0 / (times[1] - times[0])
    return EcgSignal(lead=lead, samples=np.array(values), sampling_rate_hz=rate,
                     patient_id=patient_id)
