import os

# keep BLAS single-threaded: deterministic reductions and faster small GEMMs
os.environ.setdefault("OPENBLAS_NUM_THREADS", "1")
os.environ.setdefault("OMP_NUM_THREADS", "1")

import numpy as np  # noqa: E402
import pytest  # noqa: E402

from ecgforge.signals import SyntheticBeatParams, synth_patient  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def clean_patient():
    """One noiseless synthetic patient at 60 bpm, 15 s, 500 Hz."""
    params = SyntheticBeatParams(heart_rate_bpm=60.0, rng_seed=7)
    return synth_patient(params, duration_s=15.0, sampling_rate_hz=500.0,
                         patient_id="p000")
