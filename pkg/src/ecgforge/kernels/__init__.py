"""Hot numerical kernels with a compiled core and a pure-numpy fallback.

The Cython extension ``_native`` is preferred when it was built; otherwise
the numpy implementations in ``_numpy`` are used.  Set the environment
variable ``ECGFORGE_PURE_PYTHON=1`` to force the fallback (useful for the
benchmark and for debugging).  ``BACKEND`` records which lane is active.
"""
from __future__ import annotations

import os

from . import _numpy

_force_py = os.environ.get("ECGFORGE_PURE_PYTHON", "") not in ("", "0")
_impl = None
if not _force_py:
    try:
        from . import _native as _impl
    except ImportError:
        _impl = None

if _impl is not None:
    BACKEND = "native"
    frechet_dp = _impl.frechet_dp
    frechet_dp_2d = _impl.frechet_dp_2d
    frechet_dp_batch = _impl.frechet_dp_batch
    lstm_seq_forward = _impl.lstm_seq_forward
    lstm_seq_backward = _impl.lstm_seq_backward
    conv1d_forward = _impl.conv1d_forward
    conv1d_backward = _impl.conv1d_backward
else:
    BACKEND = "numpy"
    frechet_dp = _numpy.frechet_dp
    frechet_dp_2d = _numpy.frechet_dp_2d
    frechet_dp_batch = _numpy.frechet_dp_batch
    lstm_seq_forward = _numpy.lstm_seq_forward
    lstm_seq_backward = _numpy.lstm_seq_backward
    conv1d_forward = _numpy.conv1d_forward
    conv1d_backward = _numpy.conv1d_backward

__all__ = [
    "BACKEND",
    "frechet_dp",
    "frechet_dp_2d",
    "frechet_dp_batch",
    "lstm_seq_forward",
    "lstm_seq_backward",
    "conv1d_forward",
    "conv1d_backward",
]
