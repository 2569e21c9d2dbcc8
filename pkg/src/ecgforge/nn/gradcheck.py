"""Central finite-difference gradient verification."""
from __future__ import annotations

from typing import Callable

import numpy as np


def numeric_gradient(loss_fn: Callable[[], float], array: np.ndarray,
                     h: float = 1e-5) -> np.ndarray:
    """Central differences of ``loss_fn`` w.r.t. every entry of ``array``.

    ``array`` is perturbed in place and restored; ``loss_fn`` must read the
    live array (e.g. a layer parameter) on each call.
    """
    grad = np.zeros_like(array, dtype=np.float64)
    flat = array.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        flat[i] = orig + h
        hi = loss_fn()
        flat[i] = orig - h
        lo = loss_fn()
        flat[i] = orig
        gflat[i] = (hi - lo) / (2.0 * h)
    return grad


def max_relative_error(analytic: np.ndarray, numeric: np.ndarray,
                       floor: float = 1e-8) -> float:
    """Elementwise |a - n| / max(|a|, |n|); entries where both magnitudes are
    below ``floor`` count as zero error."""
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    denom = np.maximum(np.abs(analytic), np.abs(numeric))
    err = np.abs(analytic - numeric)
    rel = np.where(denom > floor, err / np.where(denom > 0, denom, 1.0), 0.0)
    return float(rel.max()) if rel.size else 0.0


def check_gradients(loss_fn: Callable[[], float],
                    params: dict[str, np.ndarray],
                    analytic: dict[str, np.ndarray],
                    h: float = 1e-5) -> dict[str, float]:
    """Max relative error per named parameter.

    ``loss_fn`` recomputes the scalar loss from the current (live) parameter
    arrays; ``analytic`` holds the backprop gradients to verify.
    """
    errors = {}
    for name, arr in params.items():
        num = numeric_gradient(loss_fn, arr, h=h)
        errors[name] = max_relative_error(analytic[name], num)
    return errors
