"""Activations and losses with numerically stable formulations."""
from __future__ import annotations

import numpy as np
from scipy.special import expit


def sigmoid(z: np.ndarray) -> np.ndarray:
    return expit(z)


def softmax(logits: np.ndarray) -> np.ndarray:
    """Max-subtracted softmax over the last axis; rows sum to 1 exactly
    up to rounding and all entries are >= 0."""
    logits = np.asarray(logits)
    z = logits - logits.max(axis=-1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=-1, keepdims=True)


def cross_entropy(probs: np.ndarray, labels: np.ndarray) -> float:
    """Mean negative log-likelihood.

    ``probs`` is (B, K); ``labels`` is either integer class indices (B,) or a
    one-hot / soft target array of the same shape as ``probs``.
    """
    probs = np.asarray(probs, dtype=np.float64)
    p = np.clip(probs, 1e-12, None)
    if labels.ndim == 1:
        picked = p[np.arange(len(p)), labels.astype(np.int64)]
        return float(-np.mean(np.log(picked)))
    return float(-np.mean(np.sum(labels * np.log(p), axis=-1)))


def softmax_cross_entropy(logits: np.ndarray,
                          labels: np.ndarray) -> tuple[float, np.ndarray, np.ndarray]:
    """Fused softmax + mean cross-entropy against integer labels.

    Returns (loss, probabilities, dlogits); the gradient is the usual
    ``(p - onehot) / B`` and is exact for the stable softmax.
    """
    p = softmax(logits)
    n = logits.shape[0]
    idx = labels.astype(np.int64)
    picked = np.clip(p[np.arange(n), idx], 1e-12, None)
    loss = float(-np.mean(np.log(picked)))
    dlogits = p.copy()
    dlogits[np.arange(n), idx] -= 1.0
    dlogits /= n
    return loss, p, dlogits.astype(logits.dtype)
