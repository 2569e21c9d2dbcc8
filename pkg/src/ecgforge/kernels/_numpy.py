"""Pure-numpy implementations of the hot kernels.

Same contracts as the compiled lane in ``_native.pyx``; selected at import
time by :mod:`ecgforge.kernels` when the extension is unavailable.  The
Fréchet recurrences are vectorized over anti-diagonals (the data dependency
forbids row-wise vectorization); the LSTM loops over timesteps with one GEMM
per step.
"""
from __future__ import annotations

import numpy as np
from scipy.special import expit


# ---------------------------------------------------------------------------
# discrete Fréchet distance
# ---------------------------------------------------------------------------

def _frechet_from_dist(d: np.ndarray) -> float:
    """DP over a precomputed pointwise distance matrix."""
    n, m = d.shape
    dp = np.empty_like(d)
    dp[0, :] = np.maximum.accumulate(d[0, :])
    dp[:, 0] = np.maximum.accumulate(d[:, 0])
    for diag in range(2, n + m - 1):
        i_lo = max(1, diag - (m - 1))
        i_hi = min(n - 1, diag - 1)
        if i_lo > i_hi:
            continue
        i = np.arange(i_lo, i_hi + 1)
        j = diag - i
        best = np.minimum(np.minimum(dp[i - 1, j], dp[i - 1, j - 1]), dp[i, j - 1])
        dp[i, j] = np.maximum(d[i, j], best)
    return float(dp[n - 1, m - 1])


def frechet_dp(a: np.ndarray, b: np.ndarray) -> float:
    """Discrete Fréchet distance with amplitude-only point distance."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    return _frechet_from_dist(np.abs(a[:, None] - b[None, :]))


def frechet_dp_2d(ax: np.ndarray, ay: np.ndarray,
                  bx: np.ndarray, by: np.ndarray) -> float:
    """Discrete Fréchet distance with Euclidean distance on (x, y) points."""
    ax = np.asarray(ax, dtype=np.float64)
    ay = np.asarray(ay, dtype=np.float64)
    bx = np.asarray(bx, dtype=np.float64)
    by = np.asarray(by, dtype=np.float64)
    d = np.hypot(ax[:, None] - bx[None, :], ay[:, None] - by[None, :])
    return _frechet_from_dist(d)


def frechet_dp_batch(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Amplitude-only Fréchet distance for N sequence pairs at once.

    ``a`` is (N, n) and ``b`` is (N, m); returns (N,) float64.  The DP runs
    once with every cell update vectorized across the batch.
    """
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.ndim != 2 or b.ndim != 2 or a.shape[0] != b.shape[0]:
        raise ValueError(f"expected (N, n) and (N, m) arrays, got {a.shape} and {b.shape}")
    n, m = a.shape[1], b.shape[1]
    d = np.abs(a[:, :, None] - b[:, None, :])
    dp = np.empty_like(d)
    dp[:, 0, :] = np.maximum.accumulate(d[:, 0, :], axis=1)
    dp[:, :, 0] = np.maximum.accumulate(d[:, :, 0], axis=1)
    for i in range(1, n):
        row = dp[:, i - 1, :]
        prev = np.minimum(row[:, 1:], row[:, :-1])
        for j in range(1, m):
            best = np.minimum(prev[:, j - 1], dp[:, i, j - 1])
            dp[:, i, j] = np.maximum(d[:, i, j], best)
    return dp[:, n - 1, m - 1].copy()


# ---------------------------------------------------------------------------
# LSTM sequence kernels (gate order: input, forget, candidate, output)
# ---------------------------------------------------------------------------

def lstm_seq_forward(x, wx, wh, b, h0, c0):
    """Run an LSTM over a full sequence.

    x: (T, B, I), wx: (I, 4H), wh: (H, 4H), b: (4H,), h0/c0: (B, H).
    Returns (h, c, gates) with shapes (T, B, H), (T, B, H), (T, B, 4H);
    gates hold post-activation values, needed by the backward pass.
    """
    T, B, _ = x.shape
    H = wh.shape[0]
    zx = x.reshape(T * B, -1) @ wx
    zx = zx.reshape(T, B, 4 * H) + b
    h_seq = np.empty((T, B, H), dtype=x.dtype)
    c_seq = np.empty((T, B, H), dtype=x.dtype)
    gates = np.empty((T, B, 4 * H), dtype=x.dtype)
    h_prev, c_prev = h0, c0
    for t in range(T):
        z = zx[t] + h_prev @ wh
        i = expit(z[:, :H])
        f = expit(z[:, H:2 * H])
        g = np.tanh(z[:, 2 * H:3 * H])
        o = expit(z[:, 3 * H:])
        c_prev = f * c_prev + i * g
        h_prev = o * np.tanh(c_prev)
        gates[t, :, :H] = i
        gates[t, :, H:2 * H] = f
        gates[t, :, 2 * H:3 * H] = g
        gates[t, :, 3 * H:] = o
        h_seq[t] = h_prev
        c_seq[t] = c_prev
    return h_seq, c_seq, gates


def lstm_seq_backward(x, wx, wh, gates, c_seq, h_seq, h0, c0, dh_out):
    """Backward pass matching :func:`lstm_seq_forward`.

    ``dh_out`` is the upstream gradient on every hidden state (T, B, H).
    Returns (dx, dwx, dwh, db, dh0, dc0).
    """
    T, B, _ = x.shape
    H = wh.shape[0]
    dz_seq = np.empty((T, B, 4 * H), dtype=x.dtype)
    dwh = np.zeros_like(wh)
    dh_next = np.zeros((B, H), dtype=x.dtype)
    dc_next = np.zeros((B, H), dtype=x.dtype)
    for t in range(T - 1, -1, -1):
        i = gates[t, :, :H]
        f = gates[t, :, H:2 * H]
        g = gates[t, :, 2 * H:3 * H]
        o = gates[t, :, 3 * H:]
        c_prev = c_seq[t - 1] if t > 0 else c0
        h_prev = h_seq[t - 1] if t > 0 else h0
        dh = dh_out[t] + dh_next
        tc = np.tanh(c_seq[t])
        dc = dc_next + dh * o * (1.0 - tc * tc)
        dz = dz_seq[t]
        dz[:, :H] = dc * g * i * (1.0 - i)
        dz[:, H:2 * H] = dc * c_prev * f * (1.0 - f)
        dz[:, 2 * H:3 * H] = dc * i * (1.0 - g * g)
        dz[:, 3 * H:] = dh * tc * o * (1.0 - o)
        dc_next = dc * f
        dwh += h_prev.T @ dz
        dh_next = dz @ wh.T
    dz_flat = dz_seq.reshape(T * B, 4 * H)
    dwx = x.reshape(T * B, -1).T @ dz_flat
    db = dz_flat.sum(axis=0)
    dx = (dz_flat @ wx.T).reshape(x.shape)
    return dx, dwx, dwh, db, dh_next, dc_next


# ---------------------------------------------------------------------------
# 1-D convolution (valid, strided)
# ---------------------------------------------------------------------------

def _windows(x: np.ndarray, k: int, stride: int) -> np.ndarray:
    """Strided view (B, L_out, K, C) of all filter windows."""
    B, L, C = x.shape
    L_out = (L - k) // stride + 1
    sb, sl, sc = x.strides
    return np.lib.stride_tricks.as_strided(
        x, shape=(B, L_out, k, C), strides=(sb, sl * stride, sl, sc), writeable=False)


def conv1d_forward(x, w, bias, stride):
    """Valid cross-correlation: x (B, L, Cin), w (K, Cin, Cout) -> (B, L_out, Cout)."""
    B, L, c_in = x.shape
    k, _, c_out = w.shape
    if L < k:
        raise ValueError(f"input length {L} shorter than filter size {k}")
    win = _windows(x, k, stride)
    y = win.reshape(B, -1, k * c_in) @ w.reshape(k * c_in, c_out)
    y += bias
    return y


def conv1d_backward(x, w, stride, dy):
    """Gradients of :func:`conv1d_forward` w.r.t. input, weights and bias."""
    B, L, c_in = x.shape
    k, _, c_out = w.shape
    L_out = dy.shape[1]
    win = _windows(x, k, stride)
    dw = np.einsum("blkc,blo->kco", win, dy,
                   optimize=True).astype(x.dtype, copy=False)
    dbias = dy.sum(axis=(0, 1))
    dx = np.zeros_like(x)
    dcol = dy @ w.reshape(k * c_in, c_out).T
    dcol = dcol.reshape(B, L_out, k, c_in)
    offsets = stride * np.arange(L_out)
    for kk in range(k):
        # offsets are distinct within one tap, so plain fancy-index add is safe
        dx[:, offsets + kk, :] += dcol[:, :, kk, :]
    return dx, dw, dbias
