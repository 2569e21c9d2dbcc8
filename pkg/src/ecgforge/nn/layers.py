"""Layers with explicit forward/backward passes.

Every layer exposes ``params()`` and ``grads()`` as name -> array dicts (live
references, updated in place by the optimizer), ``forward`` caching whatever
``backward`` needs, and ``zero_grad()``.  Shapes follow the convention used
throughout: sequences are (T, B, features), batches of flat vectors are
(B, features).
"""
from __future__ import annotations

import numpy as np

from .. import kernels
from .losses import sigmoid


def _uniform(rng: np.random.Generator, shape, fan_in: int, dtype) -> np.ndarray:
    bound = 1.0 / np.sqrt(fan_in)
    return rng.uniform(-bound, bound, size=shape).astype(dtype)


class Dense:
    """Affine map on the last axis, with optional relu/sigmoid activation.

    Accepts inputs of any leading shape (..., in_features).
    """

    def __init__(self, in_features: int, out_features: int, activation: str | None = None,
                 rng: np.random.Generator | None = None, dtype=np.float32):
        if activation not in (None, "relu", "sigmoid"):
            raise ValueError(f"unsupported activation {activation!r}")
        rng = rng or np.random.default_rng(0)
        self.activation = activation
        self.w = _uniform(rng, (in_features, out_features), in_features, dtype)
        self.b = np.zeros(out_features, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self._x = None
        self._y = None

    def params(self):
        return {"w": self.w, "b": self.b}

    def grads(self):
        return {"w": self.dw, "b": self.db}

    def zero_grad(self):
        self.dw[...] = 0
        self.db[...] = 0

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._x = x
        y = x.reshape(-1, x.shape[-1]) @ self.w + self.b
        y = y.reshape(x.shape[:-1] + (self.w.shape[1],))
        if self.activation == "relu":
            y = np.maximum(y, 0)
        elif self.activation == "sigmoid":
            y = sigmoid(y)
        self._y = y
        return y

    def backward(self, dy: np.ndarray) -> np.ndarray:
        if self._x is None:
            raise RuntimeError("backward called before forward")
        if self.activation == "relu":
            dy = dy * (self._y > 0)
        elif self.activation == "sigmoid":
            dy = dy * self._y * (1.0 - self._y)
        x2 = self._x.reshape(-1, self._x.shape[-1])
        dy2 = dy.reshape(-1, dy.shape[-1])
        self.dw += x2.T @ dy2
        self.db += dy2.sum(axis=0)
        dx = dy2 @ self.w.T
        return dx.reshape(self._x.shape)


class TimeDistributedDense(Dense):
    """Dense map applied independently at every timestep of a (T, B, F) input."""


class LstmCell:
    """Single-step LSTM cell with the standard gated update.

    Gate order in the packed weight matrices is input, forget, candidate,
    output; the forget-gate bias starts at 1 for training stability.
    """

    def __init__(self, input_size: int, hidden_size: int,
                 rng: np.random.Generator | None = None, dtype=np.float32):
        rng = rng or np.random.default_rng(0)
        self.input_size = input_size
        self.hidden_size = hidden_size
        g = 4 * hidden_size
        self.wx = _uniform(rng, (input_size, g), input_size, dtype)
        self.wh = _uniform(rng, (hidden_size, g), hidden_size, dtype)
        self.b = np.zeros(g, dtype=dtype)
        self.b[hidden_size:2 * hidden_size] = 1.0
        self.dwx = np.zeros_like(self.wx)
        self.dwh = np.zeros_like(self.wh)
        self.db = np.zeros_like(self.b)
        self._cache = None

    def params(self):
        return {"wx": self.wx, "wh": self.wh, "b": self.b}

    def grads(self):
        return {"wx": self.dwx, "wh": self.dwh, "b": self.db}

    def zero_grad(self):
        self.dwx[...] = 0
        self.dwh[...] = 0
        self.db[...] = 0

    def forward(self, x_t: np.ndarray, h_prev: np.ndarray,
                c_prev: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """One step: x_t (B, I), h_prev/c_prev (B, H) -> (h_t, c_t)."""
        if x_t.shape[1] != self.input_size:
            raise ValueError(f"expected input size {self.input_size}, got {x_t.shape[1]}")
        if h_prev.shape != c_prev.shape or h_prev.shape[1] != self.hidden_size:
            raise ValueError(f"hidden state shapes inconsistent: {h_prev.shape} vs "
                             f"{c_prev.shape}, hidden size {self.hidden_size}")
        x_seq = np.ascontiguousarray(x_t[None])
        h_prev = np.ascontiguousarray(h_prev)
        c_prev = np.ascontiguousarray(c_prev)
        h, c, gates = kernels.lstm_seq_forward(x_seq, self.wx, self.wh, self.b,
                                               h_prev, c_prev)
        self._cache = (x_seq, gates, c, h, h_prev, c_prev)
        return h[0], c[0]

    def backward(self, dh: np.ndarray, dc: np.ndarray | None = None):
        """Gradients for one step; returns (dx_t, dh_prev, dc_prev)."""
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        x_seq, gates, c, h, h_prev, c_prev = self._cache
        dh_seq = np.ascontiguousarray(dh[None])
        dx, dwx, dwh, db, dh0, dc0 = kernels.lstm_seq_backward(
            x_seq, self.wx, self.wh, gates, c, h, h_prev, c_prev, dh_seq)
        if dc is not None:
            # upstream cell-state gradient: c_t = f * c_prev + i * g feeds it
            i = gates[0, :, :self.hidden_size]
            f = gates[0, :, self.hidden_size:2 * self.hidden_size]
            g = gates[0, :, 2 * self.hidden_size:3 * self.hidden_size]
            x2 = x_seq[0]
            dz = np.empty((x2.shape[0], 4 * self.hidden_size), dtype=x2.dtype)
            dz[:, :self.hidden_size] = dc * g * i * (1 - i)
            dz[:, self.hidden_size:2 * self.hidden_size] = dc * c_prev * f * (1 - f)
            dz[:, 2 * self.hidden_size:3 * self.hidden_size] = dc * i * (1 - g * g)
            dz[:, 3 * self.hidden_size:] = 0
            dwx += x2.T @ dz
            dwh += h_prev.T @ dz
            db += dz.sum(axis=0)
            dx[0] += dz @ self.wx.T
            dh0 += dz @ self.wh.T
            dc0 += dc * f
        self.dwx += dwx
        self.dwh += dwh
        self.db += db
        return dx[0], dh0, dc0


class LstmLayer:
    """LSTM over a whole (T, B, I) sequence in one direction.

    ``reverse=True`` processes the sequence back to front and returns hidden
    states aligned with the input order.
    """

    def __init__(self, input_size: int, hidden_size: int, reverse: bool = False,
                 rng: np.random.Generator | None = None, dtype=np.float32):
        rng = rng or np.random.default_rng(0)
        self.input_size = input_size
        self.hidden_size = hidden_size
        self.reverse = reverse
        g = 4 * hidden_size
        self.wx = _uniform(rng, (input_size, g), input_size, dtype)
        self.wh = _uniform(rng, (hidden_size, g), hidden_size, dtype)
        self.b = np.zeros(g, dtype=dtype)
        self.b[hidden_size:2 * hidden_size] = 1.0
        self.dwx = np.zeros_like(self.wx)
        self.dwh = np.zeros_like(self.wh)
        self.db = np.zeros_like(self.b)
        self._cache = None

    def params(self):
        return {"wx": self.wx, "wh": self.wh, "b": self.b}

    def grads(self):
        return {"wx": self.dwx, "wh": self.dwh, "b": self.db}

    def zero_grad(self):
        self.dwx[...] = 0
        self.dwh[...] = 0
        self.db[...] = 0

    def forward(self, x: np.ndarray) -> np.ndarray:
        if x.ndim != 3 or x.shape[0] == 0:
            raise ValueError(f"expected non-empty (T, B, I) input, got shape {x.shape}")
        xs = np.ascontiguousarray(x[::-1] if self.reverse else x)
        B = x.shape[1]
        h0 = np.zeros((B, self.hidden_size), dtype=x.dtype)
        c0 = np.zeros_like(h0)
        h, c, gates = kernels.lstm_seq_forward(xs, self.wx, self.wh, self.b, h0, c0)
        self._cache = (xs, gates, c, h, h0, c0)
        return h[::-1].copy() if self.reverse else h

    def backward(self, dh: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        xs, gates, c, h, h0, c0 = self._cache
        dhs = np.ascontiguousarray(dh[::-1] if self.reverse else dh)
        dx, dwx, dwh, db, _, _ = kernels.lstm_seq_backward(
            xs, self.wx, self.wh, gates, c, h, h0, c0, dhs)
        self.dwx += dwx
        self.dwh += dwh
        self.db += db
        return dx[::-1].copy() if self.reverse else dx


class BiLstm:
    """Bidirectional LSTM: forward and backward passes concatenated per step.

    Output shape is (T, B, 2 * hidden); output length equals input length.
    """

    def __init__(self, input_size: int, hidden_size: int,
                 rng: np.random.Generator | None = None, dtype=np.float32):
        rng = rng or np.random.default_rng(0)
        self.hidden_size = hidden_size
        self.fwd = LstmLayer(input_size, hidden_size, reverse=False, rng=rng, dtype=dtype)
        self.bwd = LstmLayer(input_size, hidden_size, reverse=True, rng=rng, dtype=dtype)

    def tie_directions(self):
        """Copy the forward direction's weights into the backward direction."""
        self.bwd.wx[...] = self.fwd.wx
        self.bwd.wh[...] = self.fwd.wh
        self.bwd.b[...] = self.fwd.b

    def params(self):
        out = {f"fwd.{k}": v for k, v in self.fwd.params().items()}
        out.update({f"bwd.{k}": v for k, v in self.bwd.params().items()})
        return out

    def grads(self):
        out = {f"fwd.{k}": v for k, v in self.fwd.grads().items()}
        out.update({f"bwd.{k}": v for k, v in self.bwd.grads().items()})
        return out

    def zero_grad(self):
        self.fwd.zero_grad()
        self.bwd.zero_grad()

    def forward(self, x: np.ndarray) -> np.ndarray:
        return np.concatenate([self.fwd.forward(x), self.bwd.forward(x)], axis=2)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        h = self.hidden_size
        return self.fwd.backward(dy[:, :, :h]) + self.bwd.backward(dy[:, :, h:])


class Conv1d:
    """Valid (no padding) strided 1-D convolution over (B, L, C_in) inputs."""

    def __init__(self, in_channels: int, out_channels: int, filter_size: int,
                 stride: int = 1, activation: str | None = None,
                 rng: np.random.Generator | None = None, dtype=np.float32):
        if filter_size < 1 or stride < 1:
            raise ValueError("filter_size and stride must be >= 1")
        if activation not in (None, "relu"):
            raise ValueError(f"unsupported activation {activation!r}")
        rng = rng or np.random.default_rng(0)
        self.stride = stride
        self.activation = activation
        fan_in = filter_size * in_channels
        self.w = _uniform(rng, (filter_size, in_channels, out_channels), fan_in, dtype)
        self.b = np.zeros(out_channels, dtype=dtype)
        self.dw = np.zeros_like(self.w)
        self.db = np.zeros_like(self.b)
        self._cache = None

    def params(self):
        return {"w": self.w, "b": self.b}

    def grads(self):
        return {"w": self.dw, "b": self.db}

    def zero_grad(self):
        self.dw[...] = 0
        self.db[...] = 0

    @staticmethod
    def output_length(input_len: int, filter_size: int, stride: int) -> int:
        if input_len < filter_size:
            raise ValueError(f"input length {input_len} shorter than filter {filter_size}")
        return (input_len - filter_size) // stride + 1

    def forward(self, x: np.ndarray) -> np.ndarray:
        x = np.ascontiguousarray(x)
        y = kernels.conv1d_forward(x, self.w, self.b, self.stride)
        mask = None
        if self.activation == "relu":
            mask = y > 0
            y = y * mask
        self._cache = (x, mask)
        return y

    def backward(self, dy: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        x, mask = self._cache
        if mask is not None:
            dy = dy * mask
        dx, dw, db = kernels.conv1d_backward(x, self.w, self.stride,
                                             np.ascontiguousarray(dy))
        self.dw += dw
        self.db += db
        return dx


class MaxPool1d:
    """Windowed maximum over (B, L, C); gradient goes to the first maximum."""

    def __init__(self, size: int = 2, stride: int = 2):
        self.size = size
        self.stride = stride
        self._cache = None

    def params(self):
        return {}

    def grads(self):
        return {}

    def zero_grad(self):
        pass

    def forward(self, x: np.ndarray) -> np.ndarray:
        B, L, C = x.shape
        n_out = (L - self.size) // self.stride + 1
        sb, sl, sc = x.strides
        win = np.lib.stride_tricks.as_strided(
            x, shape=(B, n_out, self.size, C),
            strides=(sb, sl * self.stride, sl, sc), writeable=False)
        arg = win.argmax(axis=2)
        y = np.take_along_axis(win, arg[:, :, None, :], axis=2)[:, :, 0, :]
        self._cache = (x.shape, arg, x.dtype)
        return y

    def backward(self, dy: np.ndarray) -> np.ndarray:
        if self._cache is None:
            raise RuntimeError("backward called before forward")
        shape, arg, dtype = self._cache
        B, L, C = shape
        n_out = arg.shape[1]
        dx = np.zeros(shape, dtype=dtype)
        b_idx = np.arange(B)[:, None, None]
        c_idx = np.arange(C)[None, None, :]
        pos = self.stride * np.arange(n_out)[None, :, None] + arg
        np.add.at(dx, (b_idx, pos, c_idx), dy)
        return dx


class Flatten:
    """(B, L, C) -> (B, L * C)."""

    def __init__(self):
        self._shape = None

    def params(self):
        return {}

    def grads(self):
        return {}

    def zero_grad(self):
        pass

    def forward(self, x: np.ndarray) -> np.ndarray:
        self._shape = x.shape
        return x.reshape(x.shape[0], -1)

    def backward(self, dy: np.ndarray) -> np.ndarray:
        return dy.reshape(self._shape)
