"""Minimal neural-network kernel: layers, losses, Adam, checkpoints and
gradient verification.  Arrays are plain numpy ndarrays (float32 for
training, float64 for gradient checks)."""
from .layers import (
    BiLstm,
    Conv1d,
    Dense,
    Flatten,
    LstmCell,
    LstmLayer,
    MaxPool1d,
    TimeDistributedDense,
)
from .losses import cross_entropy, sigmoid, softmax, softmax_cross_entropy
from .optim import Adam
from .checkpoint import load_checkpoint, save_checkpoint
from .gradcheck import max_relative_error, numeric_gradient

__all__ = [
    "Adam",
    "BiLstm",
    "Conv1d",
    "Dense",
    "Flatten",
    "LstmCell",
    "LstmLayer",
    "MaxPool1d",
    "TimeDistributedDense",
    "cross_entropy",
    "load_checkpoint",
    "max_relative_error",
    "numeric_gradient",
    "save_checkpoint",
    "sigmoid",
    "softmax",
    "softmax_cross_entropy",
]
