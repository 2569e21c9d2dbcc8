"""Adam optimizer operating in place on named parameter arrays."""
from __future__ import annotations

import numpy as np


class Adam:
    """Bias-corrected adaptive moment estimation.

    ``params`` is a name -> array dict; arrays are updated in place so the
    owning layers see every step.  Moments are allocated lazily with the
    parameter dtype.  A zero gradient leaves parameters bit-identical.
    """

    def __init__(self, params: dict[str, np.ndarray], learning_rate: float = 1e-4,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.params = dict(params)
        self.learning_rate = learning_rate
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = {k: np.zeros_like(v) for k, v in self.params.items()}
        self.v = {k: np.zeros_like(v) for k, v in self.params.items()}

    def step(self, grads: dict[str, np.ndarray]) -> None:
        if set(grads) != set(self.params):
            missing = set(self.params) ^ set(grads)
            raise KeyError(f"gradient keys do not match parameters: {sorted(missing)}")
        self.step_count += 1
        t = self.step_count
        b1, b2 = self.beta1, self.beta2
        for name, p in self.params.items():
            g = grads[name]
            m = self.m[name]
            v = self.v[name]
            m *= b1
            m += (1 - b1) * g
            v *= b2
            v += (1 - b2) * np.square(g)
            m_hat = m / (1 - b1 ** t)
            v_hat = v / (1 - b2 ** t)
            p -= (self.learning_rate * m_hat / (np.sqrt(v_hat) + self.eps)).astype(p.dtype)
