"""Adam with bias correction, one moment pair per named tensor."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .params import PatWayNetParams


@dataclass
class AdamState:
    lr: float = 0.001
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    step: int = 0
    m: dict[str, np.ndarray] = field(default_factory=dict)
    v: dict[str, np.ndarray] = field(default_factory=dict)


def adam_step(params: PatWayNetParams, grads: dict[str, np.ndarray], state: AdamState) -> None:
    """In-place update. A tensor whose gradient is identically zero (masked
    entries in particular) has m = v = 0 and therefore moves by exactly 0."""
    state.step += 1
    t = state.step
    for name, tensor in params.tensors():
        g = grads[name]
        if name not in state.m:
            state.m[name] = np.zeros_like(tensor)
            state.v[name] = np.zeros_like(tensor)
        m = state.m[name]
        v = state.v[name]
        m *= state.beta1
        m += (1.0 - state.beta1) * g
        v *= state.beta2
        v += (1.0 - state.beta2) * g**2
        m_hat = m / (1.0 - state.beta1**t)
        v_hat = v / (1.0 - state.beta2**t)
        tensor -= state.lr * m_hat / (np.sqrt(v_hat) + state.eps)
