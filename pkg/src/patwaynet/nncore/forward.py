"""Forward pass: per-feature shape nets, corridor-masked recurrence, connection.

Conventions: row vectors, float64 everywhere. A batch shares one prefix
length; callers bucket rows by length so padding never enters the recurrence.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit as sigmoid

from .params import PatWayNetParams


def masked_linear(x: np.ndarray, w: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """x @ (w * mask). Masked entries contribute exactly 0 regardless of x."""
    return x @ (w * mask)


def ilstm_step(
    params: PatWayNetParams, x_t: np.ndarray, state: tuple[np.ndarray, np.ndarray]
) -> tuple[np.ndarray, np.ndarray]:
    """One recurrence step for a single row (or a leading-batch of rows)."""
    c, h = state
    H = params.hidden_size
    a = (
        masked_linear(x_t, params.wx, params.gate_mask_x())
        + masked_linear(h, params.wh, params.gate_mask_h())
        + params.b
    )
    f = sigmoid(a[..., :H])
    i = sigmoid(a[..., H : 2 * H])
    o = sigmoid(a[..., 2 * H : 3 * H])
    g = np.tanh(a[..., 3 * H :])
    c_next = f * c + i * g
    h_next = o * np.tanh(c_next)
    return c_next, h_next


def static_effects(params: PatWayNetParams, x_static: np.ndarray) -> np.ndarray:
    """Per-feature scalar outputs o_l of the static shape nets, (B, q)."""
    hid = np.tanh(x_static[:, :, None] * params.static_w1[None] + params.static_b1[None])
    return (hid * params.static_w2[None]).sum(axis=2) + params.static_b2[None]


@dataclass
class ForwardCache:
    """Everything the backward pass reuses. Arrays are batch-leading."""

    x_static: np.ndarray  # (B, q)
    x_seq: np.ndarray  # (B, t, p)
    static_hidden: np.ndarray  # (B, q, h_stat)
    static_out: np.ndarray  # (B, q)
    cs: np.ndarray  # (t+1, B, H) cell states, cs[0] = 0
    hs: np.ndarray  # (t+1, B, H) hidden states, hs[0] = 0
    gates: np.ndarray  # (t, 4, B, H) in order f, i, o, g
    logit: np.ndarray  # (B,)
    prediction: np.ndarray  # (B,)


def forward_batch(
    params: PatWayNetParams, x_static: np.ndarray, x_seq: np.ndarray
) -> ForwardCache:
    """Run a same-length batch. x_static (B, q), x_seq (B, t, p), t >= 1."""
    x_static = np.asarray(x_static, dtype=np.float64)
    x_seq = np.asarray(x_seq, dtype=np.float64)
    if not (np.isfinite(x_static).all() and np.isfinite(x_seq).all()):
        raise ValueError("non-finite input")
    B, t, p = x_seq.shape
    H = params.hidden_size

    hid = np.tanh(x_static[:, :, None] * params.static_w1[None] + params.static_b1[None])
    static_out = (hid * params.static_w2[None]).sum(axis=2) + params.static_b2[None]

    wx = params.wx * params.gate_mask_x()
    wh = params.wh * params.gate_mask_h()
    cs = np.zeros((t + 1, B, H))
    hs = np.zeros((t + 1, B, H))
    gates = np.zeros((t, 4, B, H))
    for step in range(t):
        a = x_seq[:, step, :] @ wx + hs[step] @ wh + params.b[None]
        f = sigmoid(a[:, :H])
        i = sigmoid(a[:, H : 2 * H])
        o = sigmoid(a[:, 2 * H : 3 * H])
        g = np.tanh(a[:, 3 * H :])
        cs[step + 1] = f * cs[step] + i * g
        hs[step + 1] = o * np.tanh(cs[step + 1])
        gates[step, 0], gates[step, 1], gates[step, 2], gates[step, 3] = f, i, o, g

    logit = static_out @ params.conn_static + hs[t] @ params.conn_seq + params.conn_bias
    prediction = sigmoid(logit) if params.head == "sigmoid" else logit
    return ForwardCache(
        x_static=x_static,
        x_seq=x_seq,
        static_hidden=hid,
        static_out=static_out,
        cs=cs,
        hs=hs,
        gates=gates,
        logit=logit,
        prediction=prediction,
    )


def predict_dataset(params: PatWayNetParams, ds) -> np.ndarray:
    """Predictions for every row of an EncodedDataset, bucketed by length."""
    out = np.zeros(ds.n_rows)
    for t in np.unique(ds.prefix_len):
        idx = np.flatnonzero(ds.prefix_len == t)
        cache = forward_batch(params, ds.x_static[idx], ds.x_seq[idx, : int(t), :])
        out[idx] = cache.prediction
    return out


def corridor_effects(params: PatWayNetParams, h: np.ndarray) -> np.ndarray:
    """Connection-weighted contribution of each corridor, (..., n_corridors).

    The logit decomposes as bias + sum of static effects + sum over corridors
    of conn_seq[block] . h[block]; this returns the corridor terms.
    """
    table = params.corridors
    n = len(table.corridors)
    parts = np.zeros(h.shape[:-1] + (n,))
    for c in range(n):
        block = table.block(c)
        parts[..., c] = h[..., block] @ params.conn_seq[block]
    return parts
