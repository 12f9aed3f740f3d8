"""Hand-derived gradients: connection, shape nets, and BPTT through the cell.

Losses are means over the batch. For y in [0, 1] and logit z the binary
cross-entropy is written (1 - y) z + softplus(-z), whose z-gradient is
sigmoid(z) - y; squared error uses the identity head directly.
"""

from __future__ import annotations

import numpy as np
from scipy.special import expit as sigmoid

from .forward import ForwardCache, forward_batch
from .params import PatWayNetParams


def _softplus(x: np.ndarray) -> np.ndarray:
    # log(1 + e^x) without overflow for large |x|
    return np.maximum(x, 0.0) + np.log1p(np.exp(-np.abs(x)))


def batch_loss(params: PatWayNetParams, cache: ForwardCache, y: np.ndarray, loss: str):
    z = cache.logit
    if loss == "bce":
        if params.head != "sigmoid":
            raise ValueError("bce needs the sigmoid head")
        values = (1.0 - y) * z + _softplus(-z)
        dz = (sigmoid(z) - y) / y.shape[0]
        return float(values.mean()), dz
    if loss == "mse":
        resid = z - y
        return float((resid**2).mean()), 2.0 * resid / y.shape[0]
    raise ValueError(f"unknown loss {loss!r}")


def loss_and_grad(
    params: PatWayNetParams,
    x_static: np.ndarray,
    x_seq: np.ndarray,
    y: np.ndarray,
    loss: str,
) -> tuple[float, dict[str, np.ndarray]]:
    """Mean loss over a same-length batch and gradients for every tensor.

    Gradients of masked recurrence weights are forced to zero, so masked
    entries never move off exact zero under any optimizer.
    """
    cache = forward_batch(params, x_static, x_seq)
    y = np.asarray(y, dtype=np.float64)
    value, dz = batch_loss(params, cache, y, loss)

    B, t, _ = cache.x_seq.shape
    H = params.hidden_size

    grads: dict[str, np.ndarray] = {}
    grads["conn_static"] = cache.static_out.T @ dz
    grads["conn_seq"] = cache.hs[t].T @ dz
    grads["conn_bias"] = np.asarray(dz.sum())

    # static shape nets
    d_out = dz[:, None] * params.conn_static[None, :]  # (B, q)
    hid = cache.static_hidden
    grads["static_w2"] = np.einsum("bq,bqu->qu", d_out, hid)
    grads["static_b2"] = d_out.sum(axis=0)
    d_pre = d_out[:, :, None] * params.static_w2[None] * (1.0 - hid**2)
    grads["static_w1"] = np.einsum("bqu,bq->qu", d_pre, cache.x_static)
    grads["static_b1"] = d_pre.sum(axis=0)

    # recurrence
    wh = params.wh * params.gate_mask_h()
    g_wx = np.zeros_like(params.wx)
    g_wh = np.zeros_like(params.wh)
    g_b = np.zeros_like(params.b)
    dh = dz[:, None] * params.conn_seq[None, :]  # (B, H)
    dc = np.zeros((B, H))
    da = np.zeros((B, 4 * H))
    for step in range(t - 1, -1, -1):
        f, i, o, g = cache.gates[step]
        tc = np.tanh(cache.cs[step + 1])
        do = dh * tc
        dc = dc + dh * o * (1.0 - tc**2)
        df = dc * cache.cs[step]
        di = dc * g
        dg = dc * i
        da[:, :H] = df * f * (1.0 - f)
        da[:, H : 2 * H] = di * i * (1.0 - i)
        da[:, 2 * H : 3 * H] = do * o * (1.0 - o)
        da[:, 3 * H :] = dg * (1.0 - g**2)
        g_wx += cache.x_seq[:, step, :].T @ da
        g_wh += cache.hs[step].T @ da
        g_b += da.sum(axis=0)
        dh = da @ wh.T
        dc = dc * f
    grads["wx"] = g_wx * params.gate_mask_x()
    grads["wh"] = g_wh * params.gate_mask_h()
    grads["b"] = g_b
    return value, grads
