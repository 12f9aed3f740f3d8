"""Mini-batch training over prefix rows with early stopping on validation.

Batches are bucketed: rows sharing a prefix length are grouped so the
recurrence never sees padding. Classification tracks validation AUC (higher
is better), regression tracks validation MSE (lower is better). The best
epoch's parameters are returned, not the last.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..metrics import auc_roc
from .backward import loss_and_grad
from .forward import predict_dataset
from .optim import AdamState, adam_step
from .params import PatWayNetParams


@dataclass
class TrainConfig:
    lr: float = 0.001
    batch_size: int = 32
    max_epochs: int = 100
    patience: int = 10
    loss: str = "bce"  # "bce" | "mse"
    seed: int = 0
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8


@dataclass
class TrainResult:
    params: PatWayNetParams
    best_epoch: int
    history: list[dict] = field(default_factory=list)


def _bucketed_batches(prefix_len: np.ndarray, batch_size: int, rng) -> list[np.ndarray]:
    perm = rng.permutation(prefix_len.shape[0])
    by_len: dict[int, list[int]] = {}
    for i in perm:
        by_len.setdefault(int(prefix_len[i]), []).append(int(i))
    batches = []
    for t in sorted(by_len):
        idx = by_len[t]
        for start in range(0, len(idx), batch_size):
            batches.append(np.asarray(idx[start : start + batch_size], dtype=np.int64))
    order = rng.permutation(len(batches))
    return [batches[i] for i in order]


def _val_metric(params: PatWayNetParams, ds, loss: str) -> float:
    scores = predict_dataset(params, ds)
    if loss == "bce":
        return auc_roc(scores, ds.y)
    return float(((scores - ds.y) ** 2).mean())


def train(
    params: PatWayNetParams, train_ds, val_ds, config: TrainConfig
) -> TrainResult:
    """Adam over bucketed mini-batches; stops once the validation metric has
    not improved for `patience` consecutive epochs. Deterministic for a fixed
    seed: the same data and config reproduce the history bit for bit."""
    if config.loss == "bce" and params.head != "sigmoid":
        raise ValueError("bce loss needs the sigmoid head")
    if config.loss == "mse" and params.head != "identity":
        raise ValueError("mse loss needs the identity head")
    if config.loss == "bce":
        for name, ds in (("train", train_ds), ("val", val_ds)):
            if np.unique(ds.y).shape[0] < 2:
                raise ValueError(f"{name} set has a single class")

    rng = np.random.default_rng(config.seed)
    adam = AdamState(lr=config.lr, beta1=config.beta1, beta2=config.beta2, eps=config.eps)
    higher_better = config.loss == "bce"
    best_params = params.copy()
    best_metric = -np.inf if higher_better else np.inf
    best_epoch = 0
    stale = 0
    history: list[dict] = []

    for epoch in range(1, config.max_epochs + 1):
        total = 0.0
        count = 0
        for batch in _bucketed_batches(train_ds.prefix_len, config.batch_size, rng):
            t = int(train_ds.prefix_len[batch[0]])
            value, grads = loss_and_grad(
                params,
                train_ds.x_static[batch],
                train_ds.x_seq[batch, :t, :],
                train_ds.y[batch],
                config.loss,
            )
            adam_step(params, grads, adam)
            total += value * batch.shape[0]
            count += batch.shape[0]
        val = _val_metric(params, val_ds, config.loss)
        history.append({"epoch": epoch, "train_loss": total / count, "val_metric": val})
        improved = val > best_metric if higher_better else val < best_metric
        if improved:
            best_metric = val
            best_epoch = epoch
            best_params = params.copy()
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    return TrainResult(params=best_params, best_epoch=best_epoch, history=history)
