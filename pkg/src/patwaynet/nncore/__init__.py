"""Differentiable engine: parameters, forward, hand-derived backward, Adam."""

from .backward import batch_loss, loss_and_grad
from .checkpoint import (
    CheckpointError,
    load_baseline,
    load_checkpoint,
    read_checkpoint,
    save_baseline,
    save_checkpoint,
)
from .forward import (
    ForwardCache,
    corridor_effects,
    forward_batch,
    ilstm_step,
    masked_linear,
    predict_dataset,
    sigmoid,
    static_effects,
)
from .optim import AdamState, adam_step
from .params import (
    Corridor,
    CorridorTable,
    PatWayNetParams,
    corridor_table_for,
    init_params,
    unrestricted_table,
)
from .training import TrainConfig, TrainResult, train

__all__ = [
    "AdamState",
    "CheckpointError",
    "Corridor",
    "CorridorTable",
    "ForwardCache",
    "PatWayNetParams",
    "TrainConfig",
    "TrainResult",
    "adam_step",
    "batch_loss",
    "corridor_effects",
    "corridor_table_for",
    "forward_batch",
    "ilstm_step",
    "init_params",
    "load_baseline",
    "load_checkpoint",
    "loss_and_grad",
    "masked_linear",
    "predict_dataset",
    "read_checkpoint",
    "save_baseline",
    "save_checkpoint",
    "sigmoid",
    "static_effects",
    "train",
    "unrestricted_table",
]
