"""Evaluation metrics: rank-based AUC, weighted F1, coefficient of determination."""

from __future__ import annotations

import numpy as np
from scipy.stats import rankdata


def auc_roc(scores, labels) -> float:
    """Area under the ROC curve via the Mann-Whitney statistic.

    Equals the probability that a random positive outscores a random
    negative, ties counted one half. Midranks make that exact without the
    O(n^2) pair loop. Raises on single-class labels (the area is undefined).
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    if scores.shape != labels.shape or scores.ndim != 1:
        raise ValueError("scores and labels must be matching 1-d arrays")
    pos = labels == 1.0
    n_pos = int(pos.sum())
    n_neg = int(scores.shape[0] - n_pos)
    if n_pos == 0 or n_neg == 0:
        raise ValueError("auc_roc needs both classes present")
    ranks = rankdata(scores)  # average rank on ties
    rank_sum = float(ranks[pos].sum())
    return (rank_sum - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


def f1_weighted(scores, labels, threshold: float = 0.5) -> float:
    """Support-weighted mean of the two per-class F1 scores.

    Predictions are scores >= threshold. A class whose precision and recall
    are both empty (no predictions and no members) contributes F1 = 0, the
    usual zero-division convention.
    """
    scores = np.asarray(scores, dtype=np.float64)
    labels = np.asarray(labels, dtype=np.float64)
    pred = (scores >= threshold).astype(np.float64)
    total = labels.shape[0]
    if total == 0:
        raise ValueError("empty inputs")
    weighted = 0.0
    for cls in (0.0, 1.0):
        tp = float(((pred == cls) & (labels == cls)).sum())
        fp = float(((pred == cls) & (labels != cls)).sum())
        fn = float(((pred != cls) & (labels == cls)).sum())
        support = tp + fn
        denom = 2.0 * tp + fp + fn
        f1 = 2.0 * tp / denom if denom > 0 else 0.0
        weighted += f1 * support / total
    return weighted


def r_squared(predictions, targets) -> float:
    """1 - SS_res / SS_tot. Undefined (raises) for constant targets."""
    y_pred = np.asarray(predictions, dtype=np.float64)
    y_true = np.asarray(targets, dtype=np.float64)
    ss_tot = float(((y_true - y_true.mean()) ** 2).sum())
    if ss_tot == 0.0:
        raise ValueError("r_squared undefined for a constant target")
    ss_res = float(((y_true - y_pred) ** 2).sum())
    return 1.0 - ss_res / ss_tot
