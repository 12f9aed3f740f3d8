"""Cross-validated model comparison.

Five-fold pathway-stratified cross validation, repeated over seeds, with a
grid search per fold on an inner 80/20 train/validation split. Reports keep
every raw cell so aggregates can be recomputed and audited.
"""

from __future__ import annotations

import warnings
from itertools import product

import numpy as np

from .baselines import CLASSIFIER_KINDS, fit_baseline, predict_baseline
from .encoding import EncodedDataset, pathway_partition_indices, split_by_pathway
from .metrics import auc_roc, f1_weighted
from .nncore.forward import predict_dataset
from .nncore.params import corridor_table_for, init_params
from .nncore.training import TrainConfig, train

REPORT_FORMAT = "patwaynet-cv-report"
REPORT_VERSION = 1


class EvalError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def expand_grid(axes: dict) -> list[dict]:
    """Cartesian product of named value lists, insertion order preserved."""
    if not axes:
        return [{}]
    names = list(axes.keys())
    combos = [dict(zip(names, values)) for values in product(*(axes[n] for n in names))]
    if not combos:
        raise EvalError("empty_grid", "grid product is empty")
    return combos


def stratified_kfold(ds: EncodedDataset, k: int = 5, seed: int = 0) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pathway-level stratified folds as (train_rows, test_rows) pairs.

    Pathways of each class are shuffled then dealt round-robin, so per-fold
    class counts differ by at most one pathway.
    """
    if ds.task != "classification":
        raise EvalError("needs_classification", f"task is {ds.task}")
    ids = ds.pathway_ids()
    if len(ids) < k:
        raise EvalError("too_few_pathways", f"{len(ids)} pathways for {k} folds")
    label = ds.pathway_label()
    groups: dict[float, list[str]] = {}
    for pid in ids:
        groups.setdefault(label[pid], []).append(pid)
    rng = np.random.default_rng(seed)
    fold_of: dict[str, int] = {}
    for cls in sorted(groups):
        members = groups[cls]
        if len(members) < k:
            raise EvalError("class_too_small", f"class {cls}: {len(members)} pathways < {k} folds")
        perm = rng.permutation(len(members))
        for pos, i in enumerate(perm):
            fold_of[members[i]] = pos % k
    folds = []
    row_fold = np.array([fold_of[pid] for pid in ds.pathway_of])
    for f in range(k):
        test = np.flatnonzero(row_fold == f)
        trainr = np.flatnonzero(row_fold != f)
        folds.append((trainr, test))
    return folds


def fit_model(
    kind: str,
    train_ds: EncodedDataset,
    val_ds: EncodedDataset,
    hp: dict,
    seed: int,
    interactions: list[tuple[int, int]] | None = None,
):
    """Train any supported model kind with a uniform hp dict."""
    if kind == "patwaynet":
        corridors = corridor_table_for(
            train_ds.x_seq.shape[2],
            int(hp.get("hidden_seq", 1)),
            [c for c, _ in train_ds.sequential_features],
            interactions,
        )
        params = init_params(
            n_static=train_ds.x_static.shape[1],
            n_channels=train_ds.x_seq.shape[2],
            h_stat=int(hp.get("hidden_stat", 8)),
            corridors=corridors,
            head="sigmoid" if train_ds.task == "classification" else "identity",
            seed=seed,
        )
        cfg = TrainConfig(
            lr=float(hp.get("lr", 0.001)),
            batch_size=int(hp.get("batch_size", 32)),
            max_epochs=int(hp.get("max_epochs", 100)),
            patience=int(hp.get("patience", 10)),
            loss="bce" if train_ds.task == "classification" else "mse",
            seed=seed,
        )
        return train(params, train_ds, val_ds, cfg).params
    return fit_baseline(kind, train_ds, hp, seed=seed, val_ds=val_ds)


def predict_model(model, ds: EncodedDataset) -> np.ndarray:
    if hasattr(model, "kind"):
        return predict_baseline(model, ds)
    return predict_dataset(model, ds)


def grid_search(
    kind: str,
    grid: list[dict],
    train_star: EncodedDataset,
    val: EncodedDataset,
    base_seed: int = 0,
    interactions: list[tuple[int, int]] | None = None,
):
    """Fit every configuration on train*, keep the best validation AUC.

    Ties keep the earliest configuration. Per-configuration seeds are
    base_seed XOR the configuration index, so adding configurations leaves
    existing ones untouched. A configuration that fails to fit is skipped
    with a warning; if all fail the search errors.
    """
    if not grid:
        raise EvalError("empty_grid", "no configurations to search")
    best = None
    val_scores: list[float | None] = []
    for cfg_idx, hp in enumerate(grid):
        try:
            model = fit_model(kind, train_star, val, hp, seed=base_seed ^ cfg_idx, interactions=interactions)
            score = auc_roc(predict_model(model, val), val.y)
        except Exception as exc:  # noqa: BLE001 - a bad config must not sink the search
            warnings.warn(f"{kind} config {cfg_idx} failed: {exc}")
            val_scores.append(None)
            continue
        val_scores.append(float(score))
        if best is None or score > best[0]:
            best = (float(score), cfg_idx, model)
    if best is None:
        raise EvalError("all_configs_failed", f"every {kind} configuration failed")
    score, cfg_idx, model = best
    return model, {"chosen_index": cfg_idx, "chosen": grid[cfg_idx], "val_auc": score, "grid_val_auc": val_scores}


def _aggregate(cells: list[dict]) -> dict:
    out = {}
    for key in ("val_auc", "val_f1", "test_auc", "test_f1"):
        vals = np.array([c[key] for c in cells], dtype=np.float64)
        out[key] = {"mean": float(vals.mean()), "sd": float(vals.std(ddof=1)) if vals.size > 1 else 0.0}
    return out


def evaluate(
    kind: str,
    ds: EncodedDataset,
    grid: list[dict],
    k: int = 5,
    seeds: int = 5,
    interactions: list[tuple[int, int]] | None = None,
    train_fraction: float = 1.0,
    progress=None,
) -> dict:
    """Repeated stratified cross validation with per-fold grid search.

    Each run seed redraws both the fold assignment and the inner split.
    ``train_fraction`` subsamples training pathways (never test) for
    learning-curve studies. The report keeps one cell per seed and fold;
    leakage between train and test pathways is audited into the report.
    """
    if not 0.0 < train_fraction <= 1.0:
        raise EvalError("bad_fraction", f"train_fraction {train_fraction} outside (0, 1]")
    cells = []
    overlaps = 0
    for run_seed in range(seeds):
        folds = stratified_kfold(ds, k, seed=run_seed)
        for fold_i, (train_rows, test_rows) in enumerate(folds):
            train_ds = ds.subset(train_rows)
            test_ds = ds.subset(test_rows)
            overlaps += len(set(train_ds.pathway_ids()) & set(test_ds.pathway_ids()))
            if train_fraction < 1.0:
                keep, _ = pathway_partition_indices(
                    train_ds, (train_fraction, 1.0 - train_fraction),
                    seed=np.random.default_rng([run_seed, fold_i, 1]),
                )
                train_ds = train_ds.subset(keep)
            train_star, val = split_by_pathway(
                train_ds, (0.8, 0.2), seed=np.random.default_rng([run_seed, fold_i])
            )
            model, info = grid_search(
                kind, grid, train_star, val,
                base_seed=run_seed ^ fold_i, interactions=interactions,
            )
            val_scores = predict_model(model, val)
            test_scores = predict_model(model, test_ds)
            cell = {
                "seed": run_seed,
                "fold": fold_i,
                "chosen_index": info["chosen_index"],
                "chosen": info["chosen"],
                "grid_val_auc": info["grid_val_auc"],
                "val_auc": info["val_auc"],
                "val_f1": float(f1_weighted(val_scores, val.y)),
                "test_auc": float(auc_roc(test_scores, test_ds.y)),
                "test_f1": float(f1_weighted(test_scores, test_ds.y)),
                "n_train_rows": int(train_star.n_rows),
                "n_test_rows": int(test_ds.n_rows),
            }
            cells.append(cell)
            if progress is not None:
                progress(kind, run_seed, fold_i, cell)
    return {
        "format": REPORT_FORMAT,
        "format_version": REPORT_VERSION,
        "model": kind,
        "k": k,
        "seeds": seeds,
        "train_fraction": train_fraction,
        "grid": grid,
        "interactions": [list(p) for p in interactions] if interactions else None,
        "schema_hash": ds.schema_hash,
        "n_rows": ds.n_rows,
        "cells": cells,
        "aggregates": _aggregate(cells),
        "leakage": {"pathway_overlaps": overlaps},
    }


def markdown_report(reports: list[dict]) -> str:
    """Comparison table, one row per model report, mean (+-sd) per metric."""
    lines = [
        "| Model | F1 val | F1 test | AUC val | AUC test |",
        "| --- | --- | --- | --- | --- |",
    ]

    def fmt(agg):
        return f"{agg['mean']:.3f} (+-{agg['sd']:.3f})"

    for rep in reports:
        a = rep["aggregates"]
        label = rep["model"] + (" +interactions" if rep.get("interactions") else "")
        lines.append(
            f"| {label} | {fmt(a['val_f1'])} | {fmt(a['test_f1'])} | {fmt(a['val_auc'])} | {fmt(a['test_auc'])} |"
        )
    return "\n".join(lines) + "\n"
