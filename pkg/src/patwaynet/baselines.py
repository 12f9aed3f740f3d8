"""Reference models the pathway network is compared against.

Shallow baselines see a snapshot per row (static features plus the last
encoded step of the sequence); the recurrent baseline sees the same inputs
as the pathway network but with a single unrestricted corridor, so its
hidden state may mix every channel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from sklearn.linear_model import Lasso, LogisticRegression, Ridge
from sklearn.naive_bayes import GaussianNB
from sklearn.neighbors import KNeighborsClassifier
from sklearn.tree import DecisionTreeClassifier, DecisionTreeRegressor

from .encoding import EncodedDataset
from .nncore.forward import predict_dataset
from .nncore.params import init_params, unrestricted_table
from .nncore.training import TrainConfig, train

CLASSIFIER_KINDS = ("logreg", "tree", "knn", "nb", "lstm")
REGRESSOR_KINDS = ("ridge", "lasso", "tree_reg")


class BaselineError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def snapshot_inputs(ds: EncodedDataset) -> np.ndarray:
    """Static vector joined with the sequence's final encoded step, per row."""
    last = ds.x_seq[np.arange(ds.n_rows), ds.prefix_len - 1, :]
    return np.concatenate([ds.x_static, last], axis=1)


def event_snapshot_inputs(ds: EncodedDataset) -> np.ndarray:
    """Memoryless snapshot: statics plus the row's final event only.

    Carried measurement channels are zeroed unless the final event is that
    measurement itself, so no sequential state leaks into the features.
    Needs per-pathway timelines on the dataset.
    """
    if not ds.timelines:
        raise BaselineError("no_timelines", "dataset was saved without timelines")
    last = ds.x_seq[np.arange(ds.n_rows), ds.prefix_len - 1, :].copy()
    carried = [i for i, (_, kind) in enumerate(ds.sequential_features) if kind == "numeric"]
    names = [c for c, _ in ds.sequential_features]
    for row in range(ds.n_rows):
        timeline = ds.timelines[ds.pathway_of[row]]
        current = timeline[ds.prefix_len[row] - 1][0]
        for ch in carried:
            if names[ch] != current:
                last[row, ch] = 0.0
    return np.concatenate([ds.x_static, last], axis=1)


@dataclass
class BaselineModel:
    kind: str
    task: str
    model: object
    hp: dict = field(default_factory=dict)


def _check_labels(ds: EncodedDataset, kind: str):
    if kind in CLASSIFIER_KINDS and np.unique(ds.y).size < 2:
        raise BaselineError("single_class", f"{kind} needs both classes in training labels")


def fit_baseline(
    kind: str,
    train_ds: EncodedDataset,
    hp: dict | None = None,
    seed: int = 0,
    val_ds: EncodedDataset | None = None,
) -> BaselineModel:
    hp = dict(hp or {})
    if kind not in CLASSIFIER_KINDS + REGRESSOR_KINDS:
        raise BaselineError("unknown_model", f"no baseline named {kind!r}")
    task = "classification" if kind in CLASSIFIER_KINDS else "regression"
    _check_labels(train_ds, kind)

    if kind == "lstm":
        hidden = int(hp.get("hidden_size", 8))
        corridors = unrestricted_table(train_ds.x_seq.shape[2], hidden)
        params = init_params(
            n_static=train_ds.x_static.shape[1],
            n_channels=train_ds.x_seq.shape[2],
            h_stat=int(hp.get("h_stat", 8)),
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
        result = train(params, train_ds, val_ds if val_ds is not None else train_ds, cfg)
        return BaselineModel("lstm", train_ds.task, result.params, hp)

    snapshot = hp.get("snapshot", "carried")
    if snapshot not in ("carried", "event"):
        raise BaselineError("bad_snapshot", f"snapshot must be carried or event, got {snapshot!r}")
    x = snapshot_inputs(train_ds) if snapshot == "carried" else event_snapshot_inputs(train_ds)
    y = train_ds.y
    if kind == "logreg":
        strength = float(hp.get("l2_strength", 1.0))
        est = LogisticRegression(C=1.0 / strength, max_iter=1000, random_state=seed)
    elif kind == "tree":
        est = DecisionTreeClassifier(
            criterion="gini", max_depth=int(hp.get("max_depth", 3)), random_state=seed
        )
    elif kind == "knn":
        est = KNeighborsClassifier(n_neighbors=int(hp.get("n_neighbors", 5)))
    elif kind == "nb":
        est = GaussianNB(var_smoothing=float(hp.get("var_smoothing", 1e-9)))
    elif kind == "ridge":
        est = Ridge(alpha=float(hp.get("alpha", 1.0)), random_state=seed)
    elif kind == "lasso":
        est = Lasso(alpha=float(hp.get("alpha", 1.0)), random_state=seed)
    else:  # tree_reg
        est = DecisionTreeRegressor(max_depth=int(hp.get("max_depth", 3)), random_state=seed)
    est.fit(x, y if task == "regression" else y.astype(int))
    return BaselineModel(kind, task, est, hp)


def predict_baseline(model: BaselineModel, ds: EncodedDataset) -> np.ndarray:
    """Scores per row: P(label=1) for classifiers, the value for regressors."""
    if model.kind == "lstm":
        return predict_dataset(model.model, ds)
    x = snapshot_inputs(ds) if model.hp.get("snapshot", "carried") == "carried" else event_snapshot_inputs(ds)
    if model.task == "regression":
        return np.asarray(model.model.predict(x), dtype=np.float64)
    proba = model.model.predict_proba(x)
    classes = list(model.model.classes_)
    if 1 in classes:
        return np.asarray(proba[:, classes.index(1)], dtype=np.float64)
    return np.zeros(x.shape[0])
