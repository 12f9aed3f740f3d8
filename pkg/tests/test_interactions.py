"""Boosted-tree proxy and pair screening against enumeration oracles."""

from itertools import combinations

import numpy as np
import pytest

from patwaynet.encoding import EncodedDataset
from patwaynet.interactions import (
    InteractionError,
    detect_interactions,
    fit_gbdt,
    pair_matrix,
)
from patwaynet.metrics import auc_roc

_EPS = 1e-16


def _brute_force_root(x, g, h):
    """Enumerate every feature and midpoint; first strict improvement wins.

    Scanning features ascending and thresholds ascending with a strict >
    comparison reproduces the library's tie rules by construction.
    """
    best = None
    G, H = g.sum(), h.sum()
    for f in range(x.shape[1]):
        xs = np.unique(x[:, f])
        for lo, hi in zip(xs[:-1], xs[1:]):
            thr = (lo + hi) / 2.0
            left = x[:, f] <= thr
            gl, hl = g[left].sum(), h[left].sum()
            gr, hr = G - gl, H - hl
            gain = gl**2 / (hl + _EPS) + gr**2 / (hr + _EPS) - G**2 / (H + _EPS)
            if best is None or gain > best[0]:
                best = (gain, f, thr)
    return best


def _first_iteration_grad(y):
    prior = float(np.clip(y.mean(), 1e-6, 1.0 - 1e-6))
    base = np.log(prior / (1.0 - prior))
    p = 1.0 / (1.0 + np.exp(-base))
    g = np.full(y.shape, p) - y
    h = np.maximum(np.full(y.shape, p * (1.0 - p)), _EPS)
    return base, g, h


def test_root_split_matches_enumeration_oracle():
    rng = np.random.default_rng(21)
    for trial in range(20):
        x = rng.uniform(0, 1, size=(40, 3))
        y = rng.integers(0, 2, size=40).astype(float)
        if y.min() == y.max():
            continue
        booster = fit_gbdt(x, y, n_trees=1, max_depth=1)
        root = booster.trees[0].nodes[0]
        _, g, h = _first_iteration_grad(y)
        gain, feature, threshold = _brute_force_root(x, g, h)
        assert root.feature == feature
        assert abs(root.threshold - threshold) < 1e-12


def test_leaf_values_match_newton_step():
    rng = np.random.default_rng(22)
    x = rng.uniform(0, 1, size=(50, 2))
    y = (x[:, 0] > 0.4).astype(float)
    booster = fit_gbdt(x, y, n_trees=1, max_depth=1)
    root = booster.trees[0].nodes[0]
    assert not root.is_leaf
    _, g, h = _first_iteration_grad(y)
    left = x[:, root.feature] <= root.threshold
    for mask, node_id in ((left, root.left), (~left, root.right)):
        expected = -g[mask].sum() / (h[mask].sum() + _EPS)
        assert abs(booster.trees[0].nodes[node_id].value - expected) < 1e-12


def test_gain_tie_keeps_lowest_feature_index():
    x = np.asarray([[0.0, 0.0, 0.7], [1.0, 1.0, 0.1], [2.0, 2.0, 0.4], [3.0, 3.0, 0.9]])
    y = np.asarray([1.0, 1.0, 0.0, 0.0])
    # columns 0 and 1 are identical, so their gains tie bitwise
    booster = fit_gbdt(x, y, n_trees=1, max_depth=1)
    assert booster.trees[0].nodes[0].feature == 0


def test_gain_tie_keeps_lowest_threshold():
    # y symmetric in x: cutting at 0.5 and at 2.5 give bitwise-equal gains
    x = np.asarray([[0.0], [1.0], [2.0], [3.0]])
    y = np.asarray([1.0, 0.0, 0.0, 1.0])
    booster = fit_gbdt(x, y, n_trees=1, max_depth=1)
    root = booster.trees[0].nodes[0]
    assert abs(root.threshold - 0.5) < 1e-12


def test_prediction_is_sigmoid_of_accumulated_margins():
    rng = np.random.default_rng(23)
    x = rng.uniform(0, 1, size=(60, 3))
    y = (x[:, 1] > 0.5).astype(float)
    booster = fit_gbdt(x, y, n_trees=5, max_depth=2, learning_rate=0.3)
    margin = np.full(60, booster.base_score)
    for tree in booster.trees:
        margin += 0.3 * tree.predict(x)
    assert np.max(np.abs(booster.predict_margin(x) - margin)) == 0.0
    assert np.max(np.abs(booster.predict_proba(x) - 1.0 / (1.0 + np.exp(-margin)))) < 1e-15


def test_depth_two_learns_xor_but_stumps_cannot():
    rng = np.random.default_rng(24)
    x = rng.integers(0, 2, size=(200, 2)).astype(float)
    y = np.logical_xor(x[:, 0] > 0.5, x[:, 1] > 0.5).astype(float)
    deep = fit_gbdt(x, y, n_trees=20, max_depth=2)
    assert auc_roc(deep.predict_proba(x), y) > 0.95
    shallow = fit_gbdt(x, y, n_trees=20, max_depth=1)
    assert auc_roc(shallow.predict_proba(x), y) < 0.6


def test_single_class_degenerates_to_prior():
    x = np.random.default_rng(25).uniform(0, 1, size=(30, 2))
    booster = fit_gbdt(x, np.zeros(30), n_trees=3, max_depth=2)
    proba = booster.predict_proba(x)
    assert np.max(np.abs(proba - proba[0])) < 1e-9
    assert proba[0] < 1e-5


def test_fit_gbdt_input_validation():
    with pytest.raises(InteractionError) as err:
        fit_gbdt(np.zeros((0, 2)), np.zeros(0))
    assert err.value.code == "empty_input"
    with pytest.raises(InteractionError) as err:
        fit_gbdt(np.zeros((4, 2)), np.zeros(3))
    assert err.value.code == "length_mismatch"


def _pair_dataset(n=240, t=6, p=4, seed=0):
    """Channels 0 and 2 jointly determine the label (logical AND at the end)."""
    rng = np.random.default_rng(seed)
    x_seq = rng.uniform(0, 1, size=(n, t, p))
    y = ((x_seq[:, -1, 0] > 0.5) & (x_seq[:, -1, 2] > 0.5)).astype(float)
    return EncodedDataset(
        x_static=np.zeros((n, 1)),
        x_seq=x_seq,
        y=y,
        prefix_len=np.full(n, t, dtype=np.int64),
        pathway_of=np.array([f"p{i}" for i in range(n)], dtype=object),
        static_features=[("s0", "numeric")],
        sequential_features=[(f"c{j}", "numeric") for j in range(p)],
        task="classification",
        schema_hash="h",
        timelines={},
    )


def test_pair_matrix_layout():
    ds = _pair_dataset(n=5, t=3, p=4, seed=1)
    m = pair_matrix(ds, 1, 3)
    assert m.shape == (5, 6)
    assert np.array_equal(m[:, :3], ds.x_seq[:, :, 1])
    assert np.array_equal(m[:, 3:], ds.x_seq[:, :, 3])


def test_planted_pair_is_the_ground_truth_optimum():
    # oracle route: min of the two final values separates an AND perfectly,
    # so the planted pair is the unique pair with oracle AUC 1.0
    ds = _pair_dataset(seed=2)
    best = {}
    for j, k in combinations(range(4), 2):
        stat = np.minimum(ds.x_seq[:, -1, j], ds.x_seq[:, -1, k])
        best[(j, k)] = auc_roc(stat, ds.y)
    assert max(best, key=best.get) == (0, 2)
    assert best[(0, 2)] == 1.0
    assert all(v < 0.95 for pair, v in best.items() if pair != (0, 2))


def test_detection_recovers_planted_pair_across_seeds():
    hits = 0
    for seed in range(5):
        ds = _pair_dataset(seed=100 + seed)
        report = detect_interactions(ds, top_k=1, budget=10, seed=seed, n_trees=40, max_depth=3)
        if tuple(report["selected"][0]["pair"]) == (0, 2):
            hits += 1
    assert hits >= 4


def test_detection_report_shape_and_ranking():
    ds = _pair_dataset(seed=3)
    report = detect_interactions(ds, top_k=2, budget=100, seed=0, n_trees=30, max_depth=3)
    assert report["n_pairs_total"] == 6
    assert report["budget"] == 6
    assert len(report["evaluated"]) == 6
    assert len(report["selected"]) == 2
    keys = [(-r["auc"], r["draw"]) for r in report["evaluated"]]
    assert keys == sorted(keys)
    assert report["selected"][0] == report["evaluated"][0]
    assert report["selected"][0]["names"] == ("c0", "c2")


def test_detection_budget_caps_screened_pairs():
    ds = _pair_dataset(p=6, seed=4)
    report = detect_interactions(ds, budget=7, seed=0, n_trees=10, max_depth=2)
    assert report["n_pairs_total"] == 15
    assert report["budget"] == 7
    assert len(report["evaluated"]) == 7
    draws = {r["draw"] for r in report["evaluated"]}
    assert draws == set(range(7))


def test_detection_is_deterministic():
    ds = _pair_dataset(seed=5)
    a = detect_interactions(ds, top_k=1, budget=10, seed=9, n_trees=20, max_depth=2)
    b = detect_interactions(ds, top_k=1, budget=10, seed=9, n_trees=20, max_depth=2)
    assert a == b
    c = detect_interactions(ds, top_k=1, budget=10, seed=10, n_trees=20, max_depth=2)
    assert [r["pair"] for r in c["evaluated"]] != [r["pair"] for r in a["evaluated"]] or c != a


def test_detection_input_validation():
    ds = _pair_dataset(seed=6)
    reg = EncodedDataset(
        x_static=ds.x_static, x_seq=ds.x_seq, y=ds.y, prefix_len=ds.prefix_len,
        pathway_of=ds.pathway_of, static_features=ds.static_features,
        sequential_features=ds.sequential_features, task="regression",
        schema_hash="h", timelines={},
    )
    with pytest.raises(InteractionError) as err:
        detect_interactions(reg)
    assert err.value.code == "needs_classification"

    narrow = EncodedDataset(
        x_static=ds.x_static, x_seq=ds.x_seq[:, :, :1], y=ds.y, prefix_len=ds.prefix_len,
        pathway_of=ds.pathway_of, static_features=ds.static_features,
        sequential_features=ds.sequential_features[:1], task="classification",
        schema_hash="h", timelines={},
    )
    with pytest.raises(InteractionError) as err:
        detect_interactions(narrow)
    assert err.value.code == "too_few_channels"

    flat = EncodedDataset(
        x_static=ds.x_static, x_seq=ds.x_seq, y=np.zeros_like(ds.y), prefix_len=ds.prefix_len,
        pathway_of=ds.pathway_of, static_features=ds.static_features,
        sequential_features=ds.sequential_features, task="classification",
        schema_hash="h", timelines={},
    )
    with pytest.raises(InteractionError) as err:
        detect_interactions(flat)
    assert err.value.code == "single_class"
