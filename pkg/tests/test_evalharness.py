"""Cross-validation harness: folds, grid search, reports, audits."""

import json

import numpy as np
import pytest

from patwaynet.encoding import EncodedDataset
from patwaynet.evalharness import (
    EvalError,
    evaluate,
    expand_grid,
    grid_search,
    markdown_report,
    stratified_kfold,
)


def _dataset(n_pathways=40, rows_per=3, seed=0, positives=None):
    """Classification set where each pathway contributes several prefix rows."""
    rng = np.random.default_rng(seed)
    n = n_pathways * rows_per
    x_static = np.zeros((n, 2))
    x_seq = np.zeros((n, rows_per, 2))
    y = np.zeros(n)
    prefix_len = np.zeros(n, dtype=np.int64)
    pathway_of = np.empty(n, dtype=object)
    if positives is None:
        positives = n_pathways // 2
    labels = np.array([1.0] * positives + [0.0] * (n_pathways - positives))
    signal = rng.uniform(0, 1, size=n_pathways)
    for pw in range(n_pathways):
        base = labels[pw] * 0.6 + signal[pw] * 0.4
        for r in range(rows_per):
            i = pw * rows_per + r
            pathway_of[i] = f"p{pw:03d}"
            prefix_len[i] = r + 1
            x_static[i] = [base + rng.normal(0, 0.05), rng.uniform(0, 1)]
            x_seq[i, : r + 1, 0] = base
            x_seq[i, : r + 1, 1] = rng.uniform(0, 1)
            y[i] = labels[pw]
    return EncodedDataset(
        x_static=x_static,
        x_seq=x_seq,
        y=y,
        prefix_len=prefix_len,
        pathway_of=pathway_of,
        static_features=[("a", "numeric"), ("b", "numeric")],
        sequential_features=[("c", "numeric"), ("d", "numeric")],
        task="classification",
        schema_hash="h",
        timelines={},
    )


def test_expand_grid_is_the_ordered_cartesian_product():
    grid = expand_grid({"a": [1, 2], "b": ["x", "y", "z"]})
    assert len(grid) == 6
    assert grid[0] == {"a": 1, "b": "x"}
    assert grid[1] == {"a": 1, "b": "y"}
    assert grid[-1] == {"a": 2, "b": "z"}
    assert expand_grid({}) == [{}]


def test_folds_partition_rows_exactly():
    ds = _dataset(n_pathways=23, rows_per=3, seed=1, positives=11)
    folds = stratified_kfold(ds, k=5, seed=0)
    assert len(folds) == 5
    all_test = np.concatenate([test for _, test in folds])
    assert sorted(all_test.tolist()) == list(range(ds.n_rows))
    for train_rows, test_rows in folds:
        assert np.intersect1d(train_rows, test_rows).size == 0
        assert train_rows.size + test_rows.size == ds.n_rows


def test_folds_are_pathway_atomic_and_stratified():
    ds = _dataset(n_pathways=40, rows_per=3, seed=2, positives=17)
    label = ds.pathway_label()
    folds = stratified_kfold(ds, k=5, seed=3)
    pos_counts, neg_counts = [], []
    for train_rows, test_rows in folds:
        train_ids = {str(p) for p in ds.pathway_of[train_rows]}
        test_ids = {str(p) for p in ds.pathway_of[test_rows]}
        assert not train_ids & test_ids
        pos_counts.append(sum(1 for pid in test_ids if label[pid] == 1.0))
        neg_counts.append(sum(1 for pid in test_ids if label[pid] == 0.0))
    # 17 positives over 5 folds: counts differ by at most one
    assert sorted(pos_counts) == [3, 3, 3, 4, 4]
    assert sorted(neg_counts) == [4, 4, 5, 5, 5]


def test_folds_depend_on_seed_deterministically():
    ds = _dataset(seed=4)
    a = stratified_kfold(ds, k=4, seed=7)
    b = stratified_kfold(ds, k=4, seed=7)
    c = stratified_kfold(ds, k=4, seed=8)
    for (ta, sa), (tb, sb) in zip(a, b):
        assert np.array_equal(ta, tb) and np.array_equal(sa, sb)
    assert any(not np.array_equal(sa, sc) for (_, sa), (_, sc) in zip(a, c))


def test_kfold_rejects_regression_and_tiny_classes():
    ds = _dataset(seed=5)
    reg = ds.subset(np.arange(ds.n_rows))
    reg.task = "regression"
    with pytest.raises(EvalError) as err:
        stratified_kfold(reg)
    assert err.value.code == "needs_classification"
    small = _dataset(n_pathways=10, positives=2, seed=6)
    with pytest.raises(EvalError) as err:
        stratified_kfold(small, k=5)
    assert err.value.code == "class_too_small"


def test_grid_search_tie_keeps_first_configuration():
    ds = _dataset(seed=7)
    rows = np.arange(ds.n_rows)
    train, val = ds.subset(rows[rows % 2 == 0]), ds.subset(rows[rows % 2 == 1])
    # identical configurations tie exactly; the earliest index must win
    grid = [{"max_depth": 2}, {"max_depth": 2}, {"max_depth": 2}]
    _, info = grid_search("tree", grid, train, val, base_seed=0)
    aucs = info["grid_val_auc"]
    assert aucs[0] == aucs[1] == aucs[2]
    assert info["chosen_index"] == 0
    assert info["chosen"] == {"max_depth": 2}


def test_grid_search_skips_failing_configs_with_a_warning():
    ds = _dataset(seed=8)
    rows = np.arange(ds.n_rows)
    train, val = ds.subset(rows[rows % 2 == 0]), ds.subset(rows[rows % 2 == 1])
    grid = [{"snapshot": "broken"}, {"max_depth": 2}]
    with pytest.warns(UserWarning, match="config 0 failed"):
        _, info = grid_search("tree", grid, train, val)
    assert info["grid_val_auc"][0] is None
    assert info["chosen_index"] == 1

    with pytest.raises(EvalError) as err:
        with pytest.warns(UserWarning):
            grid_search("tree", [{"snapshot": "broken"}], train, val)
    assert err.value.code == "all_configs_failed"


def test_evaluate_report_is_complete_and_leak_free():
    ds = _dataset(n_pathways=40, rows_per=3, seed=9)
    report = evaluate("logreg", ds, [{"l2_strength": 1.0}], k=4, seeds=2)
    assert report["format"] == "patwaynet-cv-report"
    assert report["format_version"] == 1
    assert report["model"] == "logreg"
    assert len(report["cells"]) == 8
    assert report["leakage"]["pathway_overlaps"] == 0
    seen = {(c["seed"], c["fold"]) for c in report["cells"]}
    assert seen == {(s, f) for s in range(2) for f in range(4)}
    json.dumps(report)  # report must be serializable as produced


def test_evaluate_aggregates_recompute_from_cells():
    ds = _dataset(n_pathways=36, rows_per=2, seed=10)
    report = evaluate("tree", ds, [{"max_depth": 2}, {"max_depth": 3}], k=3, seeds=2)
    for key in ("val_auc", "val_f1", "test_auc", "test_f1"):
        vals = np.array([c[key] for c in report["cells"]])
        assert abs(report["aggregates"][key]["mean"] - vals.mean()) < 1e-12
        assert abs(report["aggregates"][key]["sd"] - vals.std(ddof=1)) < 1e-12


def test_evaluate_is_bitwise_reproducible():
    ds = _dataset(n_pathways=30, rows_per=2, seed=11)
    a = evaluate("nb", ds, [{}], k=3, seeds=2)
    b = evaluate("nb", ds, [{}], k=3, seeds=2)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_evaluate_train_fraction_shrinks_training_only():
    ds = _dataset(n_pathways=40, rows_per=3, seed=12)
    full = evaluate("logreg", ds, [{}], k=4, seeds=1)
    half = evaluate("logreg", ds, [{}], k=4, seeds=1, train_fraction=0.5)
    for cf, ch in zip(full["cells"], half["cells"]):
        assert ch["n_train_rows"] < cf["n_train_rows"]
        assert ch["n_test_rows"] == cf["n_test_rows"]
    with pytest.raises(EvalError) as err:
        evaluate("logreg", ds, [{}], train_fraction=0.0)
    assert err.value.code == "bad_fraction"


def test_evaluate_runs_the_pathway_network_kind():
    ds = _dataset(n_pathways=24, rows_per=2, seed=13)
    report = evaluate(
        "patwaynet", ds,
        [{"hidden_seq": 2, "hidden_stat": 4, "lr": 0.01, "max_epochs": 3, "patience": 3}],
        k=3, seeds=1,
    )
    assert len(report["cells"]) == 3
    assert all(0.0 <= c["test_auc"] <= 1.0 for c in report["cells"])


def test_markdown_report_layout():
    ds = _dataset(n_pathways=30, rows_per=2, seed=14)
    rep = evaluate("nb", ds, [{}], k=3, seeds=1)
    rep2 = evaluate("tree", ds, [{"max_depth": 2}], k=3, seeds=1, interactions=[(0, 1)])
    text = markdown_report([rep, rep2])
    lines = text.strip().split("\n")
    assert lines[0] == "| Model | F1 val | F1 test | AUC val | AUC test |"
    assert lines[1] == "| --- | --- | --- | --- | --- |"
    assert lines[2].startswith("| nb | ")
    assert lines[3].startswith("| tree +interactions | ")
    assert "(+-" in lines[2]
    assert len(lines) == 4
