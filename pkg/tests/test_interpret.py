"""Interpretation artifacts: exactness, locality, additivity, bundles."""

import json
import os

import numpy as np
import pytest

from patwaynet.encoding import EncodedDataset
from patwaynet.interpret import (
    ExportConfig,
    InterpretError,
    development,
    export_bundle,
    importance,
    interaction_surface,
    mean_sequential_shape,
    sequential_shape,
    static_shape,
    transition,
    urgency_band,
)
from patwaynet.nncore import corridor_table_for, corridor_effects, forward_batch, init_params


def _params(q=2, p=3, h_stat=3, m=2, interactions=((0, 2),), seed=0):
    table = corridor_table_for(p, m, [f"c{j}" for j in range(p)], list(interactions) if interactions else None)
    return init_params(q, p, h_stat, table, "sigmoid", seed)


def _dataset(n=30, t=5, q=2, p=3, seed=1, task="classification"):
    rng = np.random.default_rng(seed)
    lengths = rng.integers(2, t + 1, size=n).astype(np.int64)
    x_seq = rng.uniform(0, 1, size=(n, t, p))
    for i, L in enumerate(lengths):
        x_seq[i, L:, :] = 0.0
    y = rng.integers(0, 2, size=n).astype(float)
    return EncodedDataset(
        x_static=rng.uniform(0, 1, size=(n, q)),
        x_seq=x_seq,
        y=y,
        prefix_len=lengths,
        pathway_of=np.array([f"p{i}" for i in range(n)], dtype=object),
        static_features=[("age", "numeric"), ("sex", "binary")][:q],
        sequential_features=[("c0", "numeric"), ("c1", "binary"), ("c2", "numeric")][:p],
        task=task,
        schema_hash="h",
        timelines={f"p{i}": [("A", f"2024-01-01T0{min(s, 9)}:00:00") for s in range(int(L))]
                   for i, L in enumerate(lengths)},
    )


def test_static_shape_is_the_connection_weighted_mlp():
    params = _params(seed=2)
    grid = np.linspace(0, 1, 7)
    shape = static_shape(params, 0, grid)
    # direct evaluation of the per-feature net, independently of the library path
    for gi, v in enumerate(grid):
        hid = np.tanh(v * params.static_w1[0] + params.static_b1[0])
        out = float(hid @ params.static_w2[0] + params.static_b2[0])
        assert abs(shape[gi] - params.conn_static[0] * out) < 1e-12


def test_additive_decomposition_reconstructs_the_logit():
    params = _params(seed=3)
    rng = np.random.default_rng(3)
    for trial in range(1000):
        x_static = rng.uniform(0, 1, size=(1, 2))
        x_seq = rng.uniform(0, 1, size=(1, 4, 3))
        cache = forward_batch(params, x_static, x_seq)
        static_parts = [
            float(static_shape(params, l, x_static[:, l])[0]) for l in range(2)
        ]
        corridor_parts = corridor_effects(params, cache.hs[4])[0]
        total = float(params.conn_bias) + sum(static_parts) + float(corridor_parts.sum())
        assert abs(total - float(cache.logit[0])) < 1e-10
        assert abs(1.0 / (1.0 + np.exp(-total)) - float(cache.prediction[0])) < 1e-10


def test_corridor_effects_are_bitwise_local():
    params = _params(seed=4)
    rng = np.random.default_rng(4)
    x_static = rng.uniform(0, 1, size=(1, 2))
    x_seq = rng.uniform(0, 1, size=(1, 5, 3))
    base = corridor_effects(params, forward_batch(params, x_static, x_seq).hs[5])[0]
    # perturbing channel 1's full history may only change corridor "c1"
    mutated = x_seq.copy()
    mutated[0, :, 1] = rng.uniform(0, 1, size=5)
    after = corridor_effects(params, forward_batch(params, x_static, mutated).hs[5])[0]
    names = [c.name for c in params.corridors.corridors]
    for ci, name in enumerate(names):
        if name == "c1":
            continue
        assert after[ci] == base[ci]  # bitwise equality, not approximate


def test_sequential_shape_substitutes_only_the_probed_step():
    params = _params(seed=5)
    rng = np.random.default_rng(5)
    prefix = rng.uniform(0, 1, size=(4, 3))
    grid = np.linspace(0, 1, 5)
    shape = sequential_shape(params, 0, prefix, 4, grid)
    # manual route: rebuild each grid variant and read the corridor effect
    for gi, v in enumerate(grid):
        variant = prefix.copy()
        variant[3, 0] = v
        cache = forward_batch(params, np.zeros((1, 2)), variant[None])
        eff = corridor_effects(params, cache.hs[4])[0][0]
        assert abs(shape[gi] - eff) < 1e-12


def test_mean_sequential_shape_averages_per_context_shapes():
    params = _params(seed=6)
    rng = np.random.default_rng(6)
    contexts = rng.uniform(0, 1, size=(8, 4, 3))
    grid = np.linspace(0, 1, 5)
    mean_shape = mean_sequential_shape(params, contexts, 2, 4, grid)
    stacked = np.stack([sequential_shape(params, 2, ctx, 4, grid) for ctx in contexts])
    assert np.max(np.abs(mean_shape - stacked.mean(axis=0))) < 1e-12


def test_transition_is_effect_difference_between_steps():
    params = _params(seed=7)
    rng = np.random.default_rng(7)
    prefix = rng.uniform(0, 1, size=(4, 3))
    grid = np.asarray([0.2, 0.8])
    delta = transition(params, 0, prefix, 4, grid)
    assert delta.shape == (2, 2)
    # manual: previous value a at step 3, current value b at step 4
    for ai, a in enumerate(grid):
        for bi, b in enumerate(grid):
            variant = prefix.copy()
            variant[2, 0] = a
            variant[3, 0] = b
            hs = forward_batch(params, np.zeros((1, 2)), variant[None]).hs
            eff_t = corridor_effects(params, hs[4])[0][0]
            eff_prev = corridor_effects(params, hs[3])[0][0]
            assert abs(delta[ai, bi] - (eff_t - eff_prev)) < 1e-12


def test_transition_needs_two_steps():
    params = _params()
    with pytest.raises(InterpretError):
        transition(params, 0, np.zeros((1, 3)), 1, np.linspace(0, 1, 3))


def test_development_tracks_per_step_effect():
    params = _params(seed=8)
    rng = np.random.default_rng(8)
    prefix = rng.uniform(0, 1, size=(5, 3))
    dev = development(params, 1, prefix)
    hs = forward_batch(params, np.zeros((1, 2)), prefix[None]).hs
    for step in range(1, 6):
        eff = corridor_effects(params, hs[step])[0][1]
        assert abs(dev[step - 1] - eff) < 1e-12


def test_interaction_surface_grid_orientation():
    params = _params(seed=9)
    rng = np.random.default_rng(9)
    prefix = rng.uniform(0, 1, size=(3, 3))
    grid = np.asarray([0.0, 1.0])
    surf = interaction_surface(params, (0, 2), prefix, 3, grid)
    names = [c.name for c in params.corridors.corridors]
    pair_idx = names.index("c0 x c2")
    for ai, a in enumerate(grid):
        for bi, b in enumerate(grid):
            variant = prefix.copy()
            variant[2, 0] = a
            variant[2, 2] = b
            cache = forward_batch(params, np.zeros((1, 2)), variant[None])
            eff = corridor_effects(params, cache.hs[3])[0][pair_idx]
            assert abs(surf[ai, bi] - eff) < 1e-12


def test_importance_scales_linearly_with_connection_weight():
    params = _params(seed=10)
    ds = _dataset(seed=10)
    before = {row["feature"]: row["score"] for row in importance(params, ds)}
    params.conn_static[0] *= 2.0
    after = {row["feature"]: row["score"] for row in importance(params, ds)}
    assert abs(after["age"] - 2.0 * before["age"]) < 1e-12
    assert abs(after["sex"] - before["sex"]) < 1e-12


def test_importance_is_sorted_and_nonnegative():
    params = _params(seed=11)
    ds = _dataset(seed=11)
    rows = importance(params, ds)
    scores = [row["score"] for row in rows]
    assert all(s >= 0.0 for s in scores)
    assert scores == sorted(scores, reverse=True)
    assert len(rows) == 2 + len(params.corridors.corridors)


def test_urgency_bands():
    cfg = ExportConfig()
    assert urgency_band(0.1, cfg) == "low"
    assert urgency_band(0.5, cfg) == "elevated"
    assert urgency_band(0.9, cfg) == "high"


def test_export_bundle_validates_against_published_schema():
    jsonschema = pytest.importorskip("jsonschema")
    params = _params(seed=12)
    ds = _dataset(seed=12)
    bundle = export_bundle(params, ds, "p0", ExportConfig(grid_points=12, surface_points=5), "hash")
    here = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    with open(os.path.join(here, "docs", "interpretation_bundle.schema.json")) as fh:
        schema = json.load(fh)
    jsonschema.validate(bundle, schema)
    # bundle must be plain JSON types end to end
    json.dumps(bundle)


def test_export_bundle_prediction_matches_forward():
    params = _params(seed=13)
    ds = _dataset(seed=13)
    pid = "p3"
    bundle = export_bundle(params, ds, pid, ExportConfig(grid_points=8, surface_points=4), "")
    rows = np.flatnonzero(ds.pathway_of == pid)
    focal = rows[np.argmax(ds.prefix_len[rows])]
    t = int(ds.prefix_len[focal])
    cache = forward_batch(params, ds.x_static[focal:focal + 1], ds.x_seq[focal:focal + 1, :t, :])
    assert abs(bundle["prediction"] - float(cache.prediction[0])) < 1e-12
    assert bundle["prefix_len"] == t


def test_export_bundle_unknown_pathway():
    params = _params()
    ds = _dataset()
    with pytest.raises(InterpretError) as err:
        export_bundle(params, ds, "nope", ExportConfig(), "")
    assert err.value.code == "unknown_pathway"


def test_importance_rejects_schema_mismatch():
    params = _params(q=2, p=3)
    ds = _dataset(q=2, p=3)
    bad = _dataset(n=8, q=1, p=3, seed=14)
    with pytest.raises(InterpretError):
        importance(params, bad)
