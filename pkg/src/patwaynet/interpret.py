"""Reading the fitted model: shapes, transitions, trajectories, importance.

Every artifact comes straight off the additive decomposition
    logit = bias + sum_l conn_static[l] * mlp_l(v_l) + sum_c conn_seq[block_c] . h[block_c]
so a curve is the exact contribution of one feature, not a post-hoc fit.
Corridor effects depend only on the owning channel's history; the "context"
of a sequential artifact is therefore just that channel's observed values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .encoding import EncodedDataset
from .nncore.forward import corridor_effects, forward_batch, sigmoid
from .nncore.params import PatWayNetParams


class InterpretError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


def _corridor_index(params: PatWayNetParams, members: tuple[int, ...]) -> int:
    for c, corr in enumerate(params.corridors.corridors):
        if corr.members == members:
            return c
    raise InterpretError("no_corridor", f"no corridor owns channels {members}")


def _corridor_at_steps(
    params: PatWayNetParams, corridor: int, x_seq: np.ndarray
) -> np.ndarray:
    """Corridor contribution after each step. x_seq (B, t, p) -> (B, t)."""
    B, t, _ = x_seq.shape
    cache = forward_batch(params, np.zeros((B, params.n_static)), x_seq)
    block = params.corridors.block(corridor)
    w = params.conn_seq[block]
    return np.stack([cache.hs[step][:, block] @ w for step in range(1, t + 1)], axis=1)


def static_shape(params: PatWayNetParams, feature: int, grid: np.ndarray) -> np.ndarray:
    """Exact effect curve of one static column: conn weight times its net."""
    if not 0 <= feature < params.n_static:
        raise InterpretError("unknown_feature", f"no static feature {feature}")
    grid = np.asarray(grid, dtype=np.float64)
    hid = np.tanh(grid[:, None] * params.static_w1[feature][None] + params.static_b1[feature][None])
    out = hid @ params.static_w2[feature] + params.static_b2[feature]
    return params.conn_static[feature] * out


def sequential_shape(
    params: PatWayNetParams,
    channel: int,
    prefix: np.ndarray,
    t: int,
    grid: np.ndarray,
) -> np.ndarray:
    """Corridor effect at step t when the channel's value there is swept over
    the grid; the rest of the prefix keeps its observed values."""
    prefix = np.asarray(prefix, dtype=np.float64)
    if not 1 <= t <= prefix.shape[0]:
        raise InterpretError("bad_step", f"t={t} outside prefix of length {prefix.shape[0]}")
    corridor = _corridor_index(params, (channel,))
    grid = np.asarray(grid, dtype=np.float64)
    n = grid.shape[0]
    mats = np.repeat(prefix[None, :t, :], n, axis=0)
    mats[:, t - 1, channel] = grid
    return _corridor_at_steps(params, corridor, mats)[:, t - 1]


def mean_sequential_shape(
    params: PatWayNetParams,
    contexts: np.ndarray,
    channel: int,
    t: int,
    grid: np.ndarray,
) -> np.ndarray:
    """Population-level shape: the sequential_shape averaged over context
    prefixes (contexts: (n_ctx, T, p) with T >= t)."""
    contexts = np.asarray(contexts, dtype=np.float64)
    if contexts.ndim != 3 or contexts.shape[1] < t:
        raise InterpretError("bad_step", f"contexts must be (n, T>={t}, p)")
    corridor = _corridor_index(params, (channel,))
    grid = np.asarray(grid, dtype=np.float64)
    n_ctx, n = contexts.shape[0], grid.shape[0]
    mats = np.repeat(contexts[:, :t, :], n, axis=0)  # ctx-major blocks of n rows
    mats[:, t - 1, channel] = np.tile(grid, n_ctx)
    eff = _corridor_at_steps(params, corridor, mats)[:, t - 1]
    return eff.reshape(n_ctx, n).mean(axis=0)


def interaction_surface(
    params: PatWayNetParams,
    pair: tuple[int, int],
    prefix: np.ndarray,
    t: int,
    grid: np.ndarray,
) -> np.ndarray:
    """Joint effect of an interaction corridor over a value grid at step t."""
    prefix = np.asarray(prefix, dtype=np.float64)
    if not 1 <= t <= prefix.shape[0]:
        raise InterpretError("bad_step", f"t={t} outside prefix of length {prefix.shape[0]}")
    corridor = _corridor_index(params, tuple(pair))
    grid = np.asarray(grid, dtype=np.float64)
    n = grid.shape[0]
    A, B = np.meshgrid(grid, grid, indexing="ij")
    mats = np.repeat(prefix[None, :t, :], n * n, axis=0)
    mats[:, t - 1, pair[0]] = A.ravel()
    mats[:, t - 1, pair[1]] = B.ravel()
    return _corridor_at_steps(params, corridor, mats)[:, t - 1].reshape(n, n)


def transition(
    params: PatWayNetParams,
    channel: int,
    prefix: np.ndarray,
    t: int,
    grid: np.ndarray,
) -> np.ndarray:
    """delta[a, b]: corridor effect after step t with value b there and value
    a at step t-1, minus the effect after step t-1 (ending on a). Rows index
    the previous value, columns the current one."""
    prefix = np.asarray(prefix, dtype=np.float64)
    if t < 2:
        raise InterpretError("bad_step", "transition needs t >= 2")
    if t > prefix.shape[0]:
        raise InterpretError("bad_step", f"t={t} outside prefix of length {prefix.shape[0]}")
    corridor = _corridor_index(params, (channel,))
    grid = np.asarray(grid, dtype=np.float64)
    n = grid.shape[0]
    A, B = np.meshgrid(grid, grid, indexing="ij")
    mats = np.repeat(prefix[None, :t, :], n * n, axis=0)
    mats[:, t - 2, channel] = A.ravel()
    mats[:, t - 1, channel] = B.ravel()
    steps = _corridor_at_steps(params, corridor, mats)
    return (steps[:, t - 1] - steps[:, t - 2]).reshape(n, n)


def development(params: PatWayNetParams, channel: int, prefix: np.ndarray) -> np.ndarray:
    """Corridor contribution after each step of the prefix, shape (t*,)."""
    prefix = np.asarray(prefix, dtype=np.float64)
    corridor = _corridor_index(params, (channel,))
    return _corridor_at_steps(params, corridor, prefix[None])[0]


def _static_grid(kind: str, n: int) -> np.ndarray:
    if kind in ("binary", "onehot"):
        return np.asarray([0.0, 1.0])
    return np.linspace(0.0, 1.0, n)


def importance(
    params: PatWayNetParams, ds: EncodedDataset, grid_points: int = 100
) -> list[dict]:
    """Centered mean absolute effect of every feature, largest first.

    Static numeric features integrate |effect - mean effect| over the value
    grid (trapezoidal); binary and one-hot columns average over their two
    levels. Sequential and interaction corridors pool each prefix row's
    effect at its final step and average |effect - pooled mean|: doubling a
    connection weight therefore doubles exactly that feature's score.
    """
    if len(ds.static_features) != params.n_static:
        raise InterpretError("schema_mismatch", "dataset static columns do not match model")
    if len(ds.sequential_features) != params.n_channels:
        raise InterpretError("schema_mismatch", "dataset channels do not match model")
    out = []
    for l, (name, kind) in enumerate(ds.static_features):
        grid = _static_grid(kind, grid_points)
        eff = static_shape(params, l, grid)
        if kind == "numeric":
            mean = np.trapezoid(eff, grid)  # grid spans [0, 1], so this is the mean
            score = float(np.trapezoid(np.abs(eff - mean), grid))
        else:
            score = float(np.abs(eff - eff.mean()).mean())
        out.append({"feature": name, "kind": "static", "score": score})

    n_corr = len(params.corridors.corridors)
    pooled: list[list[np.ndarray]] = [[] for _ in range(n_corr)]
    for t in np.unique(ds.prefix_len):
        idx = np.flatnonzero(ds.prefix_len == t)
        cache = forward_batch(params, ds.x_static[idx], ds.x_seq[idx, : int(t), :])
        eff = corridor_effects(params, cache.hs[int(t)])
        for c in range(n_corr):
            pooled[c].append(eff[:, c])
    for c, corr in enumerate(params.corridors.corridors):
        values = np.concatenate(pooled[c])
        kind = "interaction" if len(corr.members) > 1 else "sequential"
        score = float(np.abs(values - values.mean()).mean())
        out.append({"feature": corr.name, "kind": kind, "score": score})
    out.sort(key=lambda item: (-item["score"], item["feature"]))
    return out


@dataclass
class ExportConfig:
    top_k: int = 20
    grid_points: int = 100
    surface_points: int = 50
    mean_shape_contexts: int = 200
    urgency_low: float = 0.3
    urgency_high: float = 0.7
    urgency_labels: tuple[str, str, str] = ("low", "elevated", "high")


def urgency_band(p: float, config: ExportConfig) -> str:
    if p < config.urgency_low:
        return config.urgency_labels[0]
    if p > config.urgency_high:
        return config.urgency_labels[2]
    return config.urgency_labels[1]


BUNDLE_VERSION = 1


def export_bundle(
    params: PatWayNetParams,
    ds: EncodedDataset,
    pathway_id: str,
    config: ExportConfig | None = None,
    model_hash: str = "",
) -> dict:
    """Everything a clinician-facing display needs for one pathway, as plain
    JSON types. All numbers are computed here; a renderer only draws them.
    """
    config = config or ExportConfig()
    rows = np.flatnonzero(ds.pathway_of == pathway_id)
    if rows.size == 0:
        raise InterpretError("unknown_pathway", f"no pathway {pathway_id!r} in dataset")
    focal = rows[np.argmax(ds.prefix_len[rows])]
    t_star = int(ds.prefix_len[focal])
    prefix = ds.x_seq[focal, :t_star, :]
    x_static = ds.x_static[focal]

    cache = forward_batch(params, x_static[None], prefix[None])
    prediction = float(cache.prediction[0])
    logit = float(cache.logit[0])
    corr_eff = corridor_effects(params, cache.hs[t_star])[0]

    static_effect_values = []
    for l, (name, _) in enumerate(ds.static_features):
        static_effect_values.append(
            {
                "feature": name,
                "value": float(x_static[l]),
                "effect": float(static_shape(params, l, np.asarray([x_static[l]]))[0]),
            }
        )
    sequential_effect_values = []
    for c, corr in enumerate(params.corridors.corridors):
        sequential_effect_values.append(
            {"feature": corr.name, "effect": float(corr_eff[c])}
        )

    scores = importance(params, ds, config.grid_points)
    bundle = {
        "format_version": BUNDLE_VERSION,
        "model_hash": model_hash,
        "schema_hash": ds.schema_hash,
        "task": ds.task,
        "pathway_id": pathway_id,
        "prefix_len": t_star,
        "prediction": prediction,
        "logit": logit,
        "bias": float(params.conn_bias),
        "urgency": urgency_band(prediction, config),
        "importances": scores[: config.top_k],
        "contributions": {
            "static": static_effect_values,
            "sequential": sequential_effect_values,
        },
        "static_shapes": [],
        "sequential_shapes": [],
        "transitions": [],
        "developments": [],
        "interaction_surfaces": [],
        "timeline": [list(e) for e in ds.timelines.get(pathway_id, [])],
    }

    for l, (name, kind) in enumerate(ds.static_features):
        grid = _static_grid(kind, config.grid_points)
        bundle["static_shapes"].append(
            {
                "feature": name,
                "kind": kind,
                "grid": grid.tolist(),
                "effect": static_shape(params, l, grid).tolist(),
                "observed": float(x_static[l]),
            }
        )

    contexts = _context_matrices(ds, config.mean_shape_contexts, min_len=t_star)
    grid = np.linspace(0.0, 1.0, config.grid_points)
    for j, (name, kind) in enumerate(ds.sequential_features):
        chan_grid = np.asarray([0.0, 1.0]) if kind == "binary" else grid
        entry = {
            "feature": name,
            "t": t_star,
            "grid": chan_grid.tolist(),
            "effect": sequential_shape(params, j, prefix, t_star, chan_grid).tolist(),
            "observed": float(prefix[t_star - 1, j]),
        }
        if contexts.shape[0]:
            entry["mean_effect"] = mean_sequential_shape(
                params, contexts, j, t_star, chan_grid
            ).tolist()
        bundle["sequential_shapes"].append(entry)
        bundle["developments"].append(
            {
                "feature": name,
                "steps": list(range(1, t_star + 1)),
                "effect": development(params, j, prefix).tolist(),
            }
        )
        if kind == "numeric" and t_star >= 2:
            tgrid = np.linspace(0.0, 1.0, config.surface_points)
            bundle["transitions"].append(
                {
                    "feature": name,
                    "t": t_star,
                    "grid": tgrid.tolist(),
                    "delta": transition(params, j, prefix, t_star, tgrid).tolist(),
                }
            )
    for corr in params.corridors.corridors:
        if len(corr.members) != 2:
            continue
        sgrid = np.linspace(0.0, 1.0, config.surface_points)
        bundle["interaction_surfaces"].append(
            {
                "features": [ds.sequential_features[m][0] for m in corr.members],
                "t": t_star,
                "grid": sgrid.tolist(),
                "effect": interaction_surface(
                    params, tuple(corr.members), prefix, t_star, sgrid
                ).tolist(),
            }
        )
    return bundle


def _context_matrices(ds: EncodedDataset, limit: int, min_len: int = 1) -> np.ndarray:
    """One sequence matrix per pathway (its longest row), sliced to min_len
    steps; pathways shorter than min_len are left out, first `limit` kept."""
    picked: dict[str, int] = {}
    for i, pid in enumerate(ds.pathway_of):
        best = picked.get(pid)
        if best is None or ds.prefix_len[i] > ds.prefix_len[best]:
            picked[pid] = i
    rows = [i for i in picked.values() if ds.prefix_len[i] >= min_len][:limit]
    return ds.x_seq[rows][:, :max(min_len, 1), :]
