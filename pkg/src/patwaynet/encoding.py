"""Scaling, one-hot + carry-forward encoding, prefix extraction, splits.

Encoded space:
  static columns  = numeric (min-max scaled) | binary | one-hot levels
  sequential rows = one channel per activity label (target excluded) plus one
                    channel per standalone sequential feature. An activity in
                    the carry_forward set writes its scaled measurement into
                    its own slot and the value persists until remeasured;
                    other activities write a plain 1 at their step.

All values live in [0, 1]. Prefix rows never contain the target activity.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np

from .eventlog import EventLog, IngestError, PatientPathway
from .schema import FeatureSchema, SchemaError

log = logging.getLogger("patwaynet")

_BINARY_TRUE = {"1", "true", "yes"}
_BINARY_FALSE = {"0", "false", "no"}


def parse_binary(value: str, name: str) -> float:
    v = value.strip().lower()
    if v in _BINARY_TRUE:
        return 1.0
    if v in _BINARY_FALSE:
        return 0.0
    raise IngestError("bad_binary", f"feature {name!r}: not a binary value: {value!r}")


def _parse_float(value: str, name: str) -> float:
    try:
        return float(value)
    except ValueError:
        raise IngestError("bad_numeric", f"feature {name!r}: not a number: {value!r}") from None


def _scale(v: float, lo: float, hi: float) -> float:
    if hi <= lo:
        return 0.0  # constant feature carries no information
    return min(1.0, max(0.0, (v - lo) / (hi - lo)))


@dataclass(frozen=True)
class ScalerSet:
    """Everything learned from a training log that encode() needs."""

    numeric_ranges: dict[str, tuple[float, float]]
    categorical_levels: dict[str, tuple[str, ...]]
    activities: tuple[str, ...]

    def static_columns(self, schema: FeatureSchema) -> list[tuple[str, str]]:
        cols: list[tuple[str, str]] = []
        for name, kind in schema.active_static():
            if kind == "numeric":
                cols.append((name, "numeric"))
            elif kind == "binary":
                cols.append((name, "binary"))
            else:
                for level in self.categorical_levels[name]:
                    cols.append((f"{name}={level}", "onehot"))
        return cols

    def sequential_channels(self, schema: FeatureSchema) -> list[tuple[str, str]]:
        vocab = set(self.activities)
        chans: list[tuple[str, str]] = []
        for act in self.activities:
            if act == schema.target_activity:
                continue
            kind = "numeric" if act in schema.carry_forward else "binary"
            chans.append((act, kind))
        for name, kind in schema.active_sequential():
            if name in vocab:
                continue  # fused into its activity slot
            chans.append((name, kind))
        return chans


def fit_scalers(elog: EventLog) -> ScalerSet:
    """Learn min/max ranges, categorical level maps, and the activity vocabulary."""
    if not elog.pathways:
        raise IngestError("empty_log", "cannot fit scalers on an empty log")
    schema = elog.schema
    numeric: dict[str, list[float]] = {}
    levels: dict[str, set[str]] = {}
    activities: set[str] = set()

    for name, kind in schema.active_static():
        if kind == "numeric":
            numeric[name] = []
        elif kind == "categorical":
            levels[name] = set()
    for name, kind in schema.active_sequential():
        if kind == "categorical":
            raise SchemaError("unsupported_kind", f"sequential categorical {name!r} not supported")
        if kind == "numeric":
            numeric[name] = []

    for pw in elog.pathways:
        for name, kind in schema.active_static():
            value = pw.static_attrs.get(name, "")
            if value == "":
                raise IngestError("missing_static", f"case {pw.pathway_id!r}: no value for {name!r}")
            if kind == "numeric":
                numeric[name].append(_parse_float(value, name))
            elif kind == "binary":
                parse_binary(value, name)
            else:
                levels[name].add(value)
        for ev in pw.events:
            activities.add(ev.activity)
            for name, kind in schema.active_sequential():
                raw = ev.attrs.get(name, "")
                if raw != "" and kind == "numeric":
                    numeric[name].append(_parse_float(raw, name))

    ranges = {}
    for name, values in numeric.items():
        if not values:
            raise IngestError("no_observations", f"numeric feature {name!r} never observed")
        ranges[name] = (min(values), max(values))
    return ScalerSet(
        numeric_ranges=ranges,
        categorical_levels={k: tuple(sorted(v)) for k, v in levels.items()},
        activities=tuple(sorted(activities)),
    )


@dataclass
class EncodedPathway:
    pathway_id: str
    x_static: np.ndarray  # (q,)
    x_seq: np.ndarray  # (L, p) full pathway
    target_mask: np.ndarray  # (L,) bool, True where the target activity occurs
    y_attr: float | None  # regression label when schema.target_attribute is set
    timeline: list[tuple[str, str]]  # (activity, iso timestamp) per event


def _encode_static(pw: PatientPathway, schema: FeatureSchema, scalers: ScalerSet) -> np.ndarray:
    out: list[float] = []
    for name, kind in schema.active_static():
        value = pw.static_attrs.get(name, "")
        if value == "":
            raise IngestError("missing_static", f"case {pw.pathway_id!r}: no value for {name!r}")
        if kind == "numeric":
            lo, hi = scalers.numeric_ranges[name]
            out.append(_scale(_parse_float(value, name), lo, hi))
        elif kind == "binary":
            out.append(parse_binary(value, name))
        else:
            level_list = scalers.categorical_levels[name]
            block = [0.0] * len(level_list)
            if value in level_list:
                block[level_list.index(value)] = 1.0
            else:
                log.warning("unseen level %r for %r: all-zero block", value, name)
            out.extend(block)
    return np.asarray(out, dtype=np.float64)


def encode(elog: EventLog, scalers: ScalerSet) -> list[EncodedPathway]:
    """Encode every pathway against fitted scalers (fit log and new logs alike)."""
    schema = elog.schema
    channels = scalers.sequential_channels(schema)
    index = {name: j for j, (name, _) in enumerate(channels)}
    carry = {index[name] for name in schema.carry_forward if name in index}
    standalone = [
        (name, kind) for name, kind in schema.active_sequential() if name not in scalers.activities
    ]
    known = set(scalers.activities)
    p = len(channels)

    out = []
    for pw in elog.pathways:
        x_static = _encode_static(pw, schema, scalers)
        length = len(pw.events)
        x_seq = np.zeros((length, p), dtype=np.float64)
        carried = np.zeros(p, dtype=np.float64)
        target_mask = np.zeros(length, dtype=bool)
        for e, ev in enumerate(pw.events):
            row = np.zeros(p, dtype=np.float64)
            for j in carry:
                row[j] = carried[j]
            act = ev.activity
            if act == schema.target_activity:
                target_mask[e] = True
            elif act in index:
                j = index[act]
                if j in carry:
                    raw = ev.attrs.get(act, "")
                    if raw == "":
                        raise IngestError(
                            "missing_measurement",
                            f"case {pw.pathway_id!r}: activity {act!r} without a value",
                        )
                    lo, hi = scalers.numeric_ranges[act]
                    value = _scale(_parse_float(raw, act), lo, hi)
                    row[j] = value
                    carried[j] = value
                else:
                    row[j] = 1.0
            elif act not in known:
                log.warning("unknown activity %r: all-zero step", act)
            for name, kind in standalone:
                j = index[name]
                raw = ev.attrs.get(name, "")
                if raw == "":
                    continue  # carry channels already hold the last value, others stay 0
                if kind == "numeric":
                    lo, hi = scalers.numeric_ranges[name]
                    value = _scale(_parse_float(raw, name), lo, hi)
                else:
                    value = parse_binary(raw, name)
                row[j] = value
                if j in carry:
                    carried[j] = value
            x_seq[e] = row
        y_attr = None
        if schema.target_attribute is not None:
            raw = pw.static_attrs.get(schema.target_attribute, "")
            if raw == "":
                raise IngestError(
                    "missing_target", f"case {pw.pathway_id!r}: no {schema.target_attribute!r}"
                )
            y_attr = _parse_float(raw, schema.target_attribute)
        out.append(
            EncodedPathway(
                pathway_id=pw.pathway_id,
                x_static=x_static,
                x_seq=x_seq,
                target_mask=target_mask,
                y_attr=y_attr,
                timeline=[(ev.activity, ev.timestamp.isoformat()) for ev in pw.events],
            )
        )
    return out


@dataclass
class EncodedDataset:
    """Row-per-prefix (classification) or row-per-pathway (regression) tensors.

    x_seq rows are zero-padded beyond their prefix length; training and
    inference must never read past prefix_len[i].
    """

    x_static: np.ndarray  # (s, q)
    x_seq: np.ndarray  # (s, T, p)
    y: np.ndarray  # (s,)
    prefix_len: np.ndarray  # (s,)
    pathway_of: np.ndarray  # (s,) object: pathway id per row
    static_features: list[tuple[str, str]]
    sequential_features: list[tuple[str, str]]
    task: str  # "classification" | "regression"
    schema_hash: str
    timelines: dict[str, list[tuple[str, str]]] = field(default_factory=dict)

    @property
    def n_rows(self) -> int:
        return int(self.y.shape[0])

    @property
    def seq_len(self) -> int:
        return int(self.x_seq.shape[1])

    def pathway_ids(self) -> list[str]:
        seen: dict[str, None] = {}
        for pid in self.pathway_of:
            seen.setdefault(pid, None)
        return list(seen)

    def pathway_label(self) -> dict[str, float]:
        out: dict[str, float] = {}
        for pid, y in zip(self.pathway_of, self.y):
            out[pid] = float(y)
        return out

    def subset(self, indices) -> "EncodedDataset":
        indices = np.asarray(indices, dtype=np.int64)
        ids = {self.pathway_of[i] for i in indices}
        return EncodedDataset(
            x_static=self.x_static[indices],
            x_seq=self.x_seq[indices],
            y=self.y[indices],
            prefix_len=self.prefix_len[indices],
            pathway_of=self.pathway_of[indices],
            static_features=self.static_features,
            sequential_features=self.sequential_features,
            task=self.task,
            schema_hash=self.schema_hash,
            timelines={k: v for k, v in self.timelines.items() if k in ids},
        )


def _stack_rows(rows, static_features, sequential_features, task, schema_hash, timelines):
    if not rows:
        raise IngestError("empty_dataset", "no rows produced")
    T = max(r[3] for r in rows)
    p = rows[0][2].shape[1]
    s = len(rows)
    x_static = np.stack([r[1] for r in rows])
    x_seq = np.zeros((s, T, p), dtype=np.float64)
    for i, (_, _, mat, t, _) in enumerate(rows):
        x_seq[i, :t] = mat[:t]
    return EncodedDataset(
        x_static=x_static,
        x_seq=x_seq,
        y=np.asarray([r[4] for r in rows], dtype=np.float64),
        prefix_len=np.asarray([r[3] for r in rows], dtype=np.int64),
        pathway_of=np.asarray([r[0] for r in rows], dtype=object),
        static_features=static_features,
        sequential_features=sequential_features,
        task=task,
        schema_hash=schema_hash,
        timelines=timelines,
    )


def extract_prefixes_and_label(
    encoded: list[EncodedPathway], schema: FeatureSchema, scalers: ScalerSet
) -> EncodedDataset:
    """Expand pathways into prefix rows labelled by eventual target occurrence.

    The label of every prefix of a pathway is 1 iff the target activity occurs
    anywhere in the full pathway. Prefixes that already contain the target are
    discarded: the event to be predicted must never sit in the input. A
    pathway whose first event is the target contributes no rows.
    """
    if schema.target_activity is None:
        raise SchemaError("no_target", "prefix labelling needs target_activity")
    rows = []
    timelines = {}
    for ep in encoded:
        hits = np.flatnonzero(ep.target_mask)
        label = 1.0 if hits.size else 0.0
        first = int(hits[0]) if hits.size else len(ep.target_mask)
        max_t = min(len(ep.target_mask), first)
        for t in range(1, max_t + 1):
            rows.append((ep.pathway_id, ep.x_static, ep.x_seq, t, label))
        if max_t >= 1:
            timelines[ep.pathway_id] = ep.timeline
    return _stack_rows(
        rows,
        scalers.static_columns(schema),
        scalers.sequential_channels(schema),
        "classification",
        schema.hash(),
        timelines,
    )


def build_regression_rows(
    encoded: list[EncodedPathway],
    schema: FeatureSchema,
    scalers: ScalerSet,
    all_prefixes: bool = True,
) -> EncodedDataset:
    """Rows labelled by target_attribute. With all_prefixes every prefix of a
    pathway carries the pathway's label (the same empirical risk as the
    classification path); otherwise one full-length row per pathway."""
    if schema.target_attribute is None:
        raise SchemaError("no_target", "regression labelling needs target_attribute")
    rows = []
    timelines = {}
    for ep in encoded:
        if ep.y_attr is None:
            raise IngestError("missing_target", f"case {ep.pathway_id!r}: no label")
        length = ep.x_seq.shape[0]
        lengths = range(1, length + 1) if all_prefixes else [length]
        for t in lengths:
            rows.append((ep.pathway_id, ep.x_static, ep.x_seq, t, float(ep.y_attr)))
        timelines[ep.pathway_id] = ep.timeline
    return _stack_rows(
        rows,
        scalers.static_columns(schema),
        scalers.sequential_channels(schema),
        "regression",
        schema.hash(),
        timelines,
    )


def build_full_sequences(
    encoded: list[EncodedPathway], schema: FeatureSchema, scalers: ScalerSet
) -> EncodedDataset:
    """One row per pathway over its full sequence, labelled by target_attribute."""
    return build_regression_rows(encoded, schema, scalers, all_prefixes=False)


def _allocate(n: int, fractions: tuple[float, ...]) -> list[int]:
    # Largest-remainder allocation; every part gets at least one when n allows.
    raw = [f * n for f in fractions]
    counts = [int(np.floor(r)) for r in raw]
    rem = n - sum(counts)
    order = sorted(range(len(fractions)), key=lambda i: raw[i] - counts[i], reverse=True)
    for i in order[:rem]:
        counts[i] += 1
    if n >= len(fractions):
        while min(counts) == 0:
            counts[counts.index(max(counts))] -= 1
            counts[counts.index(min(counts))] += 1
    return counts


def pathway_partition_indices(
    ds: EncodedDataset,
    fractions: tuple[float, ...] = (0.8, 0.2),
    seed=0,
    stratify: bool | None = None,
) -> tuple[np.ndarray, ...]:
    """Row indices of a pathway-atomic partition (no rows copied).

    Classification partitions are stratified on the pathway label: each
    class's pathway count per part matches the fraction within +-1. A class
    with fewer pathways than parts cannot be stratified and raises.
    """
    if abs(sum(fractions) - 1.0) > 1e-9:
        raise ValueError("fractions must sum to 1")
    if stratify is None:
        stratify = ds.task == "classification"
    ids = ds.pathway_ids()
    label = ds.pathway_label()
    groups: dict[float, list[str]] = {}
    if stratify:
        for pid in ids:
            groups.setdefault(label[pid], []).append(pid)
    else:
        groups[0.0] = list(ids)

    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    assignment: dict[str, int] = {}
    for cls in sorted(groups):
        members = groups[cls]
        if len(members) < len(fractions):
            raise IngestError(
                "class_too_small",
                f"class {cls}: {len(members)} pathways cannot fill {len(fractions)} parts",
            )
        perm = rng.permutation(len(members))
        counts = _allocate(len(members), tuple(fractions))
        start = 0
        for part, c in enumerate(counts):
            for i in perm[start : start + c]:
                assignment[members[i]] = part
            start += c

    parts: list[list[int]] = [[] for _ in fractions]
    for i, pid in enumerate(ds.pathway_of):
        parts[assignment[pid]].append(i)
    return tuple(np.asarray(idx, dtype=np.int64) for idx in parts)


def split_by_pathway(
    ds: EncodedDataset,
    fractions: tuple[float, ...] = (0.8, 0.2),
    seed=0,
    stratify: bool | None = None,
) -> tuple[EncodedDataset, ...]:
    """Partition pathways (never rows) into len(fractions) datasets."""
    parts = pathway_partition_indices(ds, fractions, seed, stratify)
    return tuple(ds.subset(idx) for idx in parts)


DATASET_FORMAT = "patwaynet-dataset"
DATASET_VERSION = 1


def save_dataset(ds: EncodedDataset, path: str) -> None:
    """JSON-lines snapshot; floats round-trip exactly via repr serialization."""
    with open(path, "w", encoding="utf-8") as fh:
        header = {
            "format": DATASET_FORMAT,
            "version": DATASET_VERSION,
            "task": ds.task,
            "schema_hash": ds.schema_hash,
            "static_features": [list(f) for f in ds.static_features],
            "sequential_features": [list(f) for f in ds.sequential_features],
            "seq_len": ds.seq_len,
        }
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for i in range(ds.n_rows):
            t = int(ds.prefix_len[i])
            row = {
                "p": str(ds.pathway_of[i]),
                "t": t,
                "y": float(ds.y[i]),
                "s": ds.x_static[i].tolist(),
                "x": ds.x_seq[i, :t].tolist(),
            }
            fh.write(json.dumps(row, sort_keys=True) + "\n")
        for pid, timeline in ds.timelines.items():
            fh.write(json.dumps({"timeline": [pid, [list(e) for e in timeline]]}) + "\n")


def load_dataset(path: str) -> EncodedDataset:
    with open(path, "r", encoding="utf-8") as fh:
        header = json.loads(fh.readline())
        if header.get("format") != DATASET_FORMAT:
            raise IngestError("bad_snapshot", f"{path!r} is not a dataset snapshot")
        if header.get("version") != DATASET_VERSION:
            raise IngestError("bad_snapshot_version", f"unsupported version {header.get('version')}")
        T = int(header["seq_len"])
        rows = []
        timelines: dict[str, list[tuple[str, str]]] = {}
        for line in fh:
            obj = json.loads(line)
            if "timeline" in obj:
                pid, events = obj["timeline"]
                timelines[pid] = [tuple(e) for e in events]
                continue
            mat = np.asarray(obj["x"], dtype=np.float64)
            if mat.size == 0:
                mat = mat.reshape(0, 0)
            rows.append((obj["p"], np.asarray(obj["s"], dtype=np.float64), mat, obj["t"], obj["y"]))
    p = max((r[2].shape[1] for r in rows), default=0)
    fixed = []
    for pid, xs, mat, t, y in rows:
        full = np.zeros((T, p), dtype=np.float64)
        full[:t, : mat.shape[1]] = mat
        fixed.append((pid, xs, full, t, y))
    ds = _stack_rows(
        fixed,
        [tuple(f) for f in header["static_features"]],
        [tuple(f) for f in header["sequential_features"]],
        header["task"],
        header["schema_hash"],
        timelines,
    )
    if ds.seq_len != T:  # all rows shorter than header T: re-pad to declared length
        pad = np.zeros((ds.n_rows, T, p), dtype=np.float64)
        pad[:, : ds.seq_len] = ds.x_seq
        ds.x_seq = pad
    return ds
