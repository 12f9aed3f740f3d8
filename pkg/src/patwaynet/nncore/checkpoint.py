"""Versioned self-describing checkpoints.

Tensors are serialized as base64 of their little-endian float64 bytes, so a
save/load cycle reproduces every parameter bit for bit. The model hash covers
tensor bytes and the describing metadata; it identifies a model across the
service and interpretation bundles.
"""

from __future__ import annotations

import base64
import hashlib
import json
import pickle
from typing import Any

import numpy as np

from .params import Corridor, CorridorTable, PatWayNetParams

CHECKPOINT_FORMAT = "patwaynet-checkpoint"
CHECKPOINT_VERSION = 1


def _encode_array(arr: np.ndarray) -> dict:
    data = np.ascontiguousarray(arr, dtype="<f8")
    return {"shape": list(arr.shape), "data": base64.b64encode(data.tobytes()).decode("ascii")}


def _decode_array(obj: dict) -> np.ndarray:
    raw = base64.b64decode(obj["data"])
    # astype copies the read-only frombuffer view into a fresh writable
    # contiguous buffer; reshape last, ascontiguousarray would promote the
    # 0-d bias to 1-d.
    return np.frombuffer(raw, dtype="<f8").astype(np.float64).reshape(obj["shape"])


def model_hash(tensors: dict[str, dict], meta: dict) -> str:
    digest = hashlib.sha256()
    for name in sorted(tensors):
        digest.update(name.encode("utf-8"))
        digest.update(tensors[name]["data"].encode("ascii"))
    digest.update(json.dumps(meta, sort_keys=True, separators=(",", ":")).encode("utf-8"))
    return digest.hexdigest()


def save_checkpoint(path: str, params: PatWayNetParams, meta: dict[str, Any]) -> str:
    """Write a patwaynet checkpoint; returns the model hash.

    `meta` must carry model_kind, schema_hash, static_features and
    sequential_features (name/kind pairs); anything else rides along.
    """
    tensors = {name: _encode_array(arr) for name, arr in params.tensors()}
    tensors["mask_x"] = _encode_array(params.mask_x)
    tensors["mask_h"] = _encode_array(params.mask_h)
    describing = {
        "model_kind": meta.get("model_kind", "patwaynet"),
        "schema_hash": meta.get("schema_hash", ""),
        "static_features": meta.get("static_features", []),
        "sequential_features": meta.get("sequential_features", []),
        "head": params.head,
        "corridor_width": params.corridors.width,
        "corridors": [
            {"name": c.name, "members": list(c.members)} for c in params.corridors.corridors
        ],
    }
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        **describing,
        "extra": {k: v for k, v in meta.items() if k not in describing},
        "tensors": tensors,
        "model_hash": model_hash(tensors, describing),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
    return payload["model_hash"]


class CheckpointError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


def read_checkpoint(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    if payload.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError("bad_checkpoint", f"{path!r} is not a model checkpoint")
    if payload.get("version") != CHECKPOINT_VERSION:
        raise CheckpointError("bad_version", f"unsupported version {payload.get('version')!r}")
    return payload


def load_checkpoint(path: str) -> tuple[PatWayNetParams, dict]:
    """Rebuild params and metadata. Only recurrent model kinds live here;
    shallow baselines use save_baseline/load_baseline below."""
    payload = read_checkpoint(path)
    if "tensors" not in payload:
        raise CheckpointError("bad_checkpoint", "no tensors in checkpoint")
    tensors = {name: _decode_array(obj) for name, obj in payload["tensors"].items()}
    table = CorridorTable(
        tuple(Corridor(c["name"], tuple(c["members"])) for c in payload["corridors"]),
        int(payload["corridor_width"]),
    )
    params = PatWayNetParams(
        static_w1=tensors["static_w1"],
        static_b1=tensors["static_b1"],
        static_w2=tensors["static_w2"],
        static_b2=tensors["static_b2"],
        wx=tensors["wx"],
        wh=tensors["wh"],
        b=tensors["b"],
        mask_x=tensors["mask_x"],
        mask_h=tensors["mask_h"],
        corridors=table,
        conn_static=tensors["conn_static"],
        conn_seq=tensors["conn_seq"],
        conn_bias=tensors["conn_bias"],
        head=payload["head"],
    )
    return params, payload


def save_baseline(path: str, model: Any, meta: dict[str, Any]) -> str:
    """Persist a shallow baseline in the same container, tagged by kind."""
    blob = base64.b64encode(pickle.dumps(model)).decode("ascii")
    describing = {
        "model_kind": meta["model_kind"],
        "schema_hash": meta.get("schema_hash", ""),
        "static_features": meta.get("static_features", []),
        "sequential_features": meta.get("sequential_features", []),
    }
    digest = hashlib.sha256(blob.encode("ascii")).hexdigest()
    payload = {
        "format": CHECKPOINT_FORMAT,
        "version": CHECKPOINT_VERSION,
        **describing,
        "extra": {k: v for k, v in meta.items() if k not in describing},
        "payload_pickle": blob,
        "model_hash": digest,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, sort_keys=True)
    return digest


def load_baseline(path: str) -> tuple[Any, dict]:
    payload = read_checkpoint(path)
    if "payload_pickle" not in payload:
        raise CheckpointError("bad_checkpoint", "not a baseline checkpoint")
    model = pickle.loads(base64.b64decode(payload["payload_pickle"]))
    return model, payload
