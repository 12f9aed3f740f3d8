"""Read-only HTTP service over one trained checkpoint and one dataset.

Every endpoint is a pure function of the immutable (checkpoint, dataset)
pair, so repeated GETs return identical bodies. Interpretation bundles are
memoized in a bounded cache keyed by (pathway, model hash).
"""

from __future__ import annotations

import os
from collections import OrderedDict

import numpy as np
from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .encoding import EncodedDataset
from .interpret import ExportConfig, export_bundle, importance, urgency_band
from .nncore.forward import forward_batch
from .nncore.params import PatWayNetParams


def _longest_rows(ds: EncodedDataset) -> dict[str, int]:
    best: dict[str, int] = {}
    for i, pid in enumerate(ds.pathway_of):
        if pid not in best or ds.prefix_len[i] > ds.prefix_len[best[pid]]:
            best[pid] = i
    return best


def create_app(
    params: PatWayNetParams,
    payload: dict,
    ds: EncodedDataset,
    config: ExportConfig | None = None,
    frontend_dir: str | None = None,
    cache_size: int = 256,
) -> FastAPI:
    config = config or ExportConfig()
    app = FastAPI(title="patwaynet service", docs_url=None, redoc_url=None)
    model_hash = payload.get("model_hash", "")
    mismatch = payload.get("schema_hash", "") != ds.schema_hash

    rows = _longest_rows(ds)
    predictions: dict[str, dict] = {}
    for pid, i in rows.items():
        t = int(ds.prefix_len[i])
        cache = forward_batch(params, ds.x_static[i : i + 1], ds.x_seq[i : i + 1, :t, :])
        pred = float(cache.prediction[0])
        predictions[pid] = {
            "pathway_id": pid,
            "prefix_len": t,
            "prediction": pred,
            "logit": float(cache.logit[0]),
            "urgency": urgency_band(pred, config) if ds.task == "classification" else None,
            "label": float(ds.y[i]),
        }
    global_importance = importance(params, ds, grid_points=config.grid_points)
    bundles: OrderedDict[str, dict] = OrderedDict()

    def conflict():
        return JSONResponse({"error": "schema_mismatch"}, status_code=409)

    def missing():
        return JSONResponse({"error": "unknown_pathway"}, status_code=404)

    @app.get("/api/patients")
    def patients():
        if mismatch:
            return conflict()
        listing = [
            {
                "pathway_id": pid,
                "prefix_len": predictions[pid]["prefix_len"],
                "n_events": len(ds.timelines.get(pid, [])),
                "prediction": predictions[pid]["prediction"],
                "urgency": predictions[pid]["urgency"],
            }
            for pid in sorted(rows)
        ]
        return {"model_hash": model_hash, "task": ds.task, "patients": listing}

    @app.get("/api/patients/{pathway_id}")
    def patient(pathway_id: str):
        if mismatch:
            return conflict()
        if pathway_id not in rows:
            return missing()
        i = rows[pathway_id]
        timeline = [
            {"step": s + 1, "activity": act, "timestamp": ts}
            for s, (act, ts) in enumerate(ds.timelines.get(pathway_id, []))
        ]
        statics = {
            name: float(ds.x_static[i, j])
            for j, (name, _) in enumerate(ds.static_features)
        }
        return {
            "pathway_id": pathway_id,
            "prefix_len": predictions[pathway_id]["prefix_len"],
            "static_values": statics,
            "timeline": timeline,
        }

    @app.get("/api/patients/{pathway_id}/prediction")
    def prediction(pathway_id: str):
        if mismatch:
            return conflict()
        if pathway_id not in rows:
            return missing()
        return {"model_hash": model_hash, **predictions[pathway_id]}

    @app.get("/api/patients/{pathway_id}/interpretation")
    def interpretation(pathway_id: str):
        if mismatch:
            return conflict()
        if pathway_id not in rows:
            return missing()
        if pathway_id not in bundles:
            bundles[pathway_id] = export_bundle(params, ds, pathway_id, config, model_hash)
            while len(bundles) > cache_size:
                bundles.popitem(last=False)
        return bundles[pathway_id]

    @app.get("/api/model/importance")
    def model_importance():
        if mismatch:
            return conflict()
        return {
            "model_hash": model_hash,
            "task": ds.task,
            "importances": global_importance,
        }

    if frontend_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=frontend_dir, html=True), name="frontend")
    return app


def run_service(app: FastAPI, addr: str | None = None):
    """Serve until interrupted. addr falls back to $PATWAY_ADDR then localhost."""
    import uvicorn

    addr = addr or os.environ.get("PATWAY_ADDR", "127.0.0.1:8000")
    host, _, port = addr.rpartition(":")
    if not host or not port.isdigit():
        raise ValueError(f"bad_addr: expected host:port, got {addr!r}")
    level = os.environ.get("PATWAY_LOG_LEVEL", "info")
    uvicorn.run(app, host=host, port=int(port), log_level=level)
