"""Command line entry points for the full pipeline.

Every artifact-producing subcommand also writes `<out>.manifest.json`
recording the command, inputs and output hashes, so each artifact traces
back to exactly one invocation. Failures print one machine-parseable line
`error: <code>: <message>` and exit non-zero.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys

import numpy as np

from . import simgen
from .baselines import BaselineError
from .encoding import (
    IngestError,
    build_regression_rows,
    encode,
    extract_prefixes_and_label,
    fit_scalers,
    load_dataset,
    save_dataset,
    split_by_pathway,
)
from .eventlog import filter_pathways, parse_event_log
from .evalharness import EvalError, evaluate, expand_grid, fit_model, markdown_report, predict_model
from .interactions import InteractionError, detect_interactions
from .interpret import ExportConfig, InterpretError, export_bundle
from .metrics import auc_roc, r_squared
from .nncore.checkpoint import (
    CheckpointError,
    load_baseline,
    load_checkpoint,
    read_checkpoint,
    save_baseline,
    save_checkpoint,
)
from .schema import SchemaError, load_sidecar

_KNOWN_ERRORS = (
    SchemaError,
    IngestError,
    InteractionError,
    EvalError,
    BaselineError,
    CheckpointError,
    InterpretError,
)


def _file_hash(path: str) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_manifest(out: str, command: str, args: dict, inputs: dict[str, str], artifacts: dict[str, str]):
    manifest = {
        "command": command,
        "args": args,
        "inputs": {name: {"path": p, "sha256": _file_hash(p)} for name, p in inputs.items()},
        "artifacts": {name: {"path": p, "sha256": _file_hash(p)} for name, p in artifacts.items()},
    }
    with open(out + ".manifest.json", "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _write_json(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _load_hp(text: str | None) -> dict:
    if not text:
        return {}
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            return json.load(fh)
    return json.loads(text)


def _parse_interactions(text: str | None) -> list[tuple[int, int]] | None:
    """Accepts `j,k[;j,k...]` or `@detection-report.json`."""
    if not text:
        return None
    if text.startswith("@"):
        with open(text[1:], "r", encoding="utf-8") as fh:
            report = json.load(fh)
        return [tuple(rec["pair"]) for rec in report["selected"]]
    pairs = []
    for part in text.split(";"):
        j, k = part.split(",")
        pairs.append((int(j), int(k)))
    return pairs


def _cmd_ingest(args) -> int:
    schema, csv_cfg, rules = load_sidecar(args.schema)
    elog = parse_event_log(args.log, schema, csv_cfg)
    elog = filter_pathways(elog, rules)
    scalers = fit_scalers(elog)
    encoded = encode(elog, scalers)
    if schema.target_activity is not None:
        if args.prefix_mode is not None:
            raise IngestError("bad_flag", "--prefix-mode applies to regression schemas only")
        ds = extract_prefixes_and_label(encoded, schema, scalers)
    elif schema.target_attribute is not None:
        mode = args.prefix_mode or "all"
        ds = build_regression_rows(encoded, schema, scalers, all_prefixes=(mode == "all"))
    else:
        raise SchemaError("no_target", "schema names neither target_activity nor target_attribute")
    save_dataset(ds, args.out)
    _write_manifest(
        args.out, "ingest",
        {"log": args.log, "schema": args.schema, "prefix_mode": args.prefix_mode},
        {"log": args.log, "schema": args.schema},
        {"dataset": args.out},
    )
    print(f"wrote {args.out}: {ds.n_rows} rows, {len(ds.pathway_ids())} pathways, task={ds.task}")
    return 0


def _cmd_simulate(args) -> int:
    config = simgen.SimConfig(n_pathways=args.n, seed=args.seed)
    pathways = simgen.generate(config)
    simgen.write_csv(pathways, args.out, config.base_time)
    schema_path = args.out + ".schema.json"
    simgen.write_sidecar(schema_path)
    _write_manifest(
        args.out, "simulate",
        {"n": args.n, "seed": args.seed},
        {},
        {"csv": args.out, "schema": schema_path},
    )
    print(f"wrote {args.out} ({args.n} pathways) and {schema_path}")
    return 0


def _cmd_detect(args) -> int:
    ds = load_dataset(args.dataset)
    report = detect_interactions(ds, top_k=args.k, budget=args.budget, seed=args.seed)
    if args.out:
        _write_json(args.out, report)
        _write_manifest(
            args.out, "detect-interactions",
            {"dataset": args.dataset, "k": args.k, "seed": args.seed, "budget": args.budget},
            {"dataset": args.dataset},
            {"report": args.out},
        )
    for rec in report["selected"]:
        print(f"selected: {rec['names'][0]} x {rec['names'][1]} (channels {rec['pair'][0]},{rec['pair'][1]}) auc={rec['auc']:.4f}")
    return 0


def _cmd_train(args) -> int:
    ds = load_dataset(args.dataset)
    hp = _load_hp(args.hp)
    interactions = _parse_interactions(args.interactions)
    if interactions and args.model != "patwaynet":
        raise EvalError("bad_flag", "--interactions only applies to --model patwaynet")
    if args.model in ("patwaynet", "lstm"):
        train_ds, val_ds = split_by_pathway(ds, (1.0 - args.val_fraction, args.val_fraction), seed=args.seed)
    else:
        train_ds, val_ds = ds, ds
    model = fit_model(args.model, train_ds, val_ds, hp, seed=args.seed, interactions=interactions)
    scores = predict_model(model, ds)
    metric = (
        f"train_auc={auc_roc(scores, ds.y):.4f}"
        if ds.task == "classification"
        else f"train_r2={r_squared(scores, ds.y):.4f}"
    )
    meta = {
        "schema_hash": ds.schema_hash,
        "static_features": [list(f) for f in ds.static_features],
        "sequential_features": [list(f) for f in ds.sequential_features],
        "task": ds.task,
        "hp": hp,
        "seed": args.seed,
        "interactions": [list(p) for p in interactions] if interactions else None,
    }
    if args.model == "patwaynet":
        model_hash = save_checkpoint(args.out, model, {"model_kind": "patwaynet", **meta})
    else:
        model_hash = save_baseline(args.out, model, {"model_kind": args.model, **meta})
    _write_manifest(
        args.out, "train",
        {"dataset": args.dataset, "model": args.model, "hp": hp, "seed": args.seed,
         "interactions": meta["interactions"], "val_fraction": args.val_fraction},
        {"dataset": args.dataset},
        {"checkpoint": args.out},
    )
    print(f"wrote {args.out} model={args.model} hash={model_hash[:12]} {metric}")
    return 0


def _cmd_evaluate(args) -> int:
    ds = load_dataset(args.dataset)
    with open(args.grid, "r", encoding="utf-8") as fh:
        grid_spec = json.load(fh)
    kinds = args.model.split(",") if args.model else list(grid_spec.keys())
    interactions = _parse_interactions(args.interactions)
    reports = []
    for kind in kinds:
        if kind not in grid_spec:
            raise EvalError("missing_grid", f"grid file has no entry for {kind!r}")
        grid = expand_grid(grid_spec[kind])
        reports.append(
            evaluate(
                kind, ds, grid, k=args.folds, seeds=args.seeds,
                interactions=interactions if kind == "patwaynet" else None,
                train_fraction=args.train_fraction,
            )
        )
    table = markdown_report(reports)
    _write_json(args.out, {"reports": reports})
    with open(args.out + ".md", "w", encoding="utf-8") as fh:
        fh.write(table)
    _write_manifest(
        args.out, "evaluate",
        {"dataset": args.dataset, "grid": args.grid, "models": kinds, "folds": args.folds,
         "seeds": args.seeds, "train_fraction": args.train_fraction},
        {"dataset": args.dataset, "grid": args.grid},
        {"report": args.out, "table": args.out + ".md"},
    )
    print(table, end="")
    return 0


def _load_patwaynet(path: str):
    payload = read_checkpoint(path)
    if payload.get("model_kind") != "patwaynet":
        raise CheckpointError("not_patwaynet", f"{path} holds a {payload.get('model_kind')} model")
    return load_checkpoint(path)


def _cmd_interpret(args) -> int:
    params, payload = _load_patwaynet(args.ckpt)
    ds = load_dataset(args.dataset)
    if payload.get("schema_hash", "") != ds.schema_hash:
        raise InterpretError("schema_mismatch", "checkpoint and dataset schemas differ")
    config = ExportConfig(top_k=args.top_k)
    bundle = export_bundle(params, ds, args.pathway, config, payload.get("model_hash", ""))
    _write_json(args.out, bundle)
    _write_manifest(
        args.out, "interpret",
        {"ckpt": args.ckpt, "dataset": args.dataset, "pathway": args.pathway, "top_k": args.top_k},
        {"ckpt": args.ckpt, "dataset": args.dataset},
        {"bundle": args.out},
    )
    print(f"wrote {args.out}: prediction={bundle['prediction']:.4f}")
    return 0


def _cmd_serve(args) -> int:
    from .service import create_app, run_service

    params, payload = _load_patwaynet(args.ckpt)
    ds = load_dataset(args.dataset)
    app = create_app(params, payload, ds, frontend_dir=args.frontend)
    run_service(app, args.addr)
    return 0


def _cmd_benchmark(args) -> int:
    from .baselines import fit_baseline, predict_baseline

    ds = load_dataset(args.dataset)
    if ds.task != "regression":
        raise EvalError("needs_regression", "benchmark compares train R2 on a regression dataset")
    params, payload = _load_patwaynet(args.ckpt)
    if payload.get("schema_hash", "") != ds.schema_hash:
        raise EvalError("schema_mismatch", "checkpoint and dataset schemas differ")
    rows = {"patwaynet": float(r_squared(predict_model(params, ds), ds.y))}
    for kind, hp in (
        ("ridge", {"alpha": 1.0, "snapshot": args.snapshot}),
        ("lasso", {"alpha": 0.001, "snapshot": args.snapshot}),
        ("tree_reg", {"max_depth": 3, "snapshot": args.snapshot}),
    ):
        model = fit_baseline(kind, ds, hp)
        rows[kind] = float(r_squared(predict_baseline(model, ds), ds.y))
    if args.out:
        _write_json(args.out, {"train_r2": rows, "snapshot": args.snapshot, "dataset": args.dataset})
        _write_manifest(
            args.out, "benchmark",
            {"dataset": args.dataset, "ckpt": args.ckpt, "snapshot": args.snapshot},
            {"dataset": args.dataset, "ckpt": args.ckpt},
            {"report": args.out},
        )
    for name, value in rows.items():
        print(f"{name:<10s} train_r2={value:.4f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="patwaynet", description="patient pathway prediction pipeline")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", help="event-log CSV to encoded dataset")
    p.add_argument("--log", required=True)
    p.add_argument("--schema", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--prefix-mode", choices=("all", "full"), default=None)
    p.set_defaults(func=_cmd_ingest)

    p = sub.add_parser("simulate", help="generate the synthetic event log")
    p.add_argument("--n", type=int, default=5000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("detect-interactions", help="rank sequential channel pairs")
    p.add_argument("--dataset", required=True)
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=100)
    p.add_argument("--out")
    p.set_defaults(func=_cmd_detect)

    p = sub.add_parser("train", help="fit one model and write a checkpoint")
    p.add_argument("--dataset", required=True)
    p.add_argument("--model", default="patwaynet",
                   choices=("patwaynet", "lstm", "logreg", "tree", "knn", "nb", "ridge", "lasso", "tree_reg"))
    p.add_argument("--hp", help="JSON dict or @file")
    p.add_argument("--interactions", help="'j,k[;j,k]' or @detection-report.json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--val-fraction", type=float, default=0.2)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_train)

    p = sub.add_parser("evaluate", help="cross-validated model comparison")
    p.add_argument("--dataset", required=True)
    p.add_argument("--grid", required=True)
    p.add_argument("--model", help="comma-separated kinds; default: all in grid file")
    p.add_argument("--folds", type=int, default=5)
    p.add_argument("--seeds", type=int, default=5)
    p.add_argument("--train-fraction", type=float, default=1.0)
    p.add_argument("--interactions", help="'j,k[;j,k]' or @detection-report.json")
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("interpret", help="write one patient interpretation bundle")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--pathway", required=True)
    p.add_argument("--top-k", type=int, default=20)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_interpret)

    p = sub.add_parser("serve", help="read-only HTTP service over a checkpoint")
    p.add_argument("--ckpt", required=True)
    p.add_argument("--dataset", required=True)
    p.add_argument("--addr")
    p.add_argument("--frontend")
    p.set_defaults(func=_cmd_serve)

    p = sub.add_parser("benchmark", help="train R2 of a checkpoint vs shallow regressors")
    p.add_argument("--dataset", required=True)
    p.add_argument("--ckpt", required=True)
    p.add_argument("--snapshot", choices=("carried", "event"), default="event")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_benchmark)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _KNOWN_ERRORS as exc:
        print(f"error: {exc.code}: {exc.message}", file=sys.stderr)
        return 2
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: invalid: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
