"""Regenerate the dashboard golden fixtures in frontend/tests/golden/.

Runs the full offline pipeline (ingest -> detect-interactions -> train) on a
small hand-written ICU triage log, then captures the raw bytes of every HTTP
endpoint the dashboard consumes. The fixtures are byte-stable: the log, the
seeds and the training config are all fixed, so rerunning this script must
reproduce the committed files exactly.

Usage: python3 scripts/make_dashboard_golden.py
"""

import json
import pathlib
import sys
import tempfile

import numpy as np

ROOT = pathlib.Path(__file__).resolve().parent.parent
GOLDEN = ROOT / "frontend" / "tests" / "golden"

from fastapi.testclient import TestClient

from patwaynet.cli import main as cli_main
from patwaynet.encoding import load_dataset
from patwaynet.interpret import ExportConfig
from patwaynet.nncore.checkpoint import load_checkpoint
from patwaynet.service import create_app


def write_toy_log(csv_path: pathlib.Path, schema_path: pathlib.Path) -> None:
    """24 ER cases with vitals; the sick half escalates to ICU admission.

    Risk rises with heart rate, lactate and age together, so the trained
    model has real static and sequential structure to display. Prefix
    lengths vary between cases to exercise the timeline and step slider.
    """
    rng = np.random.default_rng(7)
    rows = ["case_id,activity,timestamp,Age,Gender,HR,Lactate"]
    stamp = "2024-03-0{day}T{hh:02d}:{mm:02d}:00"
    for i in range(24):
        sick = i % 2
        day = 1 + i % 7
        age = round(float(rng.uniform(0.55, 0.95) if sick else rng.uniform(0.1, 0.6)), 3)
        gender = i % 3 == 0
        cid = f"case_{i:02d}"

        def ev(minute, activity, hr="", lac=""):
            t = stamp.format(day=day, hh=8 + minute // 60, mm=minute % 60)
            rows.append(f"{cid},{activity},{t},{age},{int(gender)},{hr},{lac}")

        hr0 = round(float(rng.uniform(0.55, 0.9) if sick else rng.uniform(0.2, 0.5)), 3)
        lac0 = round(float(rng.uniform(0.5, 0.9) if sick else rng.uniform(0.1, 0.45)), 3)
        ev(0, "ER Registration")
        ev(10, "Heart Rate", hr=hr0)
        ev(20, "Lactate", lac=lac0)
        ev(30, "Ward")
        extra = i % 4  # 0..3 extra vitals rounds so prefix lengths differ
        for k in range(extra):
            drift = round(float(rng.uniform(-0.05, 0.1 if sick else 0.02)), 3)
            ev(40 + 20 * k, "Heart Rate", hr=round(min(max(hr0 + drift, 0.0), 1.0), 3))
        ev(40 + 20 * extra, "Ward")
        if sick:
            ev(60 + 20 * extra, "ICU")
    csv_path.write_text("\n".join(rows) + "\n")

    schema_path.write_text(json.dumps({
        "static": [["Age", "numeric"], ["Gender", "binary"]],
        "sequential": [["HR", "numeric"], ["Lactate", "numeric"]],
        "activity": "activity",
        "target_activity": "ICU",
        "target_attribute": None,
        "carry_forward": ["HR", "Lactate"],
        "excluded": [],
        "csv": {"case_column": "case_id", "timestamp_column": "timestamp",
                "delimiter": ","},
        "filter": {"min_events": 3, "max_events": 50,
                   "required_start": "ER Registration"},
    }, indent=2))


def main() -> int:
    GOLDEN.mkdir(parents=True, exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        work = pathlib.Path(tmp)
        csv_path = work / "icu_log.csv"
        schema_path = work / "icu_schema.json"
        write_toy_log(csv_path, schema_path)

        ds_path = work / "ds.jsonl"
        pairs_path = work / "pairs.json"
        ckpt_path = work / "model.ckpt"
        assert cli_main(["ingest", "--log", str(csv_path), "--schema",
                         str(schema_path), "--out", str(ds_path)]) == 0
        assert cli_main(["detect-interactions", "--dataset", str(ds_path),
                         "--k", "1", "--out", str(pairs_path)]) == 0
        hp = json.dumps({"hidden_seq": 2, "hidden_stat": 4, "lr": 0.05,
                         "max_epochs": 150, "patience": 30})
        assert cli_main(["train", "--dataset", str(ds_path), "--hp", hp,
                         "--interactions", f"@{pairs_path}",
                         "--out", str(ckpt_path)]) == 0

        params, payload = load_checkpoint(str(ckpt_path))
        ds = load_dataset(str(ds_path))
        # small grids keep the fixtures reviewable while exercising every panel
        config = ExportConfig(grid_points=21, surface_points=9,
                              mean_shape_contexts=50)
        client = TestClient(create_app(params, payload, ds, config=config))

        listing = client.get("/api/patients")
        listing.raise_for_status()
        # a sick case with the longest prefix makes the richest display
        patients = listing.json()["patients"]
        pid = max(patients, key=lambda p: (p["prefix_len"], p["prediction"]))["pathway_id"]

        captures = {
            "patients.json": "/api/patients",
            "patient.json": f"/api/patients/{pid}",
            "prediction.json": f"/api/patients/{pid}/prediction",
            "interpretation.json": f"/api/patients/{pid}/interpretation",
            "importance.json": "/api/model/importance",
        }
        for fname, route in captures.items():
            resp = client.get(route)
            resp.raise_for_status()
            (GOLDEN / fname).write_bytes(resp.content)
            print(f"wrote {GOLDEN / fname} ({len(resp.content)} bytes)")
    return 0


if __name__ == "__main__":
    sys.exit(main())
