"""Train on a small triage log and serve the clinician dashboard.

Builds a classification dataset (so the urgency banner has real bands),
screens for the strongest sequential interaction, trains with that pair as
a joint corridor, and starts the HTTP service with the dashboard mounted.

Build the dashboard first:
    cd frontend && npm install && npm run build

Then run:
    python3 demos/serve_dashboard.py [workdir]
and open http://127.0.0.1:8000/ (override with --addr or $PATWAY_ADDR).
"""

import argparse
import json
import pathlib
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent
sys.path.insert(0, str(ROOT / "scripts"))

from make_dashboard_golden import write_toy_log  # noqa: E402

from patwaynet.cli import main as cli_main  # noqa: E402


def run(args: argparse.Namespace) -> int:
    work = pathlib.Path(args.workdir or tempfile.mkdtemp(prefix="patwaynet_demo_"))
    work.mkdir(parents=True, exist_ok=True)
    print(f"== working in {work}")

    csv = work / "triage.csv"
    schema = work / "triage_schema.json"
    ds = work / "dataset.jsonl"
    pairs = work / "pairs.json"
    ckpt = work / "model.ckpt"

    print("== 1. write and encode the triage log (label: ICU admission)")
    write_toy_log(csv, schema)
    assert cli_main(["ingest", "--log", str(csv), "--schema", str(schema),
                     "--out", str(ds)]) == 0

    print("== 2. screen sequential channel pairs for interactions")
    assert cli_main(["detect-interactions", "--dataset", str(ds), "--k", "1",
                     "--out", str(pairs)]) == 0

    print("== 3. train with the detected pair as a joint corridor")
    hp = json.dumps({"hidden_seq": 2, "hidden_stat": 4, "lr": 0.05,
                     "max_epochs": 150, "patience": 30})
    assert cli_main(["train", "--dataset", str(ds), "--hp", hp,
                     "--interactions", f"@{pairs}", "--out", str(ckpt)]) == 0

    frontend = ROOT / "frontend"
    if not (frontend / "dist" / "main.js").exists():
        print("!! frontend/dist/main.js missing; run `npm install && npm run build` "
              "in frontend/ first (the API still works without it)")

    print(f"== 4. serve; open http://{args.addr}/")
    return cli_main(["serve", "--ckpt", str(ckpt), "--dataset", str(ds),
                     "--addr", args.addr, "--frontend", str(frontend)])


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("workdir", nargs="?", default=None)
    parser.add_argument("--addr", default="127.0.0.1:8000")
    sys.exit(run(parser.parse_args()))
