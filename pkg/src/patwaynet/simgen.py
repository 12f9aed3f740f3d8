"""Synthetic pathway generator with a known additive ground-truth label.

Every pathway has 12 events: registration, three Heart Rate measurements
(steps 2-4), three Blood Pressure measurements (steps 5-7), then five
medication events (four A, one B, randomly ordered) on steps 8-12. Heart
Rate moves strictly up or strictly down by 30% per measurement; Blood
Pressure redraws its direction each step. The label sums five parts, each
worth up to 0.2, so y is in [0, 1]:

  gender      0.2 for female patients
  age         -0.8 (age - 0.5)^2 + 0.2
  pattern     0.2 when steps 8-11 are all A and step 12 is B
  hr level    -0.8 (first heart-rate value - 0.5)^2 + 0.2
  hr trend    0.2 when the heart-rate channel rises at steps 2, 3 and 4
              (the channel is 0 before the first measurement)

The generator emits the standard event-log CSV plus a schema sidecar, so the
whole ingestion pipeline runs unchanged on synthetic data; the label rides
along as a per-pathway `outcome` column declared as target_attribute.
"""

from __future__ import annotations

import csv
import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timedelta

import numpy as np

ACTIVITIES = ("ER Registration", "Heart Rate", "Blood Pressure", "Medication A", "Medication B")
N_EVENTS = 12
HR_STEPS = (2, 3, 4)  # 1-based event positions
BP_STEPS = (5, 6, 7)
MED_STEPS = (8, 9, 10, 11, 12)


@dataclass(frozen=True)
class SimConfig:
    n_pathways: int = 1000
    seed: int = 0
    base_time: str = "2024-01-01T08:00:00"


@dataclass
class SimPathway:
    pathway_id: str
    age: float
    bmi: float
    gender: int  # 1 = female
    foreigner: int
    hr: tuple[float, float, float]
    bp: tuple[float, float, float]
    meds: tuple[str, ...]  # five entries of "A" / "B"
    parts: dict[str, float] = field(default_factory=dict)

    @property
    def y(self) -> float:
        return float(sum(self.parts.values()))


def label_parts(
    age: float, gender: int, hr: tuple[float, float, float], meds: tuple[str, ...]
) -> dict[str, float]:
    """Ground-truth label decomposition for any structurally valid pathway."""
    hr_channel = (0.0, hr[0], hr[1], hr[2])  # channel value at steps 1..4
    rising = all(hr_channel[i + 1] - hr_channel[i] > 0 for i in range(3))
    return {
        "gender": 0.2 if gender == 1 else 0.0,
        "age": -0.8 * (age - 0.5) ** 2 + 0.2,
        "pattern": 0.2 if meds == ("A", "A", "A", "A", "B") else 0.0,
        "hr_level": -0.8 * (hr[0] - 0.5) ** 2 + 0.2,
        "hr_trend": 0.2 if rising else 0.0,
    }


def generate(config: SimConfig) -> list[SimPathway]:
    rng = np.random.default_rng(config.seed)
    width = len(str(max(config.n_pathways - 1, 1)))
    out = []
    for i in range(config.n_pathways):
        age = float(rng.uniform(0, 1))
        bmi = float(rng.uniform(0, 1))
        gender = int(rng.integers(0, 2))
        foreigner = int(rng.integers(0, 2))

        rising = bool(rng.integers(0, 2))
        start = float(rng.uniform(0.2, 0.45) if rising else rng.uniform(0.55, 0.8))
        factor = 1.3 if rising else 0.7
        hr = (start, start * factor, start * factor * factor)

        bp_vals = [float(rng.uniform(0.3, 0.55))]
        for _ in range(2):
            bp_vals.append(bp_vals[-1] * (1.3 if rng.integers(0, 2) else 0.7))
        bp = tuple(bp_vals)

        meds = ["A", "A", "A", "A", "B"]
        perm = rng.permutation(5)
        meds = tuple(meds[j] for j in perm)

        pw = SimPathway(
            pathway_id=f"sim_{i:0{width}d}",
            age=age,
            bmi=bmi,
            gender=gender,
            foreigner=foreigner,
            hr=hr,
            bp=bp,
            meds=meds,
        )
        pw.parts = label_parts(age, gender, hr, meds)
        out.append(pw)
    return out


def _events(pw: SimPathway) -> list[tuple[str, float | None, float | None]]:
    """(activity, hr value, bp value) per event position."""
    rows: list[tuple[str, float | None, float | None]] = [("ER Registration", None, None)]
    for v in pw.hr:
        rows.append(("Heart Rate", v, None))
    for v in pw.bp:
        rows.append(("Blood Pressure", None, v))
    for m in pw.meds:
        rows.append((f"Medication {m}", None, None))
    return rows


CSV_COLUMNS = [
    "case_id",
    "activity",
    "timestamp",
    "Heart Rate",
    "Blood Pressure",
    "Age",
    "BMI",
    "Gender",
    "Foreigner",
    "outcome",
]


def write_csv(pathways: list[SimPathway], path: str, base_time: str = "2024-01-01T08:00:00") -> None:
    base = datetime.fromisoformat(base_time)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for i, pw in enumerate(pathways):
            start = base + timedelta(hours=i)
            for e, (activity, hr, bp) in enumerate(_events(pw)):
                writer.writerow(
                    [
                        pw.pathway_id,
                        activity,
                        (start + timedelta(minutes=10 * e)).isoformat(),
                        repr(hr) if hr is not None else "",
                        repr(bp) if bp is not None else "",
                        repr(pw.age),
                        repr(pw.bmi),
                        str(pw.gender),
                        str(pw.foreigner),
                        repr(pw.y),
                    ]
                )


SIDECAR = {
    "static": [["Age", "numeric"], ["BMI", "numeric"], ["Gender", "binary"], ["Foreigner", "binary"]],
    "sequential": [["Heart Rate", "numeric"], ["Blood Pressure", "numeric"]],
    "activity": "activity",
    "target_activity": None,
    "target_attribute": "outcome",
    "carry_forward": ["Heart Rate", "Blood Pressure"],
    "excluded": [],
    "csv": {"case_column": "case_id", "timestamp_column": "timestamp", "delimiter": ","},
    "filter": {"min_events": 3, "max_events": 50, "required_start": "ER Registration"},
}


def write_sidecar(path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(SIDECAR, fh, indent=2, sort_keys=True)
        fh.write("\n")


def simulate_to_dir(config: SimConfig, out_dir: str) -> dict[str, str]:
    """Write pathways.csv and schema.json; returns the produced paths."""
    os.makedirs(out_dir, exist_ok=True)
    paths = {
        "csv": os.path.join(out_dir, "pathways.csv"),
        "schema": os.path.join(out_dir, "schema.json"),
    }
    pathways = generate(config)
    write_csv(pathways, paths["csv"], config.base_time)
    write_sidecar(paths["schema"])
    return paths
