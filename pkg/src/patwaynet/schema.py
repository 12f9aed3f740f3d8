"""Feature schema and CSV layout declarations for event-log ingestion.

A schema names the static attributes (one value per pathway), the sequential
attributes (values ride on events), the activity column, and the prediction
target. It is declared in a JSON or TOML sidecar next to the CSV so a dataset
is self-describing.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field

FEATURE_KINDS = ("numeric", "binary", "categorical")


class SchemaError(ValueError):
    """Raised for malformed schema declarations. `code` is machine-parseable."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class CsvConfig:
    """CSV layout: column names for the three required fields plus dialect."""

    case_column: str = "case_id"
    timestamp_column: str = "timestamp"
    delimiter: str = ","
    encoding: str = "utf-8"
    # None means ISO-8601 (datetime.fromisoformat); otherwise a strptime format.
    timestamp_format: str | None = None


@dataclass(frozen=True)
class FilterRules:
    """Pathway-level admission rules applied before encoding."""

    min_events: int = 3
    max_events: int = 50
    required_start: str | None = "ER Registration"


@dataclass(frozen=True)
class FeatureSchema:
    static_features: tuple[tuple[str, str], ...]
    sequential_features: tuple[tuple[str, str], ...]
    activity_feature: str = "activity"
    target_activity: str | None = None
    # Regression label column (repeated per event, one value per pathway).
    target_attribute: str | None = None
    carry_forward: frozenset[str] = field(default_factory=frozenset)
    excluded: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self):
        seen: set[str] = set()
        for name, kind in list(self.static_features) + list(self.sequential_features):
            if kind not in FEATURE_KINDS:
                raise SchemaError("bad_kind", f"feature {name!r} has unknown kind {kind!r}")
            if name in seen:
                raise SchemaError("duplicate_feature", f"feature {name!r} declared twice")
            seen.add(name)
        seq_numeric = {n for n, k in self.sequential_features if k == "numeric"}
        extra = set(self.carry_forward) - seq_numeric
        if extra:
            raise SchemaError(
                "bad_carry_forward",
                f"carry_forward names must be sequential numeric features: {sorted(extra)}",
            )
        if self.target_attribute is not None and self.target_attribute in seen:
            raise SchemaError(
                "target_is_feature",
                f"target attribute {self.target_attribute!r} must not be an input feature",
            )

    def active_static(self) -> tuple[tuple[str, str], ...]:
        return tuple((n, k) for n, k in self.static_features if n not in self.excluded)

    def active_sequential(self) -> tuple[tuple[str, str], ...]:
        return tuple((n, k) for n, k in self.sequential_features if n not in self.excluded)

    def canonical_dict(self) -> dict:
        return {
            "static": [list(f) for f in self.active_static()],
            "sequential": [list(f) for f in self.active_sequential()],
            "activity": self.activity_feature,
            "target_activity": self.target_activity,
            "target_attribute": self.target_attribute,
            "carry_forward": sorted(self.carry_forward),
        }

    def hash(self) -> str:
        blob = json.dumps(self.canonical_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(blob.encode("utf-8")).hexdigest()


def _load_toml(path: str) -> dict:
    try:
        import tomllib as toml_mod  # 3.11+
    except ImportError:  # pragma: no cover - depends on interpreter version
        import tomli as toml_mod
    with open(path, "rb") as fh:
        return toml_mod.load(fh)


def load_sidecar(path: str) -> tuple[FeatureSchema, CsvConfig, FilterRules]:
    """Read a JSON or TOML sidecar into (schema, csv config, filter rules).

    Recognised keys: static, sequential, activity, target_activity,
    target_attribute, carry_forward, excluded, csv {...}, filter {...}.
    """
    if path.endswith(".toml"):
        raw = _load_toml(path)
    else:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    if not isinstance(raw, dict):
        raise SchemaError("bad_sidecar", f"sidecar {path!r} must hold a table/object")

    def pairs(key: str) -> tuple[tuple[str, str], ...]:
        out = []
        for item in raw.get(key, []):
            if not (isinstance(item, (list, tuple)) and len(item) == 2):
                raise SchemaError("bad_sidecar", f"{key} entries must be [name, kind] pairs")
            out.append((str(item[0]), str(item[1])))
        return tuple(out)

    schema = FeatureSchema(
        static_features=pairs("static"),
        sequential_features=pairs("sequential"),
        activity_feature=str(raw.get("activity", "activity")),
        target_activity=raw.get("target_activity"),
        target_attribute=raw.get("target_attribute"),
        carry_forward=frozenset(raw.get("carry_forward", [])),
        excluded=frozenset(raw.get("excluded", [])),
    )
    csv_raw = raw.get("csv", {})
    csv_config = CsvConfig(
        case_column=csv_raw.get("case_column", "case_id"),
        timestamp_column=csv_raw.get("timestamp_column", "timestamp"),
        delimiter=csv_raw.get("delimiter", ","),
        encoding=csv_raw.get("encoding", "utf-8"),
        timestamp_format=csv_raw.get("timestamp_format"),
    )
    filt_raw = raw.get("filter", {})
    rules = FilterRules(
        min_events=int(filt_raw.get("min_events", 3)),
        max_events=int(filt_raw.get("max_events", 50)),
        required_start=filt_raw.get("required_start", "ER Registration"),
    )
    return schema, csv_config, rules
