"""Event-log parsing and pathway-level filtering.

A pathway is one case: its events sorted by timestamp plus one set of static
attributes. Static attributes may repeat on every CSV row; conflicting
non-empty values within a case are an error rather than a silent pick.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from datetime import datetime

from .schema import CsvConfig, FeatureSchema, FilterRules

log = logging.getLogger("patwaynet")


class IngestError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class Event:
    activity: str
    timestamp: datetime
    attrs: dict[str, str]  # raw strings for sequential attrs, "" when absent


@dataclass
class PatientPathway:
    pathway_id: str
    events: list[Event]
    static_attrs: dict[str, str]

    def __len__(self) -> int:
        return len(self.events)


@dataclass
class EventLog:
    pathways: list[PatientPathway]
    schema: FeatureSchema

    def __len__(self) -> int:
        return len(self.pathways)


def _open_text(source, encoding: str):
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            return io.StringIO(data.decode(encoding))
        return io.StringIO(data)
    if isinstance(source, bytes):
        return io.StringIO(source.decode(encoding))
    return open(source, "r", encoding=encoding, newline="")


def _parse_timestamp(raw: str, fmt: str | None, row_no: int) -> datetime:
    try:
        if fmt is None:
            # Tolerate the common trailing-Z spelling of UTC.
            return datetime.fromisoformat(raw.strip().replace("Z", "+00:00"))
        return datetime.strptime(raw.strip(), fmt)
    except ValueError:
        raise IngestError(
            "bad_timestamp", f"row {row_no}: unparseable timestamp {raw!r}"
        ) from None


def parse_event_log(source, schema: FeatureSchema, config: CsvConfig | None = None) -> EventLog:
    """Parse a CSV event log (path, bytes, or file-like) into pathways.

    Events are grouped by the case column and sorted by timestamp; ties keep
    file order. Static attributes are lifted from event rows; two different
    non-empty values for the same static attribute within a case raise.
    """
    config = config or CsvConfig()
    static_names = [n for n, _ in schema.static_features]
    if schema.target_attribute is not None:
        static_names = static_names + [schema.target_attribute]
    seq_names = [n for n, _ in schema.sequential_features]

    fh = _open_text(source, config.encoding)
    try:
        reader = csv.DictReader(fh, delimiter=config.delimiter)
        header = reader.fieldnames or []
        required_columns = [config.case_column, schema.activity_feature, config.timestamp_column]
        required_columns += static_names + seq_names
        for required in required_columns:
            if required not in header:
                raise IngestError("missing_column", f"required column {required!r} not in header")

        order: list[str] = []
        events: dict[str, list[tuple[datetime, int, Event]]] = {}
        statics: dict[str, dict[str, str]] = {}
        for row_no, row in enumerate(reader, start=2):
            case = (row.get(config.case_column) or "").strip()
            if case == "":
                raise IngestError("missing_case", f"row {row_no}: empty case id")
            ts = _parse_timestamp(row.get(config.timestamp_column) or "", config.timestamp_format, row_no)
            activity = (row.get(schema.activity_feature) or "").strip()
            if case not in events:
                events[case] = []
                statics[case] = {}
                order.append(case)
            for name in static_names:
                value = (row.get(name) or "").strip()
                if value == "":
                    continue
                prev = statics[case].get(name)
                if prev is None:
                    statics[case][name] = value
                elif prev != value:
                    raise IngestError(
                        "conflicting_static",
                        f"case {case!r}: static attribute {name!r} has values {prev!r} and {value!r}",
                    )
            attrs = {name: (row.get(name) or "").strip() for name in seq_names}
            events[case].append((ts, row_no, Event(activity, ts, attrs)))
    finally:
        fh.close()

    pathways = []
    for case in order:
        rows = sorted(events[case], key=lambda item: (item[0], item[1]))
        pathways.append(PatientPathway(case, [e for _, _, e in rows], statics[case]))
    return EventLog(pathways, schema)


def filter_pathways(elog: EventLog, rules: FilterRules | None = None) -> EventLog:
    """Keep pathways within the event-count band whose first activity matches.

    Defaults keep lengths in [3, 50] starting at "ER Registration". An empty
    result is an error: downstream fitting has nothing to learn from.
    """
    rules = rules or FilterRules()
    kept = []
    for pw in elog.pathways:
        n = len(pw.events)
        if n < rules.min_events or n > rules.max_events:
            continue
        if rules.required_start is not None and (
            not pw.events or pw.events[0].activity != rules.required_start
        ):
            continue
        kept.append(pw)
    dropped = len(elog.pathways) - len(kept)
    if dropped:
        log.info("filter_pathways: dropped %d of %d pathways", dropped, len(elog.pathways))
    if not kept:
        raise IngestError("empty_after_filter", "no pathways remain after filtering")
    return EventLog(kept, elog.schema)
