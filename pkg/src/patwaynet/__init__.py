"""Interpretable patient-pathway prediction over clinical event logs.

Static patient attributes pass through per-feature shape networks; the event
sequence passes through a recurrent cell whose weights are masked into
per-feature corridors; one linear connection layer sums every part into the
prediction. The additive structure makes every effect readable directly off
the fitted parameters.
"""

__version__ = "0.1.0"

from . import nncore
from .encoding import (
    EncodedDataset,
    ScalerSet,
    build_full_sequences,
    build_regression_rows,
    encode,
    extract_prefixes_and_label,
    fit_scalers,
    load_dataset,
    save_dataset,
    split_by_pathway,
)
from .eventlog import EventLog, IngestError, PatientPathway, filter_pathways, parse_event_log
from .metrics import auc_roc, f1_weighted, r_squared
from .schema import CsvConfig, FeatureSchema, FilterRules, SchemaError, load_sidecar

__all__ = [
    "CsvConfig",
    "EncodedDataset",
    "EventLog",
    "FeatureSchema",
    "FilterRules",
    "IngestError",
    "PatientPathway",
    "ScalerSet",
    "SchemaError",
    "auc_roc",
    "build_full_sequences",
    "build_regression_rows",
    "encode",
    "extract_prefixes_and_label",
    "f1_weighted",
    "filter_pathways",
    "fit_scalers",
    "load_dataset",
    "load_sidecar",
    "nncore",
    "parse_event_log",
    "r_squared",
    "save_dataset",
    "split_by_pathway",
    "__version__",
]
