"""Dataset loading, the relaxed accuracy metric, and the evaluation harness."""

from __future__ import annotations

from .dataset import DatasetFormatError, DuplicateIdError, EvalItem, load_dataset
from .harness import EvalConfig, EvalReport, ItemResult, run_eval
from .metrics import relaxed_match

__all__ = [
    "DatasetFormatError",
    "DuplicateIdError",
    "EvalConfig",
    "EvalItem",
    "EvalReport",
    "ItemResult",
    "load_dataset",
    "relaxed_match",
    "run_eval",
]
