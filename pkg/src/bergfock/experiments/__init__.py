"""Verification suites that turn limit theorems and inequalities into sweeps."""

from .berezin_checks import berezin_suite
from .limits import limit_suite
from .orthogonality import orthogonality_suite
from .records import SweepRecord, make_record, records_csv, verdict_json, write_suite
from .sharp import sharp_bound_suite
from .szego import szego_suite

__all__ = [
    "SweepRecord",
    "berezin_suite",
    "limit_suite",
    "make_record",
    "orthogonality_suite",
    "records_csv",
    "sharp_bound_suite",
    "szego_suite",
    "verdict_json",
    "write_suite",
]
