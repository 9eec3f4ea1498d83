"""Statistics over evaluation-sequence corpora: rank tests, trend, reports."""
from .report import (
    CorpusStats,
    corpus_report,
    derive_series,
    sequence_satisfied,
    write_report,
)
from .stats import adf_test, kendall_tau, mann_kendall, mann_whitney_u

__all__ = [
    "CorpusStats",
    "adf_test",
    "corpus_report",
    "derive_series",
    "kendall_tau",
    "mann_kendall",
    "mann_whitney_u",
    "sequence_satisfied",
    "write_report",
]
