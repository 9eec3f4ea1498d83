"""HTTP session loop: propose, decimate, score, collect ratings, persist."""
from .manager import (
    IterationNotFound,
    IterationPending,
    PayloadTooLarge,
    SessionManager,
    SessionNotFound,
    WrongState,
)
from .records import (
    SCHEMA_VERSION,
    TERMINAL_STATES,
    EvaluationSequence,
    IterationRecord,
    VariantRecord,
    load_sequences,
    sequence_from_json,
    sequence_to_json,
)
from .store import EventStore

__all__ = [
    "SCHEMA_VERSION",
    "TERMINAL_STATES",
    "EvaluationSequence",
    "EventStore",
    "IterationNotFound",
    "IterationPending",
    "IterationRecord",
    "PayloadTooLarge",
    "SessionManager",
    "SessionNotFound",
    "VariantRecord",
    "WrongState",
    "load_sequences",
    "sequence_from_json",
    "sequence_to_json",
]
