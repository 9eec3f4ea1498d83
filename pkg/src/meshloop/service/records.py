"""Evaluation-sequence records and their versioned JSON schema.

One EvaluationSequence is one session's ordered iterations; each iteration
holds exactly four variants.  Serialization is JSON-lines friendly: one
sequence per line via sequence_to_json / sequence_from_json.  Timestamps are
carried verbatim; two sequences are equal iff all fields (including
timestamps) match.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..mesh.core import ReductionParams

SCHEMA_VERSION = 1

STATE_COMPUTING = "computing"
STATE_AWAITING = "awaiting_ratings"
STATE_SATISFIED = "terminated_satisfied"
STATE_RESET = "terminated_reset"
STATE_MAX_ITER = "terminated_max_iter"

TERMINAL_STATES = frozenset({STATE_SATISFIED, STATE_RESET, STATE_MAX_ITER})
ALL_STATES = frozenset({STATE_COMPUTING, STATE_AWAITING}) | TERMINAL_STATES


@dataclass(frozen=True)
class VariantRecord:
    params: ReductionParams
    reduction_ratio: float
    faulty: bool
    quality_mean: float
    role: str
    quality_per_view: Optional[tuple] = None
    rating: Optional[int] = None

    def __post_init__(self):
        if self.rating is not None and self.rating not in range(6):
            raise ValueError(f"rating must be 0..5, got {self.rating}")
        if self.quality_per_view is not None:
            object.__setattr__(self, "quality_per_view",
                               tuple(float(v) for v in self.quality_per_view))

    def to_json_dict(self) -> dict:
        return {
            "params": [float(v) for v in self.params.as_array()],
            "reduction_ratio": self.reduction_ratio,
            "faulty": self.faulty,
            "quality_mean": self.quality_mean,
            "quality_per_view": (list(self.quality_per_view)
                                 if self.quality_per_view is not None else None),
            "rating": self.rating,
            "role": self.role,
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "VariantRecord":
        return cls(
            params=ReductionParams.from_array(d["params"]),
            reduction_ratio=float(d["reduction_ratio"]),
            faulty=bool(d["faulty"]),
            quality_mean=float(d["quality_mean"]),
            role=str(d["role"]),
            quality_per_view=(tuple(d["quality_per_view"])
                              if d.get("quality_per_view") is not None else None),
            rating=(int(d["rating"]) if d.get("rating") is not None else None),
        )


@dataclass(frozen=True)
class IterationRecord:
    index: int
    variants: tuple
    timestamp: float

    def __post_init__(self):
        if self.index < 1:
            raise ValueError("iteration index is 1-based")
        if len(self.variants) != 4:
            raise ValueError("an iteration holds exactly 4 variants")
        object.__setattr__(self, "variants", tuple(self.variants))

    @property
    def ratings(self) -> tuple:
        return tuple(v.rating for v in self.variants)

    def fully_rated(self) -> bool:
        return all(v.rating is not None for v in self.variants)

    def to_json_dict(self) -> dict:
        return {
            "index": self.index,
            "timestamp": self.timestamp,
            "variants": [v.to_json_dict() for v in self.variants],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "IterationRecord":
        return cls(
            index=int(d["index"]),
            timestamp=float(d["timestamp"]),
            variants=tuple(VariantRecord.from_json_dict(v) for v in d["variants"]),
        )


@dataclass(frozen=True)
class EvaluationSequence:
    session_id: str
    terminal_state: str
    iterations: tuple
    seed: int
    max_iterations: int
    mesh_label: str = ""
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.terminal_state not in TERMINAL_STATES:
            raise ValueError(f"not a terminal state: {self.terminal_state!r}")
        object.__setattr__(self, "iterations", tuple(self.iterations))
        if len(self.iterations) > self.max_iterations:
            raise ValueError("sequence longer than max_iterations")
        for pos, record in enumerate(self.iterations, start=1):
            if record.index != pos:
                raise ValueError("iteration indices must be contiguous from 1")

    def __len__(self) -> int:
        return len(self.iterations)

    def mean_ratings(self) -> list[float]:
        """Per-iteration mean over the four rating values (unrated -> skipped)."""
        out = []
        for record in self.iterations:
            values = [v.rating for v in record.variants if v.rating is not None]
            out.append(sum(values) / len(values) if values else float("nan"))
        return out

    def to_json_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "session_id": self.session_id,
            "terminal_state": self.terminal_state,
            "seed": self.seed,
            "max_iterations": self.max_iterations,
            "mesh_label": self.mesh_label,
            "metadata": self.metadata,
            "iterations": [r.to_json_dict() for r in self.iterations],
        }

    @classmethod
    def from_json_dict(cls, d: dict) -> "EvaluationSequence":
        version = d.get("schema_version")
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {version!r}")
        return cls(
            session_id=str(d["session_id"]),
            terminal_state=str(d["terminal_state"]),
            iterations=tuple(IterationRecord.from_json_dict(r) for r in d["iterations"]),
            seed=int(d["seed"]),
            max_iterations=int(d["max_iterations"]),
            mesh_label=str(d.get("mesh_label", "")),
            metadata=dict(d.get("metadata", {})),
        )


def sequence_to_json(seq: EvaluationSequence) -> str:
    """Single-line JSON form (JSONL element)."""
    return json.dumps(seq.to_json_dict(), separators=(",", ":"), sort_keys=True)


def sequence_from_json(line: str) -> EvaluationSequence:
    return EvaluationSequence.from_json_dict(json.loads(line))


def load_sequences(stream) -> list[EvaluationSequence]:
    """Parse a JSONL stream (file object or iterable of lines)."""
    out = []
    for line in stream:
        line = line.strip()
        if line:
            out.append(sequence_from_json(line))
    return out
