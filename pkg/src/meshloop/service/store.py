"""Append-only event log for sessions, with OBJ payloads as sidecar files.

One JSON object per line in events.jsonl; every event carries the schema
version, an event type, and a session id.  Mesh geometry is kept out of the
log (it would dwarf everything else) and written once to
meshes/<session-id>/<name>.obj, referenced from events by relative path.
Replaying the log reconstructs every session's full history, which is the
crash-recovery story: no other state is authoritative.
"""
from __future__ import annotations

import json
import os
import threading
from pathlib import Path
from typing import Iterator

SCHEMA_VERSION = 1

EVENT_CREATED = "session_created"
EVENT_ITERATION = "iteration_computed"
EVENT_RATINGS = "ratings_submitted"
EVENT_TERMINATED = "terminated"


class EventStore:
    """Durable, append-only JSONL event log under one data directory."""

    def __init__(self, data_dir):
        self.root = Path(data_dir)
        self.root.mkdir(parents=True, exist_ok=True)
        (self.root / "meshes").mkdir(exist_ok=True)
        self._path = self.root / "events.jsonl"
        self._lock = threading.Lock()

    def append(self, event_type: str, session_id: str, **payload) -> dict:
        event = {"schema_version": SCHEMA_VERSION, "event": event_type,
                 "session_id": session_id, **payload}
        line = json.dumps(event, separators=(",", ":"), sort_keys=True)
        with self._lock:
            with open(self._path, "a", encoding="utf-8") as fh:
                fh.write(line + "\n")
                fh.flush()
                os.fsync(fh.fileno())
        return event

    def replay(self) -> Iterator[dict]:
        """Yield all persisted events in append order."""
        if not self._path.exists():
            return
        with open(self._path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if line:
                    yield json.loads(line)

    # mesh sidecars -------------------------------------------------------

    def write_mesh(self, session_id: str, name: str, obj_text: str) -> str:
        """Store one OBJ payload; returns the log-relative reference."""
        directory = self.root / "meshes" / session_id
        directory.mkdir(parents=True, exist_ok=True)
        rel = f"meshes/{session_id}/{name}.obj"
        (self.root / rel).write_text(obj_text, encoding="utf-8")
        return rel

    def read_mesh(self, rel: str) -> str:
        return (self.root / rel).read_text(encoding="utf-8")
