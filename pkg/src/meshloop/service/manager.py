"""Session orchestration: propose, decimate, score, await ratings, repeat.

A SessionManager owns every live session.  Each session is a small state
machine (computing -> awaiting_ratings -> ... -> terminated_*) guarded by a
per-session condition variable; terminal states are absorbing.  Iteration
compute jobs run on one executor and fan the four variants out to a second
executor so a batch is decimated and scored in parallel without risking
pool-starvation deadlock.

Every state change is appended to the EventStore before it becomes visible,
so replaying the log after a restart reconstructs all sessions; compute jobs
lost to a crash are re-enqueued on recovery.
"""
from __future__ import annotations

import os
import threading
import time
import uuid
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

from ..mesh.core import ReductionParams, TriangleMesh
from ..mesh.decimate import decimate
from ..mesh.obj_io import dump_obj, load_mesh
from ..preference import (
    SLOT_ROLES,
    KernelConfig,
    PreferenceModel,
    fit,
    iteration_seed,
    propose_batch,
    ratings_to_pairs,
    validate_rating,
)
from ..render.quality import perceived_quality
from .records import (
    STATE_AWAITING,
    STATE_COMPUTING,
    STATE_MAX_ITER,
    STATE_RESET,
    STATE_SATISFIED,
    TERMINAL_STATES,
    EvaluationSequence,
    IterationRecord,
    VariantRecord,
    sequence_to_json,
)
from .store import (
    EVENT_CREATED,
    EVENT_ITERATION,
    EVENT_RATINGS,
    EVENT_TERMINATED,
    EventStore,
)

DEFAULT_MAX_ITERATIONS = 11
DEFAULT_SIZE_CAP = 8 * 1024 * 1024

_TERMINATE_REASONS = {"satisfied": STATE_SATISFIED, "reset": STATE_RESET}


class SessionNotFound(KeyError):
    pass


class WrongState(RuntimeError):
    pass


class IterationPending(RuntimeError):
    """The requested iteration is still being computed (retry later)."""


class IterationNotFound(KeyError):
    pass


class PayloadTooLarge(ValueError):
    pass


@dataclass
class _Session:
    session_id: str
    mesh: TriangleMesh
    original_obj: str
    mesh_label: str
    seed: int
    max_iterations: int
    state: str
    kernel: KernelConfig
    created_at: float

    def __post_init__(self):
        self.cond = threading.Condition()
        self.records: list[IterationRecord] = []
        self.variant_objs: list[list[str]] = []
        self.inputs: list[ReductionParams] = []
        self.pairs: list[tuple[int, int]] = []
        self.failure: Exception | None = None

    @property
    def current_index(self) -> int:
        return len(self.records)

    def snapshot(self) -> dict:
        return {
            "session_id": self.session_id,
            "state": self.state,
            "iteration_count": self.current_index,
            "max_iterations": self.max_iterations,
            "seed": self.seed,
            "mesh_label": self.mesh_label,
            "original_faces": self.mesh.n_faces,
            "created_at": self.created_at,
        }


class SessionManager:
    """Thread-safe owner of all sessions backed by one data directory."""

    def __init__(self, data_dir, max_iterations: int = DEFAULT_MAX_ITERATIONS,
                 workers: int | None = None,
                 size_cap_bytes: int = DEFAULT_SIZE_CAP):
        workers = workers or os.cpu_count() or 2
        self.store = EventStore(data_dir)
        self.max_iterations = int(max_iterations)
        self.size_cap_bytes = int(size_cap_bytes)
        self._iteration_pool = ThreadPoolExecutor(max_workers=workers,
                                                  thread_name_prefix="iteration")
        self._variant_pool = ThreadPoolExecutor(max_workers=max(4, workers),
                                                thread_name_prefix="variant")
        self._sessions: dict[str, _Session] = {}
        self._order: list[str] = []
        self._registry_lock = threading.Lock()
        self._recover()

    # -- public API --------------------------------------------------------

    def create_session(self, mesh_source, seed: int = 0,
                       max_iterations: int | None = None,
                       mesh_label: str = "mesh") -> dict:
        """Parse and persist an uploaded mesh, then enqueue iteration 1."""
        if isinstance(mesh_source, (bytes, str)):
            if len(mesh_source) > self.size_cap_bytes:
                raise PayloadTooLarge(
                    f"payload exceeds size cap of {self.size_cap_bytes} bytes")
        mesh = mesh_source if isinstance(mesh_source, TriangleMesh) \
            else load_mesh(mesh_source)
        session = _Session(
            session_id=uuid.uuid4().hex[:12],
            mesh=mesh,
            original_obj=dump_obj(mesh),
            mesh_label=mesh_label,
            seed=int(seed),
            max_iterations=int(max_iterations or self.max_iterations),
            state=STATE_COMPUTING,
            kernel=KernelConfig(),
            created_at=time.time(),
        )
        mesh_file = self.store.write_mesh(session.session_id, "original",
                                          session.original_obj)
        self.store.append(
            EVENT_CREATED, session.session_id,
            seed=session.seed, max_iterations=session.max_iterations,
            mesh_label=session.mesh_label, mesh_file=mesh_file,
            original_faces=mesh.n_faces, created_at=session.created_at,
            kernel={"lengthscale": session.kernel.lengthscale,
                    "smoothness": session.kernel.smoothness,
                    "signal_variance": session.kernel.signal_variance,
                    "noise_scale": session.kernel.noise_scale},
        )
        with self._registry_lock:
            self._sessions[session.session_id] = session
            self._order.append(session.session_id)
        self._iteration_pool.submit(self._compute_iteration, session, 1)
        return session.snapshot()

    def get_session(self, session_id: str) -> dict:
        session = self._lookup(session_id)
        with session.cond:
            return session.snapshot()

    def wait_for_iteration(self, session_id: str, timeout: float = 300.0):
        """Block until an unrated iteration is available.

        Returns its IterationRecord, or None once the session is terminal.
        """
        session = self._lookup(session_id)
        deadline = time.monotonic() + timeout
        with session.cond:
            while True:
                if session.failure is not None:
                    raise session.failure
                if session.state in TERMINAL_STATES:
                    return None
                if session.state == STATE_AWAITING:
                    record = session.records[-1]
                    return None if record.fully_rated() else record
                remaining = deadline - time.monotonic()
                if remaining <= 0:
                    raise TimeoutError("timed out waiting for iteration")
                session.cond.wait(remaining)

    def get_iteration(self, session_id: str, index: int):
        """Return (record, original OBJ, list of variant OBJ texts)."""
        session = self._lookup(session_id)
        with session.cond:
            if 1 <= index <= session.current_index:
                return (session.records[index - 1], session.original_obj,
                        list(session.variant_objs[index - 1]))
            if (index == session.current_index + 1
                    and session.state == STATE_COMPUTING):
                raise IterationPending(f"iteration {index} is computing")
            raise IterationNotFound(f"no iteration {index}")

    def submit_ratings(self, session_id: str, ratings, advance: bool = True) -> str:
        """Persist one batch of ratings; advance the loop or hit the cap."""
        ratings = list(ratings)
        if len(ratings) != 4:
            raise ValueError(f"expected exactly 4 ratings, got {len(ratings)}")
        ratings = [validate_rating(r) for r in ratings]
        session = self._lookup(session_id)
        with session.cond:
            if session.state != STATE_AWAITING:
                raise WrongState(
                    f"session {session_id} is {session.state}, not awaiting ratings")
            record = session.records[-1]
            if record.fully_rated():
                raise WrongState("current iteration is already rated")
            rated = replace(record, variants=tuple(
                replace(v, rating=r) for v, r in zip(record.variants, ratings)))
            self.store.append(EVENT_RATINGS, session_id,
                              index=record.index, ratings=ratings)
            session.records[-1] = rated
            offset = (record.index - 1) * 4
            session.pairs.extend(
                (p.preferred, p.less_preferred)
                for p in ratings_to_pairs(list(enumerate(ratings, start=offset)))
            )
            if record.index >= session.max_iterations:
                session.state = STATE_MAX_ITER
                self.store.append(EVENT_TERMINATED, session_id,
                                  state=STATE_MAX_ITER)
                session.cond.notify_all()
                return session.state
            if advance:
                session.state = STATE_COMPUTING
                self._iteration_pool.submit(self._compute_iteration, session,
                                            record.index + 1)
            session.cond.notify_all()
            return session.state

    def terminate(self, session_id: str, reason: str) -> str:
        if reason not in _TERMINATE_REASONS:
            raise ValueError(f"unknown terminate reason {reason!r}")
        session = self._lookup(session_id)
        with session.cond:
            if session.state in TERMINAL_STATES:
                raise WrongState(f"session already terminal: {session.state}")
            session.state = _TERMINATE_REASONS[reason]
            self.store.append(EVENT_TERMINATED, session_id, state=session.state)
            session.cond.notify_all()
            return session.state

    def get_sequence(self, session_id: str) -> EvaluationSequence:
        session = self._lookup(session_id)
        with session.cond:
            if session.state not in TERMINAL_STATES:
                raise WrongState("sequence is available once the session is terminal")
            return EvaluationSequence(
                session_id=session.session_id,
                terminal_state=session.state,
                iterations=tuple(session.records),
                seed=session.seed,
                max_iterations=session.max_iterations,
                mesh_label=session.mesh_label,
                metadata={"kind": "service"},
            )

    def export_sequences(self):
        """Yield one JSON line per terminated session, in creation order."""
        with self._registry_lock:
            ids = list(self._order)
        for sid in ids:
            session = self._sessions[sid]
            with session.cond:
                if session.state in TERMINAL_STATES:
                    yield sequence_to_json(self.get_sequence_unlocked(session))

    def get_sequence_unlocked(self, session: _Session) -> EvaluationSequence:
        return EvaluationSequence(
            session_id=session.session_id,
            terminal_state=session.state,
            iterations=tuple(session.records),
            seed=session.seed,
            max_iterations=session.max_iterations,
            mesh_label=session.mesh_label,
            metadata={"kind": "service"},
        )

    def shutdown(self):
        self._iteration_pool.shutdown(wait=True)
        self._variant_pool.shutdown(wait=True)

    # -- internals ----------------------------------------------------------

    def _lookup(self, session_id: str) -> _Session:
        with self._registry_lock:
            try:
                return self._sessions[session_id]
            except KeyError:
                raise SessionNotFound(session_id) from None

    def _compute_iteration(self, session: _Session, index: int) -> None:
        try:
            with session.cond:
                inputs = list(session.inputs)
                pairs = list(session.pairs)
            model = fit(pairs, inputs) if pairs else PreferenceModel.empty()
            batch = propose_batch(model, iteration_seed(session.seed, index))
            futures = [
                self._variant_pool.submit(self._build_variant, session.mesh,
                                          params, role)
                for params, role in zip(batch, SLOT_ROLES)
            ]
            variants = []
            objs = []
            for future in futures:
                variant, obj_text = future.result()
                variants.append(variant)
                objs.append(obj_text)
            record = IterationRecord(index=index, variants=tuple(variants),
                                     timestamp=time.time())
            with session.cond:
                if session.state != STATE_COMPUTING:
                    return  # terminated while computing; drop the result
                mesh_files = [
                    self.store.write_mesh(session.session_id,
                                          f"it{index:02d}_v{slot}", obj_text)
                    for slot, obj_text in enumerate(objs, start=1)
                ]
                self.store.append(
                    EVENT_ITERATION, session.session_id, index=index,
                    timestamp=record.timestamp,
                    variants=[dict(v.to_json_dict(), mesh_file=f)
                              for v, f in zip(variants, mesh_files)],
                )
                session.records.append(record)
                session.variant_objs.append(objs)
                session.inputs.extend(batch)
                session.state = STATE_AWAITING
                session.cond.notify_all()
        except Exception as exc:  # surfaced to waiters instead of vanishing
            with session.cond:
                session.failure = exc
                session.cond.notify_all()

    @staticmethod
    def _build_variant(mesh: TriangleMesh, params: ReductionParams, role: str):
        result = decimate(mesh, params)
        quality = perceived_quality(mesh, result.mesh)
        variant = VariantRecord(
            params=params,
            reduction_ratio=result.reduction_ratio,
            faulty=result.faulty,
            quality_mean=quality.mean,
            role=role,
            quality_per_view=quality.per_view,
        )
        return variant, dump_obj(result.mesh)

    def _recover(self) -> None:
        """Rebuild sessions from the event log; re-enqueue lost compute jobs."""
        for event in self.store.replay():
            sid = event["session_id"]
            kind = event["event"]
            if kind == EVENT_CREATED:
                obj_text = self.store.read_mesh(event["mesh_file"])
                session = _Session(
                    session_id=sid,
                    mesh=load_mesh(obj_text),
                    original_obj=obj_text,
                    mesh_label=event.get("mesh_label", "mesh"),
                    seed=int(event["seed"]),
                    max_iterations=int(event["max_iterations"]),
                    state=STATE_COMPUTING,
                    kernel=KernelConfig(**event.get("kernel", {})),
                    created_at=float(event.get("created_at", 0.0)),
                )
                self._sessions[sid] = session
                self._order.append(sid)
                continue
            session = self._sessions[sid]
            if kind == EVENT_ITERATION:
                variants = tuple(VariantRecord.from_json_dict(v)
                                 for v in event["variants"])
                session.records.append(IterationRecord(
                    index=int(event["index"]), variants=variants,
                    timestamp=float(event["timestamp"])))
                session.variant_objs.append([
                    self.store.read_mesh(v["mesh_file"])
                    for v in event["variants"]
                ])
                session.inputs.extend(v.params for v in variants)
                session.state = STATE_AWAITING
            elif kind == EVENT_RATINGS:
                index = int(event["index"])
                ratings = [int(r) for r in event["ratings"]]
                record = session.records[index - 1]
                session.records[index - 1] = replace(record, variants=tuple(
                    replace(v, rating=r)
                    for v, r in zip(record.variants, ratings)))
                offset = (index - 1) * 4
                session.pairs.extend(
                    (p.preferred, p.less_preferred)
                    for p in ratings_to_pairs(list(enumerate(ratings, start=offset)))
                )
            elif kind == EVENT_TERMINATED:
                session.state = str(event["state"])
        for sid in self._order:
            session = self._sessions[sid]
            if session.state in TERMINAL_STATES:
                continue
            if not session.records or session.records[-1].fully_rated():
                # compute job was lost in the crash; run it again
                next_index = session.current_index + 1
                if next_index > session.max_iterations:
                    session.state = STATE_MAX_ITER
                    self.store.append(EVENT_TERMINATED, sid, state=STATE_MAX_ITER)
                    continue
                session.state = STATE_COMPUTING
                self._iteration_pool.submit(self._compute_iteration, session,
                                            next_index)
            else:
                session.state = STATE_AWAITING
