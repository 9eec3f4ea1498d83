"""Drive full rating loops with a simulated rater.

Two backends:

- run_synthetic_session: no meshes; a caller-supplied utility over the
  parameter cube stands in for perceived quality.  This is the engine for
  convergence and bias experiments (50-seed corpora run in seconds).
- run_simulated_session: drives a real session loop (SessionManager), rating
  the actual decimated variants by their computed quality scores.

The satisfaction rule mirrors a content artist calling it done: some variant
rated 5 in two consecutive iterations.  Experiments that analyze fixed-length
series set stop_on_satisfaction=False; the rule is still evaluated and the
first firing iteration is recorded in the sequence metadata.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from ..mesh.core import ReductionParams
from ..preference import (
    SLOT_ROLES,
    PreferenceModel,
    fit,
    iteration_seed,
    propose_batch,
    ratings_to_pairs,
)
from ..service.records import (
    STATE_MAX_ITER,
    STATE_SATISFIED,
    EvaluationSequence,
    IterationRecord,
    VariantRecord,
)
from .model import RaterModel, rate_batch


def satisfied_twice_in_a_row(ratings_by_iteration) -> bool:
    """True when the last two iterations each contain a rating of 5."""
    if len(ratings_by_iteration) < 2:
        return False
    last, prev = ratings_by_iteration[-1], ratings_by_iteration[-2]
    return (5 in last) and (5 in prev)


def run_synthetic_session(utility_fn: Callable[[np.ndarray], float],
                          rater: RaterModel,
                          seed: int,
                          max_iterations: int = 11,
                          stop_on_satisfaction: bool = True,
                          session_id: str = "",
                          mesh_label: str = "synthetic") -> EvaluationSequence:
    """Run the propose -> rate -> refit loop against a synthetic utility.

    The utility value of each variant is stored as its quality_mean and fed
    to the rater as the quality input, so a rater with weights (1, 0)
    judges utility_fn directly.
    """
    inputs: list[ReductionParams] = []
    pairs: list[tuple[int, int]] = []
    model = PreferenceModel.empty()
    iterations: list[IterationRecord] = []
    ratings_history: list[tuple] = []
    satisfied_at: Optional[int] = None

    for iteration in range(1, max_iterations + 1):
        batch = propose_batch(model, seed=iteration_seed(seed, iteration))
        utilities = [float(utility_fn(p.as_array())) for p in batch]
        ratings = rate_batch(
            rater,
            [(u, p.target_ratio, False) for u, p in zip(utilities, batch)],
            context=mesh_label,
        )
        offset = len(inputs)
        inputs.extend(batch)
        pairs.extend(
            (pair.preferred, pair.less_preferred)
            for pair in ratings_to_pairs(list(enumerate(ratings, start=offset)))
        )
        variants = tuple(
            VariantRecord(
                params=p,
                reduction_ratio=p.target_ratio,
                faulty=False,
                quality_mean=u,
                role=role,
                rating=r,
            )
            for p, u, r, role in zip(batch, utilities, ratings, SLOT_ROLES)
        )
        iterations.append(IterationRecord(index=iteration, variants=variants,
                                          timestamp=float(iteration)))
        ratings_history.append(tuple(ratings))

        if satisfied_at is None and satisfied_twice_in_a_row(ratings_history):
            satisfied_at = iteration
            if stop_on_satisfaction:
                break
        if iteration < max_iterations and pairs:
            model = fit(pairs, inputs)

    state = STATE_SATISFIED if satisfied_at is not None else STATE_MAX_ITER
    return EvaluationSequence(
        session_id=session_id or f"synthetic-{seed}",
        terminal_state=state,
        iterations=tuple(iterations),
        seed=seed,
        max_iterations=max_iterations,
        mesh_label=mesh_label,
        metadata={"satisfied_at": satisfied_at, "kind": "synthetic"},
    )


def run_simulated_session(manager, mesh_source, rater: RaterModel, seed: int,
                          max_iterations: Optional[int] = None,
                          mesh_label: str = "mesh",
                          stop_on_satisfaction: bool = True) -> EvaluationSequence:
    """Drive a real session loop end to end with the simulated rater.

    `manager` is a SessionManager (in-process API of the HTTP service).
    Returns the exported EvaluationSequence of the completed session.
    """
    session = manager.create_session(mesh_source, seed=seed,
                                     max_iterations=max_iterations,
                                     mesh_label=mesh_label)
    sid = session.session_id
    ratings_history: list[tuple] = []
    while True:
        info = manager.wait_for_iteration(sid)
        if info is None:
            break  # terminated (max iterations reached)
        record = info
        triples = [(v.quality_mean, v.reduction_ratio, v.faulty) for v in record.variants]
        ratings = rate_batch(rater, triples, context=mesh_label)
        ratings_history.append(tuple(ratings))
        if stop_on_satisfaction and satisfied_twice_in_a_row(ratings_history):
            manager.submit_ratings(sid, ratings, advance=False)
            manager.terminate(sid, "satisfied")
            break
        outcome = manager.submit_ratings(sid, ratings)
        if outcome in ("terminated_max_iter",):
            break
    return manager.get_sequence(sid)
