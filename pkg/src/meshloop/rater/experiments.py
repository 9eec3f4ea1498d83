"""Frozen synthetic corpora for the convergence and bias-failure experiments.

The utility is a smooth unimodal bump over the 9-dim parameter cube with
three active dims.  A quartic exponent gives it a flat top: the whole
top-rating region is one connected ball around the center rather than a
thin shell, which is what a rating scale with five equal bins can actually
resolve.  Centers are drawn per seed from the interior so the top-rating
ball never clips the cube boundary.

Everything here is deterministic in the seed; the corpus of 50 seeds runs
in seconds because no meshes are involved (quality comes straight from the
utility).
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from ..service.records import EvaluationSequence
from .model import RaterModel
from .sessions import run_synthetic_session

ACTIVE_DIMS = 3
SCALE = 0.5
CENTER_LOW = 0.3
CENTER_HIGH = 0.7
_CENTER_SEED_OFFSET = 777


def synthetic_utility(seed: int) -> tuple[Callable[[np.ndarray], float], np.ndarray]:
    """Per-seed smooth unimodal utility with ACTIVE_DIMS active dimensions.

    Returns (utility, center).  utility(p) = exp(-(||p_active - c||^2 / s^2)^2)
    depends only on the first ACTIVE_DIMS components of p.
    """
    rng = np.random.default_rng(seed + _CENTER_SEED_OFFSET)
    center = rng.uniform(CENTER_LOW, CENTER_HIGH, ACTIVE_DIMS)

    def utility(p: np.ndarray) -> float:
        d2 = float(((np.asarray(p, dtype=float)[:ACTIVE_DIMS] - center) ** 2).sum())
        return float(np.exp(-((d2 / SCALE ** 2) ** 2)))

    return utility, center


def run_corpus(n_seeds: int = 50,
               biased: bool = False,
               max_iterations: int = 11) -> list[EvaluationSequence]:
    """Run the synthetic loop for seeds 0..n_seeds-1, each to the iteration cap.

    Sequences never stop early: the satisfaction rule is still evaluated and
    its first firing iteration lands in metadata["satisfied_at"], so the
    same corpus serves satisfaction-rate, trend, and stationarity analyses
    over fixed-length series.
    """
    sequences = []
    for seed in range(n_seeds):
        utility, _ = synthetic_utility(seed)
        rater = (RaterModel.heavily_biased(seed=seed) if biased
                 else RaterModel.unbiased(seed=seed))
        sequences.append(
            run_synthetic_session(
                utility, rater, seed=seed,
                max_iterations=max_iterations,
                stop_on_satisfaction=False,
                session_id=f"{'biased' if biased else 'unbiased'}-{seed}",
            )
        )
    return sequences


def reached_five(sequence: EvaluationSequence) -> bool:
    return any(5 in record.ratings for record in sequence.iterations)


def satisfied(sequence: EvaluationSequence) -> bool:
    return sequence.metadata.get("satisfied_at") is not None


def satisfied_iteration(sequence: EvaluationSequence) -> Optional[int]:
    return sequence.metadata.get("satisfied_at")


def corpus_summary(sequences: list[EvaluationSequence]) -> dict:
    n = len(sequences)
    n_reached = sum(reached_five(s) for s in sequences)
    n_satisfied = sum(satisfied(s) for s in sequences)
    return {
        "n": n,
        "reached_five": n_reached,
        "satisfied": n_satisfied,
        "reached_five_rate": n_reached / n if n else 0.0,
        "satisfaction_rate": n_satisfied / n if n else 0.0,
    }
