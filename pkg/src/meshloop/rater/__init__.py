"""Simulated raters: objective utility corrupted by judgment biases."""
from .experiments import corpus_summary, run_corpus, synthetic_utility
from .model import RaterModel, base_utility, rate_batch
from .sessions import (
    run_simulated_session,
    run_synthetic_session,
    satisfied_twice_in_a_row,
)

__all__ = [
    "RaterModel",
    "base_utility",
    "corpus_summary",
    "rate_batch",
    "run_corpus",
    "run_simulated_session",
    "run_synthetic_session",
    "satisfied_twice_in_a_row",
    "synthetic_utility",
]
