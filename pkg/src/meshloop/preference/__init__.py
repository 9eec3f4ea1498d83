"""Preference learning over reduction parameters and batch proposal."""
from .pairs import PreferencePair, ratings_to_pairs, validate_rating
from .kernel import KernelConfig, gram_matrix, matern52
from .model import PreferenceModel, fit, pairwise_log_likelihood, predict, predict_many
from .acquisition import SLOT_ROLES, iteration_seed, propose_batch

__all__ = [
    "KernelConfig",
    "PreferenceModel",
    "PreferencePair",
    "SLOT_ROLES",
    "fit",
    "gram_matrix",
    "iteration_seed",
    "matern52",
    "pairwise_log_likelihood",
    "predict",
    "predict_many",
    "propose_batch",
    "ratings_to_pairs",
    "validate_rating",
]
