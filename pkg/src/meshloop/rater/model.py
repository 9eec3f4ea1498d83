"""Rating generator: a linear base utility plus catalogued judgment errors.

The biases are deliberately minimal functional forms, each switchable in
isolation:

- anchoring_weight alpha mixes the absolute utility with the gap to the best
  utility seen so far (reference-point dependence),
- loss_aversion lambda asymmetrically penalizes falling below that reference,
- diminishing_returns gamma compresses high utilities (u -> u^(1-gamma)),
- level_offset shifts every score (between-rater level noise),
- pattern_noise_sd scales a fixed pseudo-random offset keyed by the rating
  context (bias stable within a context, varying across contexts),
- transient_noise_sd adds fresh Gaussian noise per judgment.

Scores are clamped to [0, 1] and mapped to ratings 1-5 by five equal bins;
faulty geometry is rated 0 (skip) when detected.
"""
from __future__ import annotations

import zlib
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from ..render.quality import QualityScore

_BIN_WIDTH = 0.2
_DETECTION_PROBABILITY = 0.8


@dataclass
class RaterModel:
    w_quality: float = 1.0
    w_reduction: float = 0.0
    anchoring_weight: float = 0.0
    loss_aversion: float = 0.0
    diminishing_returns: float = 0.0
    transient_noise_sd: float = 0.0
    level_offset: float = 0.0
    pattern_noise_sd: float = 0.0
    faulty_detection_probability: float = _DETECTION_PROBABILITY
    seed: int = 0
    # memory (starts empty)
    best_seen: Optional[float] = None
    last_ratings: tuple = ()
    _rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        if self.w_quality < 0.0 or self.w_reduction < 0.0:
            raise ValueError("utility weights must be nonnegative")
        if not 0.0 <= self.anchoring_weight <= 1.0:
            raise ValueError("anchoring weight must be in [0, 1]")
        if self.loss_aversion < 0.0:
            raise ValueError("loss aversion must be nonnegative")
        if not 0.0 <= self.diminishing_returns < 1.0:
            raise ValueError("diminishing returns must be in [0, 1)")
        if self.transient_noise_sd < 0.0 or self.pattern_noise_sd < 0.0:
            raise ValueError("noise scales must be nonnegative")
        if not 0.0 <= self.faulty_detection_probability <= 1.0:
            raise ValueError("detection probability must be in [0, 1]")
        self._rng = np.random.default_rng(self.seed)

    @classmethod
    def unbiased(cls, seed: int = 0, w_quality: float = 1.0,
                 w_reduction: float = 0.0) -> "RaterModel":
        return cls(w_quality=w_quality, w_reduction=w_reduction, seed=seed)

    @classmethod
    def heavily_biased(cls, seed: int = 0, w_quality: float = 1.0,
                       w_reduction: float = 0.0) -> "RaterModel":
        """The biased configuration used by the failure experiments."""
        return cls(w_quality=w_quality, w_reduction=w_reduction,
                   anchoring_weight=0.7, loss_aversion=2.0,
                   transient_noise_sd=1.0, seed=seed)


def _quality_mean(quality: Union[QualityScore, float]) -> float:
    if isinstance(quality, QualityScore):
        return quality.mean
    return float(quality)


def base_utility(rater: RaterModel, quality: Union[QualityScore, float],
                 reduction_ratio: float) -> float:
    """Linear quality/reduction trade-off with diminishing returns."""
    u = rater.w_quality * _quality_mean(quality) + rater.w_reduction * float(reduction_ratio)
    if rater.diminishing_returns > 0.0 and u > 0.0:
        u = u ** (1.0 - rater.diminishing_returns)
    return float(u)


def pattern_offset(context: Optional[str]) -> float:
    """Fixed pseudo-random offset in [-1, 1] for a rating context."""
    if context is None:
        return 0.0
    key = zlib.crc32(str(context).encode())
    return float(np.random.default_rng(key).uniform(-1.0, 1.0))


def score_to_rating(score: float) -> int:
    clamped = min(1.0, max(0.0, score))
    # multiply rather than divide by the bin width: 0.6 / 0.2 rounds to
    # 2.999...96 and would land scores at bin edges one bin low
    return 1 + min(4, int(clamped * 5.0))


def rate_batch(rater: RaterModel,
               variants: Sequence[tuple],
               context: Optional[str] = None) -> list[int]:
    """Rate a batch of (quality, reduction_ratio, faulty) variants.

    All variants in the batch are judged against the memory state at entry;
    the best-seen utility is updated afterwards from the rated (non-skipped)
    variants.  Returns one rating 0-5 per variant and mutates the rater's
    memory.
    """
    reference = rater.best_seen
    pattern = pattern_offset(context) * rater.pattern_noise_sd
    ratings: list[int] = []
    rated_utilities: list[float] = []
    for quality, ratio, faulty in variants:
        if faulty and float(rater._rng.uniform()) < rater.faulty_detection_probability:
            ratings.append(0)
            continue
        u = base_utility(rater, quality, ratio)
        if reference is None:
            core = u
        else:
            core = ((1.0 - rater.anchoring_weight) * u
                    + rater.anchoring_weight * (u - reference)
                    - rater.loss_aversion * max(0.0, reference - u))
        score = core + rater.level_offset + pattern
        if rater.transient_noise_sd > 0.0:
            score += float(rater._rng.normal(0.0, rater.transient_noise_sd))
        ratings.append(score_to_rating(score))
        rated_utilities.append(u)
    if rated_utilities:
        top = max(rated_utilities)
        rater.best_seen = top if reference is None else max(reference, top)
    rater.last_ratings = tuple(ratings)
    return ratings
