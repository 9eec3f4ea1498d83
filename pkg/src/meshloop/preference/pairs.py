"""Turn per-variant ratings into pairwise preference relations.

A rating of 0 means the variant was skipped (typically for faulty geometry)
and contributes no relations.  Among variants rated 1-5, every strictly
ordered pair produces one relation; ties produce none.  Four variants rated
(3, 4, 5, 1) therefore yield six relations.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Sequence


def validate_rating(value: int) -> int:
    """Check a rating is an integer 0-5 (0 = skip) and return it."""
    if not isinstance(value, int) or isinstance(value, bool):
        raise ValueError(f"rating must be an integer, got {value!r}")
    if not 0 <= value <= 5:
        raise ValueError(f"rating must be in 0..5, got {value}")
    return value


@dataclass(frozen=True)
class PreferencePair:
    preferred: Hashable
    less_preferred: Hashable

    def __post_init__(self):
        if self.preferred == self.less_preferred:
            raise ValueError("a preference pair needs two distinct items")


def ratings_to_pairs(ratings: Sequence[tuple[Hashable, int]]) -> list[PreferencePair]:
    """One pair (i over j) for every i, j with rating(i) > rating(j) >= 1.

    Output order is deterministic: losers in input order, winners in input
    order within each loser.
    """
    if len(ratings) < 2:
        raise ValueError("need at least two rated items")
    seen = set()
    for item, value in ratings:
        validate_rating(value)
        if item in seen:
            raise ValueError(f"duplicate item {item!r} in ratings")
        seen.add(item)
    out = []
    for loser, loser_rating in ratings:
        if loser_rating < 1:
            continue
        for winner, winner_rating in ratings:
            if winner_rating > loser_rating:
                out.append(PreferencePair(preferred=winner, less_preferred=loser))
    return out
