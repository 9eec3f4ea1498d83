import numpy as np
import pytest

from meshloop.preference import PreferencePair, ratings_to_pairs, validate_rating


def brute_force_pairs(ratings):
    """Independent combinatorial enumeration of strictly ordered rated pairs."""
    out = set()
    for i, (wi, rw) in enumerate(ratings):
        for j, (lj, rl) in enumerate(ratings):
            if i != j and rl >= 1 and rw > rl:
                out.add((wi, lj))
    return out


def test_example_ratings_give_six_relations():
    ratings = [("M1", 3), ("M2", 4), ("M3", 5), ("M4", 1)]
    pairs = ratings_to_pairs(ratings)
    assert len(pairs) == 6
    got = {(p.preferred, p.less_preferred) for p in pairs}
    assert got == {
        ("M2", "M1"), ("M3", "M1"), ("M3", "M2"),
        ("M1", "M4"), ("M2", "M4"), ("M3", "M4"),
    }


def test_example_order_is_deterministic():
    ratings = [("M1", 3), ("M2", 4), ("M3", 5), ("M4", 1)]
    seq = [(p.preferred, p.less_preferred) for p in ratings_to_pairs(ratings)]
    assert seq == [
        ("M2", "M1"), ("M3", "M1"),
        ("M3", "M2"),
        ("M1", "M4"), ("M2", "M4"), ("M3", "M4"),
    ]
    assert seq == [(p.preferred, p.less_preferred) for p in ratings_to_pairs(ratings)]


def test_all_ties_give_no_pairs():
    assert ratings_to_pairs([("a", 4), ("b", 4), ("c", 4), ("d", 4)]) == []


def test_skips_produce_no_pairs():
    pairs = ratings_to_pairs([("v1", 0), ("v2", 5), ("v3", 0), ("v4", 2)])
    assert [(p.preferred, p.less_preferred) for p in pairs] == [("v2", "v4")]


def test_skip_never_participates_even_as_loser():
    pairs = ratings_to_pairs([("a", 0), ("b", 1)])
    assert pairs == []


def test_matches_combinatorial_oracle_on_random_vectors():
    rng = np.random.default_rng(42)
    for _ in range(1000):
        n = int(rng.integers(2, 9))
        ratings = [(f"m{k}", int(rng.integers(0, 6))) for k in range(n)]
        got = {(p.preferred, p.less_preferred) for p in ratings_to_pairs(ratings)}
        want = brute_force_pairs(ratings)
        assert got == want
        assert len(ratings_to_pairs(ratings)) == len(want)


def test_input_validation():
    with pytest.raises(ValueError):
        ratings_to_pairs([("only", 3)])
    with pytest.raises(ValueError):
        ratings_to_pairs([("a", 3), ("a", 4)])
    with pytest.raises(ValueError):
        ratings_to_pairs([("a", 3), ("b", 6)])
    with pytest.raises(ValueError):
        validate_rating(2.5)
    with pytest.raises(ValueError):
        PreferencePair("x", "x")
