"""Rank/trend/stationarity tests against exact oracles and reference libraries."""
import math
from itertools import combinations, permutations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import kendalltau as scipy_kendalltau
from scipy.stats import mannwhitneyu as scipy_mannwhitneyu
from statsmodels.tsa.stattools import adfuller

from meshloop.analysis import adf_test, kendall_tau, mann_kendall, mann_whitney_u


# -- oracles (independent implementations) -----------------------------------

def oracle_tau_b(x, y):
    n = len(x)
    concordant = discordant = 0
    for i, j in combinations(range(n), 2):
        prod = np.sign(x[j] - x[i]) * np.sign(y[j] - y[i])
        concordant += prod > 0
        discordant += prod < 0
    def pairs_tied(v):
        return sum(1 for i, j in combinations(range(n), 2) if v[i] == v[j])
    n0 = n * (n - 1) / 2
    return (concordant - discordant) / math.sqrt(
        (n0 - pairs_tied(x)) * (n0 - pairs_tied(y)))


def oracle_exact_tau_p(x, y):
    n = len(x)
    def t_stat(yy):
        return sum(np.sign(x[j] - x[i]) * np.sign(yy[j] - yy[i])
                   for i, j in combinations(range(n), 2))
    reference = abs(t_stat(y))
    perms = list(permutations(y))
    hits = sum(1 for p in perms if abs(t_stat(p)) >= reference)
    return hits / len(perms)


def oracle_u(a, b):
    u = 0.0
    for x in a:
        for y in b:
            u += 1.0 if x > y else (0.5 if x == y else 0.0)
    return u


def oracle_exact_u_p(a, b):
    pooled = list(a) + list(b)
    n_a = len(a)
    mu = n_a * len(b) / 2.0
    reference = abs(oracle_u(a, b) - mu)
    hits = total = 0
    for chosen in combinations(range(len(pooled)), n_a):
        total += 1
        grp_a = [pooled[i] for i in chosen]
        grp_b = [pooled[i] for i in range(len(pooled)) if i not in chosen]
        if abs(oracle_u(grp_a, grp_b) - mu) >= reference - 1e-12:
            hits += 1
    return hits / total


class TestKendallTau:
    def test_perfect_concordance(self):
        tau, _ = kendall_tau([1, 2, 3, 4], [1, 2, 3, 4])
        assert tau == pytest.approx(1.0, abs=1e-12)

    def test_perfect_discordance(self):
        tau, _ = kendall_tau([1, 2, 3], [3, 2, 1])
        assert tau == pytest.approx(-1.0, abs=1e-12)

    def test_all_tied_raises(self):
        with pytest.raises(ValueError):
            kendall_tau([1, 1, 1], [1, 2, 3])
        with pytest.raises(ValueError):
            kendall_tau([1, 2, 3], [5, 5, 5])

    def test_tau_matches_pair_counting_oracle(self):
        rng = np.random.default_rng(7)
        for _ in range(30):
            n = int(rng.integers(3, 10))
            x = rng.integers(0, 5, n).astype(float)
            y = rng.integers(0, 5, n).astype(float)
            if np.ptp(x) == 0 or np.ptp(y) == 0:
                continue
            tau, _ = kendall_tau(x, y)
            assert tau == pytest.approx(oracle_tau_b(x, y), abs=1e-12)

    def test_exact_p_matches_enumeration_oracle(self):
        rng = np.random.default_rng(11)
        for _ in range(10):
            n = int(rng.integers(4, 7))
            x = rng.integers(0, 4, n).astype(float)
            y = rng.integers(0, 4, n).astype(float)
            if np.ptp(x) == 0 or np.ptp(y) == 0:
                continue
            _, p = kendall_tau(x, y)  # auto -> exact for n <= 8
            assert p == pytest.approx(oracle_exact_tau_p(x, y), abs=1e-9)

    def test_tau_agrees_with_scipy(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            x = rng.normal(size=12)
            y = rng.normal(size=12)
            tau, p = kendall_tau(x, y, method="approx")
            ref = scipy_kendalltau(x, y, method="asymptotic")
            assert tau == pytest.approx(ref.statistic, abs=1e-12)
            assert p == pytest.approx(ref.pvalue, abs=1e-9)

    @given(st.lists(st.integers(0, 20), min_size=4, max_size=9).filter(
        lambda v: len(set(v)) > 1))
    @settings(max_examples=40, deadline=None)
    def test_invariant_under_monotone_transform(self, values):
        x = np.arange(len(values), dtype=float)
        y = np.asarray(values, dtype=float)
        tau1, p1 = kendall_tau(x, y)
        tau2, p2 = kendall_tau(np.exp(x / 5.0), 3.0 * y + 7.0)
        assert tau1 == pytest.approx(tau2, abs=1e-12)
        assert p1 == pytest.approx(p2, abs=1e-12)


class TestMannWhitneyU:
    def test_identical_samples_center(self):
        u, _ = mann_whitney_u([1, 2, 3], [1, 2, 3])
        assert u == pytest.approx(4.5, abs=1e-12)

    def test_complete_separation_exact_p(self):
        u, p = mann_whitney_u([1, 2], [10, 11])
        assert u == 0.0
        assert p == pytest.approx(1.0 / 3.0, abs=1e-9)

    def test_exact_p_matches_enumeration_oracle(self):
        rng = np.random.default_rng(5)
        for _ in range(10):
            n_a = int(rng.integers(2, 6))
            n_b = int(rng.integers(2, 6))
            a = rng.integers(0, 6, n_a).astype(float)
            b = rng.integers(0, 6, n_b).astype(float)
            u, p = mann_whitney_u(a, b)
            assert u == pytest.approx(oracle_u(a, b), abs=1e-12)
            assert p == pytest.approx(oracle_exact_u_p(a, b), abs=1e-9)

    def test_normal_approx_close_to_exact_at_n5(self):
        rng = np.random.default_rng(9)
        for _ in range(10):
            a = rng.normal(size=5)
            b = rng.normal(loc=0.5, size=5)
            _, p_exact = mann_whitney_u(a, b, method="exact")
            _, p_approx = mann_whitney_u(a, b, method="approx")
            assert abs(p_exact - p_approx) < 0.05

    def test_agrees_with_scipy_large_sample(self):
        rng = np.random.default_rng(13)
        a = rng.normal(size=25)
        b = rng.normal(loc=0.3, size=30)
        u, p = mann_whitney_u(a, b, method="approx")
        ref = scipy_mannwhitneyu(a, b, alternative="two-sided",
                                 method="asymptotic", use_continuity=True)
        assert u == pytest.approx(float(ref.statistic), abs=1e-9)
        assert p == pytest.approx(float(ref.pvalue), abs=1e-9)

    def test_rejects_empty(self):
        with pytest.raises(ValueError):
            mann_whitney_u([], [1.0])

    @given(st.lists(st.floats(-10, 10), min_size=2, max_size=6),
           st.lists(st.floats(-10, 10), min_size=2, max_size=6))
    @settings(max_examples=40, deadline=None)
    def test_label_swap_symmetry(self, a, b):
        u_ab, p_ab = mann_whitney_u(a, b)
        u_ba, p_ba = mann_whitney_u(b, a)
        assert u_ab + u_ba == pytest.approx(len(a) * len(b), abs=1e-9)
        assert p_ab == pytest.approx(p_ba, abs=1e-9)


class TestAdf:
    def test_constant_series_raises(self):
        with pytest.raises(ValueError):
            adf_test([1.0, 1.0, 1.0, 1.0])

    def test_statistic_matches_statsmodels(self):
        rng = np.random.default_rng(17)
        for n in (8, 11, 50, 200):
            for _ in range(5):
                y = np.cumsum(rng.normal(size=n)) * 0.5 + rng.normal(size=n)
                stat, _, _ = adf_test(y)
                ref = adfuller(y, maxlag=0, regression="c", autolag=None)[0]
                assert stat == pytest.approx(float(ref), rel=1e-8)

    def test_white_noise_calibration(self):
        rng = np.random.default_rng(23)
        rejections = sum(adf_test(rng.normal(size=200))[2] for _ in range(200))
        assert rejections >= 180  # >= 90 percent

    def test_random_walk_calibration(self):
        rng = np.random.default_rng(29)
        rejections = sum(
            adf_test(np.cumsum(rng.normal(size=200)))[2] for _ in range(200))
        assert rejections <= 20  # <= 10 percent

    def test_bands_ordered_and_consistent(self):
        rng = np.random.default_rng(31)
        for _ in range(20):
            y = rng.normal(size=30)
            stat, band, stationary = adf_test(y)
            assert band in ("<.01", "<.05", "<.10", ">=.10")
            assert stationary == (band in ("<.01", "<.05"))

    def test_too_short_raises(self):
        with pytest.raises(ValueError):
            adf_test([1.0, 2.0, 1.5])


class TestMannKendall:
    def test_strictly_increasing_s(self):
        s, p, trend = mann_kendall(list(range(1, 9)))
        assert s == 28
        assert trend == "increasing"
        # hand-computed: var = 8*7*21/18, z = 27/sqrt(var)
        var = 8 * 7 * 21 / 18
        expected_p = 2 * (1 - 0.5 * (1 + math.erf((27 / math.sqrt(var)) / math.sqrt(2))))
        assert p == pytest.approx(expected_p, abs=1e-12)

    def test_constant_series_no_trend(self):
        s, p, trend = mann_kendall([2.0, 2.0, 2.0, 2.0, 2.0])
        assert s == 0
        assert trend == "none"
        assert p == 1.0

    def test_decreasing_trend(self):
        s, _, trend = mann_kendall([9, 7, 5, 4, 3, 2, 1, 0])
        assert s == -28
        assert trend == "decreasing"

    def test_s_matches_brute_force_with_ties(self):
        rng = np.random.default_rng(37)
        for _ in range(25):
            y = rng.integers(0, 4, int(rng.integers(4, 12))).astype(float)
            s, _, _ = mann_kendall(y)
            brute = sum(np.sign(y[j] - y[i])
                        for i, j in combinations(range(len(y)), 2))
            assert s == int(brute)

    @given(st.lists(st.floats(-5, 5), min_size=4, max_size=12))
    @settings(max_examples=50, deadline=None)
    def test_reversal_antisymmetry(self, values):
        s_fwd, _, _ = mann_kendall(values)
        s_rev, _, _ = mann_kendall(values[::-1])
        assert s_fwd == -s_rev

    def test_short_series_rejected(self):
        with pytest.raises(ValueError):
            mann_kendall([1, 2, 3])
