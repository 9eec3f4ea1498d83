"""Preference-GP checks.

The gradient oracle is central finite differencing of the log likelihood;
the ranking oracle is scipy's Kendall tau on a synthetic utility.
"""
import numpy as np
import pytest
from scipy.stats import kendalltau

from meshloop.mesh import ReductionParams
from meshloop.preference import (
    KernelConfig,
    PreferenceModel,
    fit,
    pairwise_log_likelihood,
    predict,
    predict_many,
)


def random_params(rng, n):
    return [ReductionParams.from_array(rng.random(9)) for _ in range(n)]


def loglik_only(f, winners, losers, noise):
    value, _, _ = pairwise_log_likelihood(f, winners, losers, noise)
    return value


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(17)
    step = 1e-5
    for _ in range(100):
        n = int(rng.integers(3, 9))
        n_pairs = int(rng.integers(2, 11))
        winners = rng.integers(0, n, n_pairs)
        losers = (winners + 1 + rng.integers(0, n - 1, n_pairs)) % n
        f = rng.normal(scale=1.0, size=n)
        noise = float(rng.uniform(0.05, 0.5))
        _, grad, _ = pairwise_log_likelihood(f, winners, losers, noise)
        fd = np.zeros(n)
        for k in range(n):
            up, dn = f.copy(), f.copy()
            up[k] += step
            dn[k] -= step
            fd[k] = (loglik_only(up, winners, losers, noise)
                     - loglik_only(dn, winners, losers, noise)) / (2.0 * step)
        denom = max(np.linalg.norm(fd), 1e-12)
        assert np.linalg.norm(grad - fd) / denom <= 1e-4


def test_curvature_matrix_is_psd():
    rng = np.random.default_rng(5)
    winners = np.array([0, 1, 2, 0])
    losers = np.array([1, 2, 0, 3])
    _, _, w = pairwise_log_likelihood(rng.normal(size=4), winners, losers, 0.1)
    np.testing.assert_allclose(w, w.T, atol=1e-12)
    assert np.linalg.eigvalsh(w).min() >= -1e-10


def test_single_pair_orders_the_mode():
    rng = np.random.default_rng(1)
    inputs = random_params(rng, 2)
    model = fit([(0, 1)], inputs)
    assert model.f_mode[0] > model.f_mode[1]


def test_cyclic_pairs_collapse_to_equality():
    # three symmetric inputs (equilateral in the first two dims)
    base = np.full(9, 0.5)
    pts = []
    for ang in (0.0, 2.0 * np.pi / 3.0, 4.0 * np.pi / 3.0):
        p = base.copy()
        p[0] += 0.2 * np.cos(ang)
        p[1] += 0.2 * np.sin(ang)
        pts.append(ReductionParams.from_array(p))
    model = fit([(0, 1), (1, 2), (2, 0)], pts)
    f = model.f_mode
    assert abs(f[0] - f[1]) <= 1e-3
    assert abs(f[1] - f[2]) <= 1e-3


def test_likelihood_translation_invariance():
    rng = np.random.default_rng(9)
    winners = rng.integers(0, 6, 12)
    losers = (winners + 1 + rng.integers(0, 5, 12)) % 6
    f = rng.normal(size=6)
    a = loglik_only(f, winners, losers, 0.1)
    b = loglik_only(f + 3.25, winners, losers, 0.1)
    assert a == pytest.approx(b, abs=1e-9)


def test_mode_mean_stays_bounded():
    rng = np.random.default_rng(23)
    inputs = random_params(rng, 8)
    pairs = [(int(a), int(b)) for a, b in
             [(0, 1), (1, 2), (2, 3), (4, 5), (6, 7), (0, 7), (3, 4)]]
    model = fit(pairs, inputs)
    assert abs(model.f_mode.mean()) <= 1.0


def test_posterior_covariance_is_spd():
    rng = np.random.default_rng(31)
    inputs = random_params(rng, 6)
    model = fit([(0, 1), (2, 3), (4, 5), (0, 5)], inputs)
    np.testing.assert_allclose(model.sigma, model.sigma.T, atol=1e-10)
    assert np.linalg.eigvalsh(model.sigma).min() > -1e-10
    assert model.f_mode.size == model.n_inputs == 6


def test_variance_contracts_near_training_data():
    rng = np.random.default_rng(2)
    inputs = random_params(rng, 5)
    model = fit([(0, 1), (1, 2), (3, 4)], inputs)
    _, var_at_data = predict(model, inputs[0])
    far = np.clip(inputs[0].as_array() + 3.0, 0.0, None)  # outside the cube
    _, var_far = predict(model, far)
    assert var_at_data <= var_far
    assert var_at_data >= 0.0


def test_prediction_is_continuous():
    rng = np.random.default_rng(8)
    inputs = random_params(rng, 4)
    model = fit([(0, 1), (2, 3)], inputs)
    p = rng.random(9)
    m1, _ = predict(model, p)
    m2, _ = predict(model, p + 1e-6)
    assert abs(m1 - m2) < 1e-4


def test_ranking_recovers_synthetic_utility():
    # utility peaks at 0.7 along the first coordinate; the other coordinates
    # are held at 0.5 so 20 consistent pairs identify the active dimension
    rng = np.random.default_rng(77)
    pts = np.tile(np.full(9, 0.5), (14, 1))
    pts[:, 0] = rng.random(14)
    utility = np.exp(-((pts[:, 0] - 0.7) ** 2) / (2 * 0.2 ** 2))
    pairs = []
    while len(pairs) < 20:
        i, j = rng.integers(0, len(pts), 2)
        if i == j or abs(utility[i] - utility[j]) < 1e-6:
            continue
        pairs.append((int(i), int(j)) if utility[i] > utility[j] else (int(j), int(i)))
    inputs = [ReductionParams.from_array(p) for p in pts]
    model = fit(pairs, inputs)
    grid = np.tile(np.full(9, 0.5), (40, 1))
    grid[:, 0] = np.linspace(0.0, 1.0, 40)
    means, _ = predict_many(model, grid)
    truth = np.exp(-((grid[:, 0] - 0.7) ** 2) / (2 * 0.2 ** 2))
    tau, _ = kendalltau(means, truth)
    assert tau >= 0.5


def test_empty_model_predicts_prior():
    model = PreferenceModel.empty()
    mean, var = predict(model, ReductionParams.defaults())
    assert mean == 0.0
    assert var == pytest.approx(1.0)


def test_fit_validates_pair_ids():
    rng = np.random.default_rng(4)
    inputs = random_params(rng, 3)
    with pytest.raises(ValueError):
        fit([(0, 5)], inputs)
    with pytest.raises(ValueError):
        fit([(1, 1)], inputs)
    with pytest.raises(ValueError):
        fit([(0, 1)], [])
    with pytest.raises(ValueError):
        fit([("a", "b")], inputs)


def test_refit_is_deterministic():
    rng = np.random.default_rng(12)
    inputs = random_params(rng, 5)
    pairs = [(0, 1), (1, 2), (3, 4)]
    a = fit(pairs, inputs)
    b = fit(pairs, inputs)
    np.testing.assert_array_equal(a.f_mode, b.f_mode)
    np.testing.assert_array_equal(a.sigma, b.sigma)


def test_custom_noise_scale_sharpens_ordering():
    rng = np.random.default_rng(3)
    inputs = random_params(rng, 2)
    soft = fit([(0, 1)], inputs, KernelConfig(noise_scale=1.0))
    sharp = fit([(0, 1)], inputs, KernelConfig(noise_scale=0.05))
    assert (sharp.f_mode[0] - sharp.f_mode[1]) > (soft.f_mode[0] - soft.f_mode[1])
