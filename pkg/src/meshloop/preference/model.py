"""Gaussian-process preference model with a Laplace-approximated posterior.

Observations are pairwise outcomes: item w was preferred over item l.  The
likelihood is probit, P(w over l) = Phi((f_w - f_l) / (sqrt(2) * noise)),
on a latent utility f with a Matern-5/2 GP prior.  The posterior mode is
found by damped Newton iterations; the curvature there gives the Gaussian
approximation used for prediction and Thompson sampling.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np
from scipy.linalg import cho_factor, cho_solve, cholesky, solve
from scipy.special import log_ndtr

from ..mesh.core import ReductionParams
from .kernel import KernelConfig, gram_matrix
from .pairs import PreferencePair

_BASE_JITTER = 1e-8
_MAX_JITTER = 1e-4
_GRAD_TOL = 1e-6
_MAX_NEWTON = 100
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def pairwise_log_likelihood(f: np.ndarray, winners: np.ndarray, losers: np.ndarray,
                            noise_scale: float):
    """Log likelihood of the observed pairs plus its gradient and negative
    Hessian (W) with respect to the latent utilities f."""
    f = np.asarray(f, dtype=np.float64)
    s = math.sqrt(2.0) * noise_scale
    z = (f[winners] - f[losers]) / s
    log_cdf = log_ndtr(z)
    total = float(log_cdf.sum())

    # r = pdf/cdf computed in log space; stable for very negative z
    r = np.exp(-0.5 * z * z - _LOG_SQRT_2PI - log_cdf)
    grad = np.zeros_like(f)
    np.add.at(grad, winners, r / s)
    np.add.at(grad, losers, -r / s)

    q = r * (r + z) / (s * s)  # nonnegative per-pair curvature
    n, p = f.size, winners.size
    e = np.zeros((n, p))
    e[winners, np.arange(p)] = 1.0
    e[losers, np.arange(p)] -= 1.0
    w = (e * q) @ e.T
    return total, grad, w


@dataclass(frozen=True)
class PreferenceModel:
    inputs: tuple
    pairs: tuple
    config: KernelConfig
    x: np.ndarray          # (n, 9) training inputs
    f_mode: np.ndarray     # posterior mode of the latent utility
    alpha: np.ndarray      # K^{-1} f_mode
    sigma: np.ndarray      # Laplace posterior covariance at the inputs
    sigma_chol: np.ndarray  # lower Cholesky factor of sigma (+ jitter)
    k_chol: np.ndarray     # Cholesky factor of the (jittered) prior Gram
    k_lower: bool

    @property
    def n_inputs(self) -> int:
        return len(self.inputs)

    @classmethod
    def empty(cls, config: KernelConfig = KernelConfig()) -> "PreferenceModel":
        z = np.zeros((0, len(ReductionParams.defaults().as_array())))
        e = np.zeros(0)
        m = np.zeros((0, 0))
        return cls(inputs=(), pairs=(), config=config, x=z, f_mode=e, alpha=e,
                   sigma=m, sigma_chol=m, k_chol=m, k_lower=True)


def _pair_indices(pairs: Sequence[Union[PreferencePair, tuple]], n: int):
    winners, losers = [], []
    for pair in pairs:
        if isinstance(pair, PreferencePair):
            w, l = pair.preferred, pair.less_preferred
        else:
            w, l = pair
        if not (isinstance(w, (int, np.integer)) and isinstance(l, (int, np.integer))):
            raise ValueError("pair ids must be integer indices into the inputs")
        if not (0 <= w < n and 0 <= l < n):
            raise ValueError(f"pair ({w}, {l}) references a missing input")
        if w == l:
            raise ValueError("pair items must differ")
        winners.append(int(w))
        losers.append(int(l))
    return np.array(winners, dtype=np.intp), np.array(losers, dtype=np.intp)


def _chol_with_escalating_jitter(k: np.ndarray):
    jitter = _BASE_JITTER
    while True:
        try:
            c, low = cho_factor(k + jitter * np.eye(len(k)), lower=True)
            return c, low, jitter
        except np.linalg.LinAlgError:
            jitter *= 10.0
            if jitter > _MAX_JITTER:
                raise


def fit(pairs: Sequence, inputs: Sequence[ReductionParams],
        config: KernelConfig = KernelConfig()) -> PreferenceModel:
    """Fit the Laplace approximation; with no pairs returns the prior-only model."""
    inputs = tuple(inputs)
    if not pairs:
        return PreferenceModel.empty(config)
    if not inputs:
        raise ValueError("pairs supplied without any inputs")
    x = np.stack([p.as_array() if isinstance(p, ReductionParams) else np.asarray(p, float)
                  for p in inputs])
    n = len(inputs)
    winners, losers = _pair_indices(pairs, n)

    k = gram_matrix(x, config=config)
    c, low, jitter = _chol_with_escalating_jitter(k)
    kj = k + jitter * np.eye(n)

    def psi(f):
        ll, _, _ = pairwise_log_likelihood(f, winners, losers, config.noise_scale)
        return ll - 0.5 * float(f @ cho_solve((c, low), f))

    f = np.zeros(n)
    for _ in range(_MAX_NEWTON):
        ll, grad_ll, w = pairwise_log_likelihood(f, winners, losers, config.noise_scale)
        grad_psi = grad_ll - cho_solve((c, low), f)
        if np.max(np.abs(grad_psi)) <= _GRAD_TOL:
            break
        b = w @ f + grad_ll
        f_new = kj @ solve(np.eye(n) + w @ kj, b)
        step = f_new - f
        base = ll - 0.5 * float(f @ cho_solve((c, low), f))
        t = 1.0
        for _ in range(30):
            cand = f + t * step
            if psi(cand) >= base - 1e-12:
                break
            t *= 0.5
        f = f + t * step

    _, _, w = pairwise_log_likelihood(f, winners, losers, config.noise_scale)
    sigma = kj @ np.linalg.inv(np.eye(n) + w @ kj)
    sigma = (sigma + sigma.T) / 2.0
    sig_jitter = _BASE_JITTER
    while True:
        try:
            l_sigma = cholesky(sigma + sig_jitter * np.eye(n), lower=True)
            break
        except np.linalg.LinAlgError:
            sig_jitter *= 10.0
            if sig_jitter > _MAX_JITTER:
                raise
    alpha = cho_solve((c, low), f)

    return PreferenceModel(
        inputs=inputs,
        pairs=tuple(zip(winners.tolist(), losers.tolist())),
        config=config,
        x=x,
        f_mode=f,
        alpha=alpha,
        sigma=sigma,
        sigma_chol=l_sigma,
        k_chol=c,
        k_lower=low,
    )


def predict_many(model: PreferenceModel, points: np.ndarray):
    """Posterior predictive mean and variance at each row of points."""
    pts = np.atleast_2d(np.asarray(points, dtype=np.float64))
    sv = model.config.signal_variance
    if model.n_inputs == 0:
        m = pts.shape[0]
        return np.zeros(m), np.full(m, sv)
    ks = gram_matrix(model.x, pts, model.config)  # (n, m)
    mean = ks.T @ model.alpha
    a = cho_solve((model.k_chol, model.k_lower), ks)
    var = sv - np.einsum("ij,ij->j", ks, a) + np.einsum("ij,ij->j", a, model.sigma @ a)
    return mean, np.maximum(var, 0.0)


def predict(model: PreferenceModel, p: Union[ReductionParams, np.ndarray]):
    """Posterior predictive (mean, variance) at a single parameter set."""
    point = p.as_array() if isinstance(p, ReductionParams) else np.asarray(p, float)
    mean, var = predict_many(model, point[None, :])
    return float(mean[0]), float(var[0])
