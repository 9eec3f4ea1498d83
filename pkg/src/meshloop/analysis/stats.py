"""Rank correlation, rank-sum, stationarity, and trend tests.

Self-contained implementations sized for short rating series:

- kendall_tau: tau-b with tie-corrected normal p; exact permutation p for
  n <= 8 (the permutation distribution conditions on the observed ties).
- mann_whitney_u: U with half-credit for ties; exact label-assignment p for
  max(n_a, n_b) <= 8, else tie-corrected normal approximation with
  continuity correction.
- adf_test: Dickey-Fuller regression with constant, no trend, lag 0
  (higher lag orders are not estimable at the sequence lengths in scope);
  p reported as a band against finite-sample critical values.
- mann_kendall: S statistic, tie-corrected variance, continuity-corrected
  normal p, and a trend call at the given alpha.
"""
from __future__ import annotations

import math
from itertools import combinations, permutations

import numpy as np

EXACT_TAU_CUTOFF = 8
EXACT_U_CUTOFF = 8

P_BANDS = ("<.01", "<.05", "<.10", ">=.10")

# Finite-sample critical values for the DF t-statistic, constant-only model:
# cv(T) = b0 + b1/T + b2/T^2 + b3/T^3 with T the regression sample size.
_ADF_RESPONSE_SURFACE = {
    0.01: (-3.43035, -6.5393, -16.786, -79.433),
    0.05: (-2.86154, -2.8903, -4.234, -40.04),
    0.10: (-2.56677, -1.5384, -2.809, 0.0),
}


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _two_sided_p(z: float) -> float:
    return min(1.0, 2.0 * _norm_sf(abs(z)))


# -- Kendall's tau-b ---------------------------------------------------------

def _concordance(x: np.ndarray, y: np.ndarray) -> int:
    """C - D over all index pairs."""
    total = 0
    n = len(x)
    for i in range(n - 1):
        dx = np.sign(x[i + 1:] - x[i])
        dy = np.sign(y[i + 1:] - y[i])
        total += int(np.sum(dx * dy))
    return total


def _tie_term(values: np.ndarray, fn) -> float:
    _, counts = np.unique(values, return_counts=True)
    return float(sum(fn(int(t)) for t in counts if t > 1))


def kendall_tau(x, y, method: str = "auto") -> tuple[float, float]:
    """Tau-b and two-sided p; exact permutation p for n <= 8.

    Raises ValueError when either input is fully tied (tau undefined).
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape or x.ndim != 1:
        raise ValueError("inputs must be equal-length vectors")
    n = len(x)
    if n < 2:
        raise ValueError("need at least two observations")
    if np.all(x == x[0]) or np.all(y == y[0]):
        raise ValueError("tau undefined for an all-tied input")

    t_minus_d = _concordance(x, y)
    n0 = n * (n - 1) // 2
    n1 = _tie_term(x, lambda t: t * (t - 1) // 2)
    n2 = _tie_term(y, lambda t: t * (t - 1) // 2)
    tau = t_minus_d / math.sqrt((n0 - n1) * (n0 - n2))

    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")
    exact = method == "exact" or (method == "auto" and n <= EXACT_TAU_CUTOFF)
    if exact:
        reference = abs(t_minus_d)
        hits = 0
        total = 0
        for perm in permutations(range(n)):
            total += 1
            if abs(_concordance(x, y[list(perm)])) >= reference:
                hits += 1
        return tau, hits / total

    # tie-corrected variance of C - D (normal approximation)
    v0 = n * (n - 1) * (2 * n + 5)
    vt = _tie_term(x, lambda t: t * (t - 1) * (2 * t + 5))
    vu = _tie_term(y, lambda t: t * (t - 1) * (2 * t + 5))
    v1 = (_tie_term(x, lambda t: t * (t - 1))
          * _tie_term(y, lambda t: t * (t - 1))) / (2.0 * n * (n - 1))
    v2 = (_tie_term(x, lambda t: t * (t - 1) * (t - 2))
          * _tie_term(y, lambda t: t * (t - 1) * (t - 2))
          ) / (9.0 * n * (n - 1) * (n - 2))
    var = (v0 - vt - vu) / 18.0 + v1 + v2
    if var <= 0:
        raise ValueError("degenerate tie structure")
    z = t_minus_d / math.sqrt(var)
    return tau, _two_sided_p(z)


# -- Mann-Whitney U ----------------------------------------------------------

def _u_statistic(a: np.ndarray, b: np.ndarray) -> float:
    wins = (a[:, None] > b[None, :]).sum()
    ties = (a[:, None] == b[None, :]).sum()
    return float(wins) + 0.5 * float(ties)


def mann_whitney_u(a, b, method: str = "auto") -> tuple[float, float]:
    """U for sample a (ties count half) and two-sided p.

    Exact p enumerates all group-label assignments when both samples have
    at most 8 observations; the U permutation distribution is symmetric
    about n_a*n_b/2, so the two-sided p doubles cleanly even under ties.
    """
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise ValueError("both samples must be nonempty")
    n_a, n_b = len(a), len(b)
    u = _u_statistic(a, b)
    mu = n_a * n_b / 2.0

    if method not in ("auto", "exact", "approx"):
        raise ValueError(f"unknown method {method!r}")
    exact = method == "exact" or (method == "auto"
                                  and max(n_a, n_b) <= EXACT_U_CUTOFF)
    if exact:
        pooled = np.concatenate([a, b])
        indices = range(n_a + n_b)
        reference = abs(u - mu)
        hits = 0
        total = 0
        for chosen in combinations(indices, n_a):
            total += 1
            mask = np.zeros(n_a + n_b, dtype=bool)
            mask[list(chosen)] = True
            u_perm = _u_statistic(pooled[mask], pooled[~mask])
            if abs(u_perm - mu) >= reference - 1e-12:
                hits += 1
        return u, hits / total

    n = n_a + n_b
    tie_sum = _tie_term(np.concatenate([a, b]), lambda t: t ** 3 - t)
    var = (n_a * n_b / 12.0) * ((n + 1) - tie_sum / (n * (n - 1)))
    if var <= 0:
        return u, 1.0  # all observations identical: no evidence either way
    correction = 0.5 * np.sign(u - mu)
    z = (u - mu - correction) / math.sqrt(var)
    return u, _two_sided_p(z)


# -- Augmented Dickey-Fuller (lag 0, constant) -------------------------------

def adf_critical_values(t: int) -> dict[float, float]:
    out = {}
    for level, (b0, b1, b2, b3) in _ADF_RESPONSE_SURFACE.items():
        out[level] = b0 + b1 / t + b2 / t ** 2 + b3 / t ** 3
    return out


def adf_test(series) -> tuple[float, str, bool]:
    """DF t-statistic, p band, and the 5%-level stationarity call.

    Regression: diff(y)_t = alpha + phi * y_{t-1} + eps.  Raises ValueError
    on a constant series (singular regression).
    """
    y = np.asarray(series, dtype=float)
    if y.ndim != 1 or len(y) < 4:
        raise ValueError("need a series of at least 4 observations")
    if np.ptp(y) == 0.0:
        raise ValueError("constant series: regression is singular")
    dy = np.diff(y)
    lagged = y[:-1]
    design = np.column_stack([np.ones_like(lagged), lagged])
    if np.linalg.matrix_rank(design) < 2:
        raise ValueError("degenerate series: regression is singular")
    coef, _, _, _ = np.linalg.lstsq(design, dy, rcond=None)
    residuals = dy - design @ coef
    t_obs = len(dy)
    dof = t_obs - 2
    if dof <= 0:
        raise ValueError("series too short for the regression")
    sigma2 = float(residuals @ residuals) / dof
    xtx_inv = np.linalg.inv(design.T @ design)
    se_phi = math.sqrt(sigma2 * xtx_inv[1, 1])
    if se_phi == 0.0:
        raise ValueError("degenerate series: zero residual variance")
    statistic = float(coef[1] / se_phi)

    cv = adf_critical_values(t_obs)
    if statistic < cv[0.01]:
        band = P_BANDS[0]
    elif statistic < cv[0.05]:
        band = P_BANDS[1]
    elif statistic < cv[0.10]:
        band = P_BANDS[2]
    else:
        band = P_BANDS[3]
    return statistic, band, statistic < cv[0.05]


# -- Mann-Kendall ------------------------------------------------------------

def mann_kendall(series, alpha: float = 0.05) -> tuple[int, float, str]:
    """S, two-sided p (tie-corrected, continuity-corrected), trend call."""
    y = np.asarray(series, dtype=float)
    if y.ndim != 1 or len(y) < 4:
        raise ValueError("need a series of at least 4 observations")
    n = len(y)
    s = 0
    for i in range(n - 1):
        s += int(np.sum(np.sign(y[i + 1:] - y[i])))
    var = (n * (n - 1) * (2 * n + 5)
           - _tie_term(y, lambda t: t * (t - 1) * (2 * t + 5))) / 18.0
    if var <= 0:  # fully tied series
        return 0, 1.0, "none"
    if s > 0:
        z = (s - 1) / math.sqrt(var)
    elif s < 0:
        z = (s + 1) / math.sqrt(var)
    else:
        z = 0.0
    p = _two_sided_p(z)
    if p < alpha:
        trend = "increasing" if s > 0 else "decreasing"
    else:
        trend = "none"
    return s, p, trend
