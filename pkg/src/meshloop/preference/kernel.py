"""Matern-5/2 covariance over the 9-dimensional parameter cube."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Union

import numpy as np
from scipy.spatial.distance import cdist

from ..mesh.core import ReductionParams

_SQRT5 = math.sqrt(5.0)


@dataclass(frozen=True)
class KernelConfig:
    lengthscale: float = 2.0
    smoothness: float = 2.5  # fixed; only the Matern-5/2 form is implemented
    signal_variance: float = 1.0
    noise_scale: float = 0.1

    def __post_init__(self):
        if not self.lengthscale > 0.0:
            raise ValueError("lengthscale must be positive")
        if self.smoothness != 2.5:
            raise ValueError("only smoothness 2.5 is supported")
        if not self.signal_variance > 0.0:
            raise ValueError("signal variance must be positive")
        if not self.noise_scale > 0.0:
            raise ValueError("likelihood noise scale must be positive")


def _as_point(p: Union[ReductionParams, np.ndarray]) -> np.ndarray:
    if isinstance(p, ReductionParams):
        return p.as_array()
    return np.asarray(p, dtype=np.float64)


def matern52_r(r: np.ndarray, config: KernelConfig) -> np.ndarray:
    """Kernel value as a function of Euclidean distance r."""
    s = _SQRT5 * np.asarray(r, dtype=np.float64) / config.lengthscale
    return config.signal_variance * (1.0 + s + s * s / 3.0) * np.exp(-s)


def matern52(a, b, config: KernelConfig = KernelConfig()) -> float:
    r = float(np.linalg.norm(_as_point(a) - _as_point(b)))
    return float(matern52_r(r, config))


def gram_matrix(x: np.ndarray, y: np.ndarray = None,
                config: KernelConfig = KernelConfig()) -> np.ndarray:
    """Covariance matrix between two point sets (rows are points)."""
    x = np.atleast_2d(np.asarray(x, dtype=np.float64))
    y = x if y is None else np.atleast_2d(np.asarray(y, dtype=np.float64))
    return matern52_r(cdist(x, y), config)
