"""Structural similarity on luminance images.

Mean local SSIM over all 8x8 sliding windows (stride 1), stabilization
constants C1 = 0.01^2 and C2 = 0.03^2 for a [0, 1] dynamic range.  Window
sums use integral images, so results are exact up to float64 rounding.
"""
from __future__ import annotations

import numpy as np

from .raster import RenderImage

_WINDOW = 8
_C1 = 0.01 ** 2
_C2 = 0.03 ** 2


def _box_sums(x: np.ndarray, k: int) -> np.ndarray:
    c = np.cumsum(np.cumsum(x, axis=0), axis=1)
    c = np.pad(c, ((1, 0), (1, 0)))
    return c[k:, k:] - c[:-k, k:] - c[k:, :-k] + c[:-k, :-k]


def ssim(a: RenderImage, b: RenderImage) -> float:
    if (a.width, a.height) != (b.width, b.height):
        raise ValueError("images must share dimensions")
    if min(a.width, a.height) < _WINDOW:
        raise ValueError(f"images must be at least {_WINDOW} pixels on each side")
    xa = a.as_array()
    xb = b.as_array()
    n = float(_WINDOW * _WINDOW)
    mu_a = _box_sums(xa, _WINDOW) / n
    mu_b = _box_sums(xb, _WINDOW) / n
    var_a = _box_sums(xa * xa, _WINDOW) / n - mu_a * mu_a
    var_b = _box_sums(xb * xb, _WINDOW) / n - mu_b * mu_b
    cov = _box_sums(xa * xb, _WINDOW) / n - mu_a * mu_b
    num = (2.0 * mu_a * mu_b + _C1) * (2.0 * cov + _C2)
    den = (mu_a * mu_a + mu_b * mu_b + _C1) * (var_a + var_b + _C2)
    return float(np.mean(num / den))
