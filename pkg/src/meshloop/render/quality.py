"""Perceived visual quality of a mesh variant relative to the original."""
from __future__ import annotations

from dataclasses import dataclass

from ..mesh.core import TriangleMesh
from .raster import VIEWS, render
from .ssim import ssim

VIEW_ORDER = ("front", "back", "left", "right", "top")
_SIZE = 256


@dataclass(frozen=True)
class QualityScore:
    """Per-view SSIM values (front, back, left, right, top) and their mean."""

    per_view: tuple[float, float, float, float, float]
    mean: float

    def __post_init__(self):
        if len(self.per_view) != len(VIEW_ORDER):
            raise ValueError("expected one SSIM value per canonical view")
        want = sum(self.per_view) / len(self.per_view)
        if abs(self.mean - want) > 1e-12:
            raise ValueError("mean must equal the arithmetic mean of per_view")


def perceived_quality(original: TriangleMesh, variant: TriangleMesh) -> QualityScore:
    """Mean SSIM between renders of both meshes from the five canonical views."""
    assert set(VIEW_ORDER) == set(VIEWS)
    scores = tuple(
        ssim(render(original, view, _SIZE), render(variant, view, _SIZE))
        for view in VIEW_ORDER
    )
    return QualityScore(per_view=scores, mean=sum(scores) / len(scores))
