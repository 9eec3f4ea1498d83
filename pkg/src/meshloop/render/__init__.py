"""Software rendering and perceived-quality scoring for mesh variants."""
from .raster import VIEWS, RenderImage, dump_pgm, render
from .ssim import ssim
from .quality import QualityScore, perceived_quality

__all__ = [
    "VIEWS",
    "RenderImage",
    "QualityScore",
    "dump_pgm",
    "perceived_quality",
    "render",
    "ssim",
]
