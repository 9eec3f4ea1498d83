"""Preference-guided polygon reduction toolkit.

Subpackages:
    mesh        triangle meshes, OBJ I/O, quadric-error decimation
    render      software rasterizer, SSIM, perceived-quality scoring
    preference  pairwise-preference Gaussian process and batch proposals
    service     HTTP session loop and evaluation-sequence persistence
    rater       simulated raters with configurable judgment biases
    analysis    rank/stationarity/trend statistics over exported sequences
"""

__version__ = "0.1.0"
