"""Minimal deterministic software rasterizer.

Orthographic camera fitted to the mesh bounding box (uniform scale, shared
by all views so renders are comparable), Lambertian shading with a headlight
at the camera evaluated at the vertices and interpolated across faces
(Gouraud), and a z-buffer where the smaller camera-space depth wins.  Ties
go to the earlier face in mesh order, which keeps output deterministic for
coplanar geometry.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import IO, Union

import numpy as np

from ..mesh.core import MeshError, TriangleMesh

# view name -> (forward unit vector, screen-up unit vector)
VIEWS: dict[str, tuple[tuple[float, float, float], tuple[float, float, float]]] = {
    "front": ((0.0, 0.0, -1.0), (0.0, 1.0, 0.0)),
    "back": ((0.0, 0.0, 1.0), (0.0, 1.0, 0.0)),
    "left": ((1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
    "right": ((-1.0, 0.0, 0.0), (0.0, 1.0, 0.0)),
    "top": ((0.0, -1.0, 0.0), (0.0, 0.0, -1.0)),
}

_PADDING = 1.05


@dataclass(frozen=True)
class RenderImage:
    width: int
    height: int
    luminance: np.ndarray  # row-major, length width * height, values in [0, 1]

    def __post_init__(self):
        lum = np.asarray(self.luminance, dtype=np.float64)
        if lum.ndim != 1 or lum.size != self.width * self.height:
            raise ValueError("luminance must be a flat row-major array of width*height values")
        if lum.size and (lum.min() < 0.0 or lum.max() > 1.0):
            raise ValueError("luminance values must lie in [0, 1]")
        lum.flags.writeable = False
        object.__setattr__(self, "luminance", lum)

    def as_array(self) -> np.ndarray:
        """Return the image as a (height, width) array."""
        return self.luminance.reshape(self.height, self.width)


def vertex_luminance(mesh: TriangleMesh, fwd: np.ndarray) -> np.ndarray:
    """Headlight Lambertian term per vertex: max(0, -n.f) for the
    area-weighted average normal at each vertex."""
    a = mesh.vertices[mesh.faces[:, 0]]
    b = mesh.vertices[mesh.faces[:, 1]]
    c = mesh.vertices[mesh.faces[:, 2]]
    face_n = np.cross(b - a, c - a)  # length 2*area: area weighting for free
    acc = np.zeros_like(mesh.vertices)
    for k in range(3):
        np.add.at(acc, mesh.faces[:, k], face_n)
    norm = np.linalg.norm(acc, axis=1)
    norm[norm == 0.0] = 1.0
    unit = acc / norm[:, None]
    return np.maximum(0.0, -(unit @ fwd))


def render(mesh: TriangleMesh, view: str, size: int = 256) -> RenderImage:
    """Render an orthographic, smooth-shaded view of the mesh.

    The projection is centered on the bounding-box center and scaled by the
    largest box extent, so uniform translation and scaling of the mesh leave
    the image unchanged.
    """
    mesh.validate()
    if view not in VIEWS:
        raise ValueError(f"unknown view {view!r}; expected one of {sorted(VIEWS)}")
    if size < 16:
        raise ValueError("render size must be at least 16 pixels")

    fwd = np.array(VIEWS[view][0])
    up = np.array(VIEWS[view][1])
    right = np.cross(fwd, up)

    lo = mesh.vertices.min(axis=0)
    hi = mesh.vertices.max(axis=0)
    center = (lo + hi) / 2.0
    extent = float((hi - lo).max())
    if extent <= 0.0:
        raise MeshError("mesh has zero spatial extent")
    scale = size / (extent * _PADDING)

    local = mesh.vertices - center
    sx = local @ right * scale + size / 2.0
    sy = size / 2.0 - local @ up * scale
    depth = local @ fwd
    lum = vertex_luminance(mesh, fwd)

    tri_x = sx[mesh.faces]
    tri_y = sy[mesh.faces]
    tri_d = depth[mesh.faces]
    tri_l = lum[mesh.faces]

    img = np.zeros((size, size))
    zbuf = np.full((size, size), np.inf)

    for f in range(len(mesh.faces)):
        x0, x1, x2 = tri_x[f]
        y0, y1, y2 = tri_y[f]
        area = (x1 - x0) * (y2 - y0) - (x2 - x0) * (y1 - y0)
        if area == 0.0:
            continue
        px_lo = max(int(np.floor(min(x0, x1, x2) - 0.5)), 0)
        px_hi = min(int(np.ceil(max(x0, x1, x2) - 0.5)), size - 1)
        py_lo = max(int(np.floor(min(y0, y1, y2) - 0.5)), 0)
        py_hi = min(int(np.ceil(max(y0, y1, y2) - 0.5)), size - 1)
        if px_hi < px_lo or py_hi < py_lo:
            continue
        xs = np.arange(px_lo, px_hi + 1) + 0.5
        ys = np.arange(py_lo, py_hi + 1) + 0.5
        gx, gy = np.meshgrid(xs, ys)
        w0 = (x2 - x1) * (gy - y1) - (y2 - y1) * (gx - x1)
        w1 = (x0 - x2) * (gy - y2) - (y0 - y2) * (gx - x2)
        w2 = (x1 - x0) * (gy - y0) - (y1 - y0) * (gx - x0)
        if area > 0.0:
            inside = (w0 >= 0.0) & (w1 >= 0.0) & (w2 >= 0.0)
        else:
            inside = (w0 <= 0.0) & (w1 <= 0.0) & (w2 <= 0.0)
        if not inside.any():
            continue
        d0, d1, d2 = tri_d[f]
        l0, l1, l2 = tri_l[f]
        pix_depth = (w0 * d0 + w1 * d1 + w2 * d2) / area
        pix_lum = (w0 * l0 + w1 * l1 + w2 * l2) / area
        rows = slice(py_lo, py_hi + 1)
        cols = slice(px_lo, px_hi + 1)
        closer = inside & (pix_depth < zbuf[rows, cols])
        if closer.any():
            zbuf[rows, cols][closer] = pix_depth[closer]
            img[rows, cols][closer] = pix_lum[closer]

    return RenderImage(size, size, np.clip(img.ravel(), 0.0, 1.0))


def dump_pgm(image: RenderImage, sink: Union[str, IO[bytes]]) -> None:
    """Write the image as a binary 8-bit PGM file (debug/artifact output)."""
    data = np.clip(np.round(image.as_array() * 255.0), 0, 255).astype(np.uint8)
    header = f"P5\n{image.width} {image.height}\n255\n".encode()
    if isinstance(sink, str):
        with open(sink, "wb") as fh:
            fh.write(header + data.tobytes())
    else:
        sink.write(header + data.tobytes())
