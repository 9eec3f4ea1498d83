"""Plane-distance error quadrics (Garland-Heckbert fundamental quadrics).

A plane (a, b, c, d) with unit normal induces the 4x4 form Q = p p^T,
p = (a, b, c, d); the squared point-plane distance of v = (x, y, z, 1) is
v^T Q v. Quadrics add over planes, so a vertex quadric is the (optionally
area-weighted) sum over its incident face planes.

Internally the decimator keeps quadrics as 10-vectors of the upper triangle
(q0..q9) = (a^2, ab, ac, ad, b^2, bc, bd, c^2, cd, d^2) for speed; the public
API exposes plain symmetric 4x4 arrays.
"""
from __future__ import annotations

import numpy as np

from .core import MeshError, TriangleMesh


def plane_quadric_10(a: float, b: float, c: float, d: float, weight: float = 1.0):
    return (
        weight * a * a, weight * a * b, weight * a * c, weight * a * d,
        weight * b * b, weight * b * c, weight * b * d,
        weight * c * c, weight * c * d,
        weight * d * d,
    )


def quadric_10_to_matrix(q) -> np.ndarray:
    q0, q1, q2, q3, q4, q5, q6, q7, q8, q9 = q
    return np.array(
        [
            [q0, q1, q2, q3],
            [q1, q4, q5, q6],
            [q2, q5, q7, q8],
            [q3, q6, q8, q9],
        ]
    )


def quadric_error_10(q, x: float, y: float, z: float) -> float:
    """v^T Q v for v = (x, y, z, 1) in the 10-component representation."""
    q0, q1, q2, q3, q4, q5, q6, q7, q8, q9 = q
    return (
        q0 * x * x + q4 * y * y + q7 * z * z
        + 2.0 * (q1 * x * y + q2 * x * z + q5 * y * z)
        + 2.0 * (q3 * x + q6 * y + q8 * z)
        + q9
    )


def face_planes(mesh: TriangleMesh) -> tuple[np.ndarray, np.ndarray]:
    """Unit-normal plane coefficients (m, 4) and areas (m,) per face.

    Degenerate (zero-area) faces get an all-zero plane, which contributes a
    zero quadric.
    """
    a = mesh.vertices[mesh.faces[:, 0]]
    b = mesh.vertices[mesh.faces[:, 1]]
    c = mesh.vertices[mesh.faces[:, 2]]
    n = np.cross(b - a, c - a)
    norm = np.linalg.norm(n, axis=1)
    area = 0.5 * norm
    safe = np.where(norm > 0.0, norm, 1.0)
    n = n / safe[:, None]
    n[norm == 0.0] = 0.0
    d = -np.einsum("ij,ij->i", n, a)
    return np.concatenate([n, d[:, None]], axis=1), area


def face_quadrics_10(mesh: TriangleMesh, area_weighting: float) -> np.ndarray:
    """(m, 10) per-face quadrics with weight (1-w) + w * area/mean_area."""
    planes, areas = face_planes(mesh)
    mean_area = areas.mean() if areas.size else 1.0
    if mean_area <= 0.0:
        mean_area = 1.0
    w = (1.0 - area_weighting) + area_weighting * (areas / mean_area)
    p = planes
    cols = [
        p[:, 0] * p[:, 0], p[:, 0] * p[:, 1], p[:, 0] * p[:, 2], p[:, 0] * p[:, 3],
        p[:, 1] * p[:, 1], p[:, 1] * p[:, 2], p[:, 1] * p[:, 3],
        p[:, 2] * p[:, 2], p[:, 2] * p[:, 3],
        p[:, 3] * p[:, 3],
    ]
    return np.stack(cols, axis=1) * w[:, None]


def vertex_quadrics_10(mesh: TriangleMesh, area_weighting: float) -> np.ndarray:
    """(n, 10) per-vertex sums of incident face quadrics."""
    fq = face_quadrics_10(mesh, area_weighting)
    out = np.zeros((mesh.n_vertices, 10))
    for k in range(3):
        np.add.at(out, mesh.faces[:, k], fq)
    return out


def vertex_quadric(mesh: TriangleMesh, vertex: int, area_weighting: float = 0.0) -> np.ndarray:
    """Symmetric 4x4 error quadric of one vertex.

    Raises MeshError for isolated vertices (no incident face).
    """
    if not 0 <= vertex < mesh.n_vertices:
        raise MeshError(f"vertex {vertex} out of range")
    if not np.any(mesh.faces == vertex):
        raise MeshError(f"vertex {vertex} has no incident face")
    if not 0.0 <= area_weighting <= 1.0:
        raise ValueError("area_weighting must lie in [0, 1]")
    q = vertex_quadrics_10(mesh, area_weighting)[vertex]
    return quadric_10_to_matrix(q)


def quadric_error(quadric: np.ndarray, point) -> float:
    """Evaluate v^T Q v at a 3D point (homogeneous w = 1)."""
    v = np.append(np.asarray(point, dtype=np.float64), 1.0)
    return float(v @ quadric @ v)
