"""Deterministic mesh generators used as bundled models and test geometry."""
from __future__ import annotations

import math

import numpy as np

from .core import TriangleMesh


def cube(size: float = 1.0) -> TriangleMesh:
    """Axis-aligned cube, 8 vertices / 12 triangles."""
    s = size / 2.0
    v = np.array(
        [
            [-s, -s, -s], [s, -s, -s], [s, s, -s], [-s, s, -s],
            [-s, -s, s], [s, -s, s], [s, s, s], [-s, s, s],
        ]
    )
    quads = [
        (0, 3, 2, 1),  # z-
        (4, 5, 6, 7),  # z+
        (0, 1, 5, 4),  # y-
        (2, 3, 7, 6),  # y+
        (1, 2, 6, 5),  # x+
        (0, 4, 7, 3),  # x-
    ]
    faces = []
    for a, b, c, d in quads:
        faces.append((a, b, c))
        faces.append((a, c, d))
    return TriangleMesh(v, np.array(faces, dtype=np.int64))


def quad_cube_obj(size: float = 1.0) -> str:
    """Cube as OBJ text with six quad faces (fan-triangulation fixture)."""
    s = size / 2.0
    lines = []
    for x, y, z in cube(size).vertices:
        lines.append(f"v {x:g} {y:g} {z:g}")
    del s
    for a, b, c, d in [
        (1, 4, 3, 2), (5, 6, 7, 8), (1, 2, 6, 5),
        (3, 4, 8, 7), (2, 3, 7, 6), (1, 5, 8, 4),
    ]:
        lines.append(f"f {a} {b} {c} {d}")
    return "\n".join(lines) + "\n"


def icosphere(subdivisions: int = 2, radius: float = 1.0) -> TriangleMesh:
    """Subdivided icosahedron projected onto a sphere; 20 * 4^k faces."""
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    verts = [
        (-1, phi, 0), (1, phi, 0), (-1, -phi, 0), (1, -phi, 0),
        (0, -1, phi), (0, 1, phi), (0, -1, -phi), (0, 1, -phi),
        (phi, 0, -1), (phi, 0, 1), (-phi, 0, -1), (-phi, 0, 1),
    ]
    faces = [
        (0, 11, 5), (0, 5, 1), (0, 1, 7), (0, 7, 10), (0, 10, 11),
        (1, 5, 9), (5, 11, 4), (11, 10, 2), (10, 7, 6), (7, 1, 8),
        (3, 9, 4), (3, 4, 2), (3, 2, 6), (3, 6, 8), (3, 8, 9),
        (4, 9, 5), (2, 4, 11), (6, 2, 10), (8, 6, 7), (9, 8, 1),
    ]
    verts = [np.array(v, dtype=np.float64) for v in verts]

    def _mid(cache, i, j):
        key = (i, j) if i < j else (j, i)
        if key not in cache:
            verts.append((verts[i] + verts[j]) / 2.0)
            cache[key] = len(verts) - 1
        return cache[key]

    for _ in range(subdivisions):
        cache: dict[tuple[int, int], int] = {}
        nxt = []
        for a, b, c in faces:
            ab = _mid(cache, a, b)
            bc = _mid(cache, b, c)
            ca = _mid(cache, c, a)
            nxt += [(a, ab, ca), (b, bc, ab), (c, ca, bc), (ab, bc, ca)]
        faces = nxt
    v = np.array(verts)
    v = v / np.linalg.norm(v, axis=1)[:, None] * radius
    return TriangleMesh(v, np.array(faces, dtype=np.int64))


def bumpy_sphere(subdivisions: int = 2, radius: float = 1.0, amplitude: float = 0.15) -> TriangleMesh:
    """Organic-looking blob: icosphere with a smooth radial perturbation."""
    base = icosphere(subdivisions, radius)
    v = base.vertices.copy()
    x, y, z = v[:, 0], v[:, 1], v[:, 2]
    bump = 1.0 + amplitude * (np.sin(3.0 * x) * np.cos(2.0 * y) + 0.5 * np.sin(4.0 * z))
    return TriangleMesh(v * bump[:, None], base.faces.copy())


def cylinder(segments: int = 16, radius: float = 0.5, height: float = 2.0) -> TriangleMesh:
    """Closed cylinder with fan caps; sharp rim circles."""
    ang = 2.0 * math.pi * np.arange(segments) / segments
    ring = np.stack([radius * np.cos(ang), radius * np.sin(ang)], axis=1)
    bottom = np.concatenate([ring, np.full((segments, 1), -height / 2)], axis=1)
    top = np.concatenate([ring, np.full((segments, 1), height / 2)], axis=1)
    verts = np.concatenate([bottom, top, [[0, 0, -height / 2]], [[0, 0, height / 2]]])
    cb, ct = 2 * segments, 2 * segments + 1
    faces = []
    for k in range(segments):
        k1 = (k + 1) % segments
        faces.append((k, k1, segments + k))
        faces.append((k1, segments + k1, segments + k))
        faces.append((cb, k1, k))
        faces.append((ct, segments + k, segments + k1))
    return TriangleMesh(verts, np.array(faces, dtype=np.int64))


def torus(major_segments: int = 12, minor_segments: int = 8,
          major_radius: float = 1.0, minor_radius: float = 0.4) -> TriangleMesh:
    verts = []
    for i in range(major_segments):
        u = 2.0 * math.pi * i / major_segments
        for j in range(minor_segments):
            v = 2.0 * math.pi * j / minor_segments
            r = major_radius + minor_radius * math.cos(v)
            verts.append((r * math.cos(u), r * math.sin(u), minor_radius * math.sin(v)))
    faces = []
    for i in range(major_segments):
        for j in range(minor_segments):
            a = i * minor_segments + j
            b = ((i + 1) % major_segments) * minor_segments + j
            c = ((i + 1) % major_segments) * minor_segments + (j + 1) % minor_segments
            d = i * minor_segments + (j + 1) % minor_segments
            faces.append((a, b, c))
            faces.append((a, c, d))
    return TriangleMesh(np.array(verts), np.array(faces, dtype=np.int64))


def gridded_cube(cells: int = 4, size: float = 1.0) -> TriangleMesh:
    """Cube with each side split into cells x cells quads; hard 90-degree edges."""
    s = size / 2.0
    verts: list[tuple[float, float, float]] = []
    index: dict[tuple[float, float, float], int] = {}

    def vid(p):
        key = (round(p[0], 12), round(p[1], 12), round(p[2], 12))
        if key not in index:
            index[key] = len(verts)
            verts.append(key)
        return index[key]

    faces = []
    axes = [(0, 1, 2), (1, 2, 0), (2, 0, 1)]
    for ax, u_ax, v_ax in axes:
        for sign in (-s, s):
            for iu in range(cells):
                for iv in range(cells):
                    def corner(du, dv):
                        p = [0.0, 0.0, 0.0]
                        p[ax] = sign
                        p[u_ax] = -s + (iu + du) * size / cells
                        p[v_ax] = -s + (iv + dv) * size / cells
                        return vid(tuple(p))

                    a, b = corner(0, 0), corner(1, 0)
                    c, d = corner(1, 1), corner(0, 1)
                    if sign > 0:
                        faces += [(a, b, c), (a, c, d)]
                    else:
                        faces += [(a, c, b), (a, d, c)]
    return TriangleMesh(np.array(verts, dtype=np.float64), np.array(faces, dtype=np.int64))


def planar_fan(spokes: int = 8, radius: float = 1.0) -> TriangleMesh:
    """Flat disk (z = 0) fanned around an interior center vertex."""
    ang = 2.0 * math.pi * np.arange(spokes) / spokes
    rim = np.stack([radius * np.cos(ang), radius * np.sin(ang), np.zeros(spokes)], axis=1)
    verts = np.concatenate([[[0.0, 0.0, 0.0]], rim])
    faces = [(0, 1 + k, 1 + (k + 1) % spokes) for k in range(spokes)]
    return TriangleMesh(verts, np.array(faces, dtype=np.int64))


def plane_grid(cells: int = 4, size: float = 2.0) -> TriangleMesh:
    """Open flat grid in the z = 0 plane (boundary-edge fixture)."""
    ticks = np.linspace(-size / 2, size / 2, cells + 1)
    verts = [(x, y, 0.0) for y in ticks for x in ticks]
    faces = []
    for iy in range(cells):
        for ix in range(cells):
            a = iy * (cells + 1) + ix
            b, c, d = a + 1, a + cells + 2, a + cells + 1
            faces += [(a, b, c), (a, c, d)]
    return TriangleMesh(np.array(verts), np.array(faces, dtype=np.int64))


def fidelity_suite() -> dict[str, TriangleMesh]:
    """The five bundled models used for reduction-fidelity checks."""
    return {
        "icosphere": icosphere(2),
        "bumpy_sphere": bumpy_sphere(2),
        "cylinder": cylinder(16),
        "torus": torus(12, 8),
        "gridded_cube": gridded_cube(4),
    }
