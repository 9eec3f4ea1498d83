"""Wavefront OBJ ingestion and export (ASCII ``v``/``f`` records only)."""
from __future__ import annotations

import io
from typing import IO

import numpy as np

from .core import MeshError, TriangleMesh


class ObjParseError(MeshError):
    """Malformed OBJ input; carries the 1-based offending line number."""

    def __init__(self, line_no: int, message: str):
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


def _as_text_lines(source) -> list[str]:
    if isinstance(source, bytes):
        return source.decode("utf-8", errors="replace").splitlines()
    if isinstance(source, str):
        return source.splitlines()
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8", errors="replace")
    return data.splitlines()


def _resolve_index(token: str, n_vertices: int, line_no: int) -> int:
    # "f 1/2/3" style references: only the vertex index matters here.
    head = token.split("/", 1)[0]
    try:
        idx = int(head)
    except ValueError:
        raise ObjParseError(line_no, f"bad face index {token!r}") from None
    if idx == 0:
        raise ObjParseError(line_no, "OBJ indices are 1-based, got 0")
    if idx < 0:
        idx = n_vertices + idx  # relative reference to a previous vertex
    else:
        idx -= 1
    if not 0 <= idx < n_vertices:
        raise ObjParseError(line_no, f"face references vertex {token} of {n_vertices}")
    return idx


def load_mesh(source: bytes | str | IO, format: str = "obj") -> TriangleMesh:
    """Parse an OBJ byte/text stream into a TriangleMesh.

    Quads and larger polygons are fan-triangulated. Unknown record types are
    ignored. Raises ObjParseError with a line number on malformed input.
    """
    if format.lower() != "obj":
        raise MeshError(f"unsupported mesh format {format!r}")
    vertices: list[tuple[float, float, float]] = []
    faces: list[tuple[int, int, int]] = []
    for line_no, raw in enumerate(_as_text_lines(source), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        tag = parts[0]
        if tag == "v":
            if len(parts) < 4:
                raise ObjParseError(line_no, "vertex record needs 3 coordinates")
            try:
                vertices.append((float(parts[1]), float(parts[2]), float(parts[3])))
            except ValueError:
                raise ObjParseError(line_no, f"bad vertex coordinate in {line!r}") from None
        elif tag == "f":
            refs = parts[1:]
            if len(refs) < 3:
                raise ObjParseError(line_no, "face record needs at least 3 vertices")
            idx = [_resolve_index(tok, len(vertices), line_no) for tok in refs]
            for k in range(1, len(idx) - 1):
                tri = (idx[0], idx[k], idx[k + 1])
                if len(set(tri)) != 3:
                    raise ObjParseError(line_no, f"degenerate face {refs!r}")
                faces.append(tri)
        # vt/vn/g/o/s/usemtl/mtllib and friends are irrelevant to geometry
    if not faces:
        raise ObjParseError(len(_as_text_lines(source)) or 1, "no faces in OBJ input")
    mesh = TriangleMesh(np.array(vertices), np.array(faces, dtype=np.int64))
    mesh.validate()
    return mesh


def dump_obj(mesh: TriangleMesh, comment: str | None = None) -> str:
    """Serialize a mesh back to ASCII OBJ (1-based indices)."""
    out = io.StringIO()
    if comment:
        out.write(f"# {comment}\n")
    for x, y, z in mesh.vertices:
        out.write(f"v {x:.9g} {y:.9g} {z:.9g}\n")
    for a, b, c in mesh.faces:
        out.write(f"f {a + 1} {b + 1} {c + 1}\n")
    return out.getvalue()
