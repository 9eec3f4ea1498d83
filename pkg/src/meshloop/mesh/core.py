"""Indexed triangle meshes and the 9-dimensional reduction control vector."""
from __future__ import annotations

from dataclasses import dataclass, fields
import numpy as np


class MeshError(ValueError):
    """Raised for invalid mesh data or operations that cannot apply to it."""


PARAM_NAMES = (
    "target_ratio",
    "boundary_weight",
    "feature_angle",
    "placement_policy_blend",
    "normal_flip_penalty",
    "aspect_ratio_penalty",
    "edge_length_regularizer",
    "quadric_area_weighting",
    "seam_preservation_weight",
)


@dataclass(frozen=True)
class TriangleMesh:
    """Immutable indexed triangle mesh.

    ``vertices`` is (n, 3) float64, ``faces`` is (m, 3) integer indices into
    ``vertices``. ``face_ok`` optionally marks faces that survived processing
    without defects (None means "all fine").
    """

    vertices: np.ndarray
    faces: np.ndarray
    face_ok: np.ndarray | None = None

    def __post_init__(self):
        v = np.asarray(self.vertices, dtype=np.float64)
        f = np.asarray(self.faces, dtype=np.int64)
        if v.ndim != 2 or v.shape[1] != 3:
            raise MeshError(f"vertices must be (n, 3), got {v.shape}")
        if f.ndim != 2 or f.shape[1] != 3:
            raise MeshError(f"faces must be (m, 3), got {f.shape}")
        v.setflags(write=False)
        f.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "faces", f)
        if self.face_ok is not None:
            ok = np.asarray(self.face_ok, dtype=bool)
            if ok.shape != (f.shape[0],):
                raise MeshError("face_ok must have one flag per face")
            ok.setflags(write=False)
            object.__setattr__(self, "face_ok", ok)

    @property
    def n_vertices(self) -> int:
        return self.vertices.shape[0]

    @property
    def n_faces(self) -> int:
        return self.faces.shape[0]

    def validate(self) -> None:
        """Check the structural invariants; raise MeshError on violation."""
        if self.n_faces < 1:
            raise MeshError("mesh must have at least one face")
        if self.n_vertices < 3:
            raise MeshError("mesh must have at least three vertices")
        if self.faces.min() < 0 or self.faces.max() >= self.n_vertices:
            raise MeshError("face index out of vertex range")
        f = self.faces
        if np.any((f[:, 0] == f[:, 1]) | (f[:, 1] == f[:, 2]) | (f[:, 0] == f[:, 2])):
            raise MeshError("degenerate face with repeated vertex index")

    def bbox_diagonal(self) -> float:
        lo = self.vertices.min(axis=0)
        hi = self.vertices.max(axis=0)
        return float(np.linalg.norm(hi - lo))

    def face_areas(self) -> np.ndarray:
        a, b, c = (self.vertices[self.faces[:, k]] for k in range(3))
        return 0.5 * np.linalg.norm(np.cross(b - a, c - a), axis=1)

    def face_normals(self) -> np.ndarray:
        """Unit face normals; zero vector for degenerate faces."""
        a, b, c = (self.vertices[self.faces[:, k]] for k in range(3))
        n = np.cross(b - a, c - a)
        length = np.linalg.norm(n, axis=1)
        safe = np.where(length > 0.0, length, 1.0)
        n = n / safe[:, None]
        n[length == 0.0] = 0.0
        return n


@dataclass(frozen=True)
class ReductionParams:
    """Control vector for :func:`meshloop.mesh.decimate`, all slots in [0, 1].

    target_ratio maps monotonically (identity) to the fraction of faces to
    remove; the remaining slots weight penalty terms in the collapse cost or
    set thresholds (feature_angle, placement_policy_blend).
    """

    target_ratio: float
    boundary_weight: float
    feature_angle: float
    placement_policy_blend: float
    normal_flip_penalty: float
    aspect_ratio_penalty: float
    edge_length_regularizer: float
    quadric_area_weighting: float
    seam_preservation_weight: float

    def __post_init__(self):
        for slot in fields(self):
            value = getattr(self, slot.name)
            if not np.isfinite(value) or not 0.0 <= value <= 1.0:
                raise ValueError(f"{slot.name}={value!r} outside [0, 1]")
            object.__setattr__(self, slot.name, float(value))

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, n) for n in PARAM_NAMES], dtype=np.float64)

    @classmethod
    def from_array(cls, values) -> "ReductionParams":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (9,):
            raise ValueError(f"expected 9 components, got shape {values.shape}")
        return cls(**dict(zip(PARAM_NAMES, values)))

    @classmethod
    def defaults(cls) -> "ReductionParams":
        return cls.from_array(np.full(9, 0.5))

    def replace(self, **kwargs) -> "ReductionParams":
        state = {n: getattr(self, n) for n in PARAM_NAMES}
        state.update(kwargs)
        return ReductionParams(**state)

    def target_fraction(self) -> float:
        """Fraction of original faces that decimation should remove."""
        return self.target_ratio


@dataclass(frozen=True)
class ReductionResult:
    mesh: TriangleMesh
    reduction_ratio: float
    faulty: bool
    elapsed: float
