from .core import MeshError, ReductionParams, ReductionResult, TriangleMesh
from .decimate import decimate
from .obj_io import ObjParseError, dump_obj, load_mesh
from .quadrics import quadric_error, vertex_quadric

__all__ = [
    "MeshError",
    "ObjParseError",
    "ReductionParams",
    "ReductionResult",
    "TriangleMesh",
    "decimate",
    "dump_obj",
    "load_mesh",
    "quadric_error",
    "vertex_quadric",
]
