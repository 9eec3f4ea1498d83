import io

import numpy as np
import pytest

from meshloop.mesh import MeshError, ObjParseError, TriangleMesh, dump_obj, load_mesh
from meshloop.mesh.fixtures import cube, quad_cube_obj


def test_loads_triangulated_cube_text():
    mesh = load_mesh(io.StringIO(dump_obj(cube())))
    assert mesh.n_vertices == 8
    assert mesh.n_faces == 12


def test_quad_faces_fan_triangulate():
    mesh = load_mesh(io.StringIO(quad_cube_obj()))
    assert mesh.n_vertices == 8
    assert mesh.n_faces == 12
    # fan triangulation of quad (a b c d) -> (a b c), (a c d)
    first_two = mesh.faces[:2].tolist()
    assert first_two == [[0, 3, 2], [0, 2, 1]]


def test_roundtrip_preserves_geometry():
    mesh = cube()
    back = load_mesh(io.StringIO(dump_obj(mesh)))
    np.testing.assert_allclose(back.vertices, mesh.vertices, atol=1e-12)
    np.testing.assert_array_equal(back.faces, mesh.faces)


def test_accepts_bytes_and_vertex_attributes():
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nvn 0 0 1\nvt 0 0\nf 1/1/1 2/1/1 3/1/1\n"
    mesh = load_mesh(text.encode())
    assert mesh.n_faces == 1
    assert mesh.faces.tolist() == [[0, 1, 2]]


def test_negative_indices_are_relative():
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf -3 -2 -1\n"
    mesh = load_mesh(io.StringIO(text))
    assert mesh.faces.tolist() == [[0, 1, 2]]


def test_ignores_comments_and_unknown_records():
    text = "# header\no thing\ns off\nusemtl none\nv 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"
    assert load_mesh(io.StringIO(text)).n_faces == 1


def test_out_of_range_index_reports_line_number():
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 9\n"
    with pytest.raises(ObjParseError) as err:
        load_mesh(io.StringIO(text))
    assert err.value.line_no == 4


def test_zero_index_rejected():
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 0 1 2\n"
    with pytest.raises(ObjParseError):
        load_mesh(io.StringIO(text))


def test_malformed_vertex_reports_line():
    with pytest.raises(ObjParseError) as err:
        load_mesh(io.StringIO("v 0 zero 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\n"))
    assert err.value.line_no == 1


def test_no_faces_is_an_error():
    with pytest.raises(ObjParseError):
        load_mesh(io.StringIO("v 0 0 0\nv 1 0 0\nv 0 1 0\n"))


def test_degenerate_face_with_repeated_vertex_rejected():
    text = "v 0 0 0\nv 1 0 0\nv 0 1 0\nf 1 2 3\nf 1 1 2\n"
    with pytest.raises(ObjParseError) as err:
        load_mesh(io.StringIO(text))
    assert err.value.line_no == 5


def test_unsupported_format_rejected():
    with pytest.raises(MeshError):
        load_mesh("v 0 0 0", format="stl")


def test_mesh_validate_rejects_bad_indices():
    verts = np.zeros((3, 3))
    verts[1, 0] = 1.0
    verts[2, 1] = 1.0
    with pytest.raises(MeshError):
        TriangleMesh(verts, np.array([[0, 1, 5]])).validate()
