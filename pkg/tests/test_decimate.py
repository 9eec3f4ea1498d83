import time

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from meshloop.mesh import MeshError, ReductionParams, TriangleMesh, decimate
from meshloop.mesh.distance import sampled_hausdorff
from meshloop.mesh.fixtures import cube, fidelity_suite, icosphere, plane_grid


DEFAULTS = ReductionParams.defaults()


def test_param_vector_roundtrip_and_validation():
    p = DEFAULTS.replace(target_ratio=0.75, seam_preservation_weight=0.1)
    arr = p.as_array()
    assert arr.shape == (9,)
    assert ReductionParams.from_array(arr) == p
    with pytest.raises(ValueError):
        ReductionParams.from_array(np.full(9, 1.5))
    with pytest.raises(ValueError):
        ReductionParams.from_array(np.zeros(8))


def test_zero_target_is_identity():
    mesh = icosphere(1)
    res = decimate(mesh, DEFAULTS.replace(target_ratio=0.0))
    np.testing.assert_array_equal(res.mesh.faces, mesh.faces)
    np.testing.assert_allclose(res.mesh.vertices, mesh.vertices)
    assert res.reduction_ratio == 0.0
    assert res.faulty is False


def test_icosphere_hits_75_percent_target_quickly():
    mesh = icosphere(3)
    assert mesh.n_faces == 1280
    start = time.perf_counter()
    res = decimate(mesh, DEFAULTS.replace(target_ratio=0.75))
    elapsed = time.perf_counter() - start
    assert abs(res.mesh.n_faces - 320) <= 2
    assert elapsed < 1.0
    res.mesh.validate()


def test_reported_ratio_matches_face_counts():
    mesh = icosphere(2)
    for tr in (0.25, 0.5, 0.75, 0.9):
        res = decimate(mesh, DEFAULTS.replace(target_ratio=tr))
        actual = 1.0 - res.mesh.n_faces / mesh.n_faces
        assert res.reduction_ratio == pytest.approx(actual, abs=0.002)


def test_bitwise_deterministic():
    mesh = icosphere(2)
    params = DEFAULTS.replace(target_ratio=0.6, feature_angle=0.3, boundary_weight=0.8)
    a = decimate(mesh, params)
    b = decimate(mesh, params)
    assert np.array_equal(a.mesh.vertices, b.mesh.vertices)
    assert np.array_equal(a.mesh.faces, b.mesh.faces)
    assert a.reduction_ratio == b.reduction_ratio
    assert a.faulty == b.faulty


def test_face_count_monotone_in_target_ratio():
    mesh = icosphere(2)
    counts = [
        decimate(mesh, DEFAULTS.replace(target_ratio=float(tr))).mesh.n_faces
        for tr in np.linspace(0.0, 1.0, 9)
    ]
    assert all(a >= b for a, b in zip(counts, counts[1:]))
    assert counts[0] == mesh.n_faces
    assert counts[-1] >= 4


def test_half_reduction_stays_close_to_surface():
    # symmetric Hausdorff of a 50% reduction stays under 5% of the bbox diagonal
    params = DEFAULTS.replace(target_ratio=0.5)
    for name, mesh in fidelity_suite().items():
        res = decimate(mesh, params)
        dist = sampled_hausdorff(mesh, res.mesh, samples=1500, seed=13)
        assert dist <= 0.05 * mesh.bbox_diagonal(), name


def test_boundary_weight_pins_open_edges():
    grid = plane_grid(6)

    def outline_drift(bw: float) -> float:
        res = decimate(grid, DEFAULTS.replace(target_ratio=0.7, boundary_weight=bw))
        v = res.mesh.vertices
        # distance of every vertex from the unit-square outline or interior
        overshoot = np.maximum(np.abs(v[:, :2]).max(axis=1) - 1.0, 0.0).max()
        assert overshoot <= 1e-9
        # how far the rim of the reduced patch has pulled inside the original square
        return 1.0 - np.abs(v[:, :2]).max(axis=1).min()

    # with boundary constraints the perimeter should survive better than without
    assert outline_drift(1.0) <= outline_drift(0.0)


def test_extreme_target_keeps_mesh_valid():
    res = decimate(icosphere(2), DEFAULTS.replace(target_ratio=1.0))
    res.mesh.validate()
    assert res.mesh.n_faces >= 4


def test_rejects_tiny_or_invalid_input():
    with pytest.raises(MeshError):
        decimate(
            TriangleMesh(np.eye(3), np.array([[0, 1, 2]])),
            DEFAULTS.replace(target_ratio=0.5),
        )
    bad = TriangleMesh(np.array([[0.0, 0, 0], [1, 0, 0], [0, 1, 0], [np.nan, 0, 1]]),
                       np.array([[0, 1, 2], [0, 1, 3], [1, 2, 3], [0, 2, 3]]))
    with pytest.raises(MeshError):
        decimate(bad, DEFAULTS)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(min_value=0.0, max_value=1.0, allow_nan=False), min_size=9, max_size=9))
def test_any_param_vector_yields_valid_mesh(raw):
    params = ReductionParams.from_array(np.array(raw))
    res = decimate(icosphere(1), params)
    res.mesh.validate()
    assert 0.0 <= res.reduction_ratio <= 1.0
    assert res.mesh.n_faces >= 4
    assert np.all(np.isfinite(res.mesh.vertices))


def test_output_has_no_unreferenced_vertices():
    res = decimate(icosphere(2), DEFAULTS.replace(target_ratio=0.8))
    used = np.unique(res.mesh.faces)
    assert used.size == res.mesh.n_vertices


def test_cube_corners_survive_with_strong_features():
    mesh = cube()
    res = decimate(mesh, DEFAULTS.replace(target_ratio=0.0))
    assert res.mesh.n_faces == 12
