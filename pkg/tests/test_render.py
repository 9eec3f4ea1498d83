"""Rasterizer and SSIM checks.

The occlusion oracle re-renders a scene by per-pixel orthographic ray
casting (Moller-Trumbore), sharing nothing with the scanline rasterizer
except the camera definition.
"""
import numpy as np
import pytest

from meshloop.mesh import ReductionParams, TriangleMesh, decimate
from meshloop.mesh.fixtures import cube, icosphere
from meshloop.render import RenderImage, VIEWS, perceived_quality, render, ssim
from meshloop.render.raster import _PADDING


def raycast_oracle(mesh, view, size):
    from meshloop.render.raster import vertex_luminance

    fwd = np.array(VIEWS[view][0], dtype=np.float64)
    up = np.array(VIEWS[view][1], dtype=np.float64)
    right = np.cross(fwd, up)
    lo, hi = mesh.vertices.min(axis=0), mesh.vertices.max(axis=0)
    center = (lo + hi) / 2.0
    extent = float((hi - lo).max())
    scale = size / (extent * _PADDING)

    tris = mesh.vertices[mesh.faces]
    e1 = tris[:, 1] - tris[:, 0]
    e2 = tris[:, 2] - tris[:, 0]
    tri_l = vertex_luminance(mesh, fwd)[mesh.faces]

    img = np.zeros((size, size))
    back_off = 4.0 * extent
    for py in range(size):
        for px in range(size):
            wx = (px + 0.5 - size / 2.0) / scale
            wy = (size / 2.0 - (py + 0.5)) / scale
            origin = center + wx * right + wy * up - back_off * fwd
            # Moller-Trumbore against every face, first-in-order nearest hit
            h = np.cross(fwd, e2)
            det = np.einsum("td,td->t", e1, h)
            ok = np.abs(det) > 1e-300
            inv = np.where(ok, 1.0 / np.where(ok, det, 1.0), 0.0)
            s = origin - tris[:, 0]
            u = np.einsum("td,td->t", s, h) * inv
            q = np.cross(s, e1)
            v = (q @ fwd) * inv
            t = np.einsum("td,td->t", e2, q) * inv
            hit = ok & (u >= 0.0) & (v >= 0.0) & (u + v <= 1.0)
            if hit.any():
                idx = np.flatnonzero(hit)
                best = idx[np.argmin(t[idx])]
                uu, vv = u[best], v[best]
                l0, l1, l2 = tri_l[best]
                img[py, px] = (1.0 - uu - vv) * l0 + uu * l1 + vv * l2
    return np.clip(img, 0.0, 1.0)


def test_render_rejects_bad_requests():
    mesh = cube()
    with pytest.raises(ValueError):
        render(mesh, "diagonal", 64)
    with pytest.raises(ValueError):
        render(mesh, "front", 8)


def test_render_is_deterministic():
    mesh = icosphere(1)
    a = render(mesh, "front", 64)
    b = render(mesh, "front", 64)
    assert np.array_equal(a.luminance, b.luminance)


def test_luminance_range_and_shape():
    img = render(cube(), "top", 32)
    assert img.width == img.height == 32
    assert img.luminance.shape == (32 * 32,)
    assert img.luminance.min() >= 0.0
    assert img.luminance.max() <= 1.0
    assert img.luminance.max() > 0.5  # something got drawn


def octahedron():
    # triangulation maps onto itself under z -> -z, unlike the fan-split cube
    verts = np.array([
        [1.0, 0, 0], [-1.0, 0, 0], [0, 1.0, 0], [0, -1.0, 0], [0, 0, 1.0], [0, 0, -1.0],
    ])
    faces = np.array([
        [0, 2, 4], [2, 1, 4], [1, 3, 4], [3, 0, 4],
        [2, 0, 5], [1, 2, 5], [3, 1, 5], [0, 3, 5],
    ])
    return TriangleMesh(verts, faces)


def test_back_view_is_horizontal_flip_of_front_for_z_symmetric_mesh():
    for mesh in (octahedron(), icosphere(1)):
        front = render(mesh, "front", 64).as_array()
        back = render(mesh, "back", 64).as_array()
        np.testing.assert_allclose(back, front[:, ::-1], atol=1e-12)


def test_similarity_invariance():
    mesh = icosphere(1)
    moved = TriangleMesh(mesh.vertices * 3.7 + np.array([5.0, -2.0, 9.0]), mesh.faces.copy())
    a = render(mesh, "front", 64).as_array()
    b = render(moved, "front", 64).as_array()
    np.testing.assert_allclose(a, b, atol=1e-9)


def test_occlusion_matches_raycast_oracle():
    # nested cubes: inner cube is fully occluded and must not contribute
    outer = cube(2.0)
    inner = cube(1.0)
    verts = np.concatenate([outer.vertices, inner.vertices])
    faces = np.concatenate([outer.faces, inner.faces + outer.n_vertices])
    scene = TriangleMesh(verts, faces)
    for view in ("front", "left", "top"):
        got = render(scene, view, 16).as_array()
        want = raycast_oracle(scene, view, 16)
        np.testing.assert_allclose(got, want, atol=1e-12)
        # and the image equals the outer cube rendered alone
        alone = render(cube(2.0), view, 16).as_array()
        np.testing.assert_allclose(got, alone, atol=1e-12)


def test_raycast_oracle_on_curved_mesh():
    mesh = icosphere(1)
    got = render(mesh, "front", 16).as_array()
    want = raycast_oracle(mesh, "front", 16)
    np.testing.assert_allclose(got, want, atol=1e-12)


def test_ssim_identical_images_is_one():
    img = render(icosphere(1), "front", 64)
    assert ssim(img, img) == pytest.approx(1.0, abs=1e-9)


def test_ssim_constant_extremes_near_zero():
    zeros = RenderImage(16, 16, np.zeros(256))
    ones = RenderImage(16, 16, np.ones(256))
    value = ssim(zeros, ones)
    assert 0.0 < value < 0.01
    c1 = 0.01 ** 2
    assert value == pytest.approx(c1 / (1.0 + c1), rel=1e-9)


def test_ssim_symmetry():
    a = render(icosphere(1), "front", 64)
    b = render(cube(), "front", 64)
    assert abs(ssim(a, b) - ssim(b, a)) < 1e-12


def test_ssim_range_and_errors():
    a = render(icosphere(1), "front", 32)
    b = render(cube(), "front", 32)
    assert -1.0 <= ssim(a, b) <= 1.0
    with pytest.raises(ValueError):
        ssim(a, render(cube(), "front", 64))


def test_perceived_quality_self_is_one():
    mesh = icosphere(1)
    score = perceived_quality(mesh, mesh)
    assert score.mean == pytest.approx(1.0, abs=1e-9)
    assert len(score.per_view) == 5
    assert score.mean == pytest.approx(sum(score.per_view) / 5.0, abs=1e-12)


def test_quality_degrades_monotonically_with_reduction():
    mesh = icosphere(2)
    params = ReductionParams.defaults()
    scores = {}
    for ratio in (0.0, 0.25, 0.5, 0.9):
        variant = decimate(mesh, params.replace(target_ratio=ratio)).mesh
        scores[ratio] = perceived_quality(mesh, variant).mean
    assert scores[0.0] == pytest.approx(1.0, abs=1e-9)
    assert scores[0.9] < scores[0.5] <= scores[0.25] <= scores[0.0]
    assert scores[0.9] < 1.0


def test_quality_ratio_sweep_has_negative_curvature():
    mesh = icosphere(2)
    params = ReductionParams.defaults()
    ratios = np.linspace(0.0, 0.95, 9)
    quality = [
        perceived_quality(mesh, decimate(mesh, params.replace(target_ratio=float(r))).mesh).mean
        for r in ratios
    ]
    coeffs = np.polyfit(ratios, quality, 2)
    assert coeffs[0] < 0.0
