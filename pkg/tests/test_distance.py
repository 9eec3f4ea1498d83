"""Validate the exact point-to-surface distance against a brute-force oracle.

The oracle covers each triangle with a dense barycentric point grid and takes
the minimum point-to-point distance, which converges to the true distance
from above as the grid refines.
"""
import numpy as np

from meshloop.mesh import TriangleMesh
from meshloop.mesh.distance import point_surface_distance, sample_surface, sampled_hausdorff
from meshloop.mesh.fixtures import cube, icosphere


def brute_force_distance(points, mesh, density=60):
    grid = []
    for i in range(density + 1):
        for j in range(density + 1 - i):
            grid.append((i / density, j / density))
    grid = np.array(grid)
    cloud = []
    for a, b, c in mesh.faces:
        va, vb, vc = mesh.vertices[a], mesh.vertices[b], mesh.vertices[c]
        cloud.append(va + grid[:, :1] * (vb - va) + grid[:, 1:] * (vc - va))
    cloud = np.concatenate(cloud)
    out = np.empty(len(points))
    for k, p in enumerate(points):
        out[k] = np.sqrt(((cloud - p) ** 2).sum(axis=1).min())
    return out


def test_matches_brute_force_on_random_queries():
    rng = np.random.default_rng(5)
    mesh = cube()
    pts = rng.normal(scale=1.2, size=(40, 3))
    exact = point_surface_distance(pts, mesh)
    approx = brute_force_distance(pts, mesh, density=80)
    # the sampled oracle can only overestimate, by at most the grid spacing
    assert np.all(exact <= approx + 1e-12)
    assert np.max(approx - exact) < 0.03


def test_zero_on_surface_points():
    mesh = icosphere(1)
    samples = sample_surface(mesh, 200, seed=2)
    dist = point_surface_distance(samples, mesh)
    assert dist.max() < 1e-9


def test_interior_point_of_unit_cube():
    mesh = cube()
    dist = point_surface_distance(np.array([[0.0, 0.0, 0.0]]), mesh)
    assert dist[0] == np.float64(0.5) or abs(dist[0] - 0.5) < 1e-12


def test_hausdorff_symmetric_and_zero_on_self():
    mesh = icosphere(1)
    assert sampled_hausdorff(mesh, mesh, samples=300, seed=1) < 1e-9
    other = TriangleMesh(mesh.vertices * 1.1, mesh.faces.copy())
    d_ab = sampled_hausdorff(mesh, other, samples=300, seed=1)
    d_ba = sampled_hausdorff(other, mesh, samples=300, seed=1)
    assert abs(d_ab - d_ba) < 0.02
    assert d_ab > 0.05
