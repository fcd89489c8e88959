from __future__ import annotations

import numpy as np
import pytest

from conftest import edge_count_map, mesh_area_volume
from tpms_forge.fields import FieldSpec, SurfaceKind
from tpms_forge.grids import Domain, sample, transform_inside_negative
from tpms_forge.mesher import TriangleMesh, cap_boundary, marching_cubes, weld_and_clean


def plane_grid(n: int = 17) -> tuple[Domain, object]:
    domain = Domain((0, 0, 0), (1, 1, 1))
    return domain, sample(lambda x, y, z: z - 0.5 + 0 * x * y, domain, (n, n, n))


def closed(mesh: TriangleMesh) -> bool:
    return all(c == 2 for c in edge_count_map(mesh).values())


class TestMarchingCubes:
    def test_all_positive_grid_empty(self, unit_domain):
        g = sample(lambda x, y, z: 1.0 + 0 * x * y * z, unit_domain, (8, 8, 8))
        mesh = marching_cubes(g)
        assert len(mesh.vertices) == 0
        assert len(mesh.triangles) == 0

    def test_plane_slice_exact(self):
        _, g = plane_grid(17)
        mesh = marching_cubes(g)
        assert len(mesh.triangles) > 0
        assert np.all(np.abs(mesh.vertices[:, 2] - 0.5) <= 1e-6)
        area, _ = mesh_area_volume(mesh)
        assert area == pytest.approx(1.0, abs=1e-6)

    def test_plane_normals_point_up_field_gradient(self):
        _, g = plane_grid(9)
        mesh = marching_cubes(g)
        p = mesh.vertices[mesh.triangles]
        normals = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
        assert np.all(normals[:, 2] > 0)

    def test_sphere_against_analytic_oracle(self, sphere_grid_64):
        mesh = marching_cubes(sphere_grid_64)
        area, volume = mesh_area_volume(mesh)
        assert area == pytest.approx(4 * np.pi, rel=0.02)
        assert volume == pytest.approx(4 * np.pi / 3, rel=0.01)
        assert closed(mesh)

    def test_deterministic(self, sphere_grid_64):
        a = marching_cubes(sphere_grid_64)
        b = marching_cubes(sphere_grid_64)
        assert np.array_equal(a.vertices, b.vertices)
        assert np.array_equal(a.triangles, b.triangles)

    def test_refinement_reduces_sphere_area_error(self):
        domain = Domain((-1.5,) * 3, (1.5,) * 3)
        errors = []
        for n in (32, 96):
            g = sample(lambda x, y, z: np.sqrt(x * x + y * y + z * z) - 1.0, domain, (n,) * 3)
            area, _ = mesh_area_volume(marching_cubes(g))
            errors.append(abs(area - 4 * np.pi))
        assert errors[1] < errors[0]


class TestCapBoundary:
    def test_interior_sphere_unchanged(self, sphere_grid_64):
        mesh = marching_cubes(sphere_grid_64)
        capped = cap_boundary(sphere_grid_64, mesh)
        assert capped is mesh

    def test_half_space_becomes_box(self):
        domain, g = plane_grid(17)
        capped = cap_boundary(g, marching_cubes(g))
        capped = weld_and_clean(capped)
        assert closed(capped)
        _, volume = mesh_area_volume(capped)
        assert volume == pytest.approx(0.5, abs=1e-6)

    def test_full_solid_block(self, unit_domain):
        g = sample(lambda x, y, z: -1.0 + 0 * x * y * z, unit_domain, (9, 9, 9))
        capped = weld_and_clean(cap_boundary(g, marching_cubes(g)))
        area, volume = mesh_area_volume(capped)
        assert closed(capped)
        assert area == pytest.approx(6.0, abs=1e-9)
        assert volume == pytest.approx(1.0, abs=1e-9)

    def test_gyroid_period_watertight_half_volume(self):
        spec = FieldSpec(SurfaceKind.GYROID, 50.0)
        domain = Domain((0, 0, 0), (50, 50, 50))
        g = sample(spec, domain, (64, 64, 64))
        capped = weld_and_clean(cap_boundary(g, marching_cubes(g)))
        assert closed(capped)
        _, volume = mesh_area_volume(capped)
        assert volume / 50**3 == pytest.approx(0.5, abs=0.01)

    def test_vertices_stay_in_domain(self):
        spec = FieldSpec(SurfaceKind.DIAMOND, 25.0)
        domain = Domain((0, 0, 0), (50, 50, 50))
        g = sample(spec, domain, (32, 32, 32))
        capped = weld_and_clean(cap_boundary(g, marching_cubes(g)))
        assert np.all(capped.vertices >= -1e-9)
        assert np.all(capped.vertices <= 50 + 1e-9)

    @pytest.mark.parametrize("kind", ["gyroid", "diamond", "lidinoid", "split_p", "skeletal_2"])
    def test_capped_solids_closed_across_kinds(self, kind):
        spec = FieldSpec(SurfaceKind(kind), 25.0)
        domain = Domain((0, 0, 0), (50, 50, 50))
        g = sample(spec, domain, (40, 40, 40))
        capped = weld_and_clean(cap_boundary(g, marching_cubes(g)))
        counts = edge_count_map(capped)
        assert all(c == 2 for c in counts.values())
        # consistent winding: each undirected edge traversed once per direction
        directed = set()
        for a, b, c in capped.triangles:
            for e in ((a, b), (b, c), (c, a)):
                assert e not in directed
                directed.add(e)
        # Euler characteristic of a closed orientable surface is even
        v = len(capped.vertices)
        e = len(counts)
        f = len(capped.triangles)
        assert (v - e + f) % 2 == 0
        _, volume = mesh_area_volume(capped)
        assert volume > 0


class TestWeldAndClean:
    def test_idempotent(self, sphere_grid_64):
        mesh = marching_cubes(sphere_grid_64)
        once = weld_and_clean(mesh)
        twice = weld_and_clean(once)
        assert np.array_equal(once.vertices, twice.vertices)
        assert np.array_equal(once.triangles, twice.triangles)

    def test_merges_coincident_vertices(self):
        v = np.array(
            [[0, 0, 0], [1, 0, 0], [0, 1, 0], [1, 0, 0], [0, 1, 0], [0, 0, 1]],
            dtype=float,
        )
        t = np.array([[0, 1, 2], [3, 4, 5]])
        welded = weld_and_clean(TriangleMesh(v, t), eps=0.0)
        assert len(welded.vertices) == 4
        assert len(welded.triangles) == 2

    def test_drops_collapsed_triangles_and_orphans(self):
        v = np.array([[0, 0, 0], [1e-12, 0, 0], [0, 1, 0], [5, 5, 5]], dtype=float)
        t = np.array([[0, 1, 2]])
        welded = weld_and_clean(TriangleMesh(v, t), eps=1e-6)
        assert len(welded.triangles) == 0
        assert len(welded.vertices) == 0

    def test_sphere_edge_manifold_after_weld(self, sphere_grid_64):
        mesh = weld_and_clean(marching_cubes(sphere_grid_64))
        counts = edge_count_map(mesh)
        assert all(c == 2 for c in counts.values())

    def test_orientation_preserved(self):
        v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
        t = np.array([[0, 1, 2]])
        welded = weld_and_clean(TriangleMesh(v, t), eps=0.0)
        assert np.array_equal(welded.triangles, t)

    def test_degenerate_corner_case_stays_watertight(self):
        # Field passes exactly through lattice nodes along domain edges; the
        # near-zero snap rule keeps the capped result closed.
        spec = FieldSpec(SurfaceKind.GYROID, 25.0)
        domain = Domain((0, 0, 0), (50, 50, 50))
        g = sample(spec, domain, (48, 48, 48))
        capped = weld_and_clean(cap_boundary(g, marching_cubes(g)))
        assert closed(capped)


class TestSolidifiedPipelines:
    @pytest.mark.parametrize("style,t", [("network", 0.2), ("sheet", 0.4)])
    def test_transformed_grids_mesh_closed(self, style, t):
        spec = FieldSpec(SurfaceKind.GYROID, 25.0)
        domain = Domain((0, 0, 0), (50, 50, 50))
        g = transform_inside_negative(sample(spec, domain, (40, 40, 40)), style, t)
        capped = weld_and_clean(cap_boundary(g, marching_cubes(g)))
        assert closed(capped)
        _, volume = mesh_area_volume(capped)
        assert volume > 0
