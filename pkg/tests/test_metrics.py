from __future__ import annotations

import numpy as np
import pytest
from scipy import ndimage

from conftest import cube_mesh, mesh_area_volume
from tpms_forge.fields import FieldSpec, SurfaceKind
from tpms_forge.grids import Domain, VoxelGrid, sample, transform_inside_negative
from tpms_forge.mesher import TriangleMesh, cap_boundary, marching_cubes, weld_and_clean
from tpms_forge.metrics import (
    area_volume,
    measure,
    min_wall,
    overhang_fraction,
    relative_density,
    topology_check,
)


def erosion_rounds_oracle(inside: np.ndarray) -> int:
    """Independent oracle: iterate 6-neighborhood erosion until empty."""
    structure = ndimage.generate_binary_structure(3, 1)
    mask = inside.copy()
    rounds = 0
    while mask.any():
        mask = ndimage.binary_erosion(mask, structure=structure, border_value=0)
        rounds += 1
    return rounds


class TestAreaVolume:
    def test_unit_cube(self):
        area, volume = area_volume(cube_mesh())
        assert area == pytest.approx(6.0, abs=1e-12)
        assert volume == pytest.approx(1.0, abs=1e-12)

    def test_sphere_oracle(self, sphere_grid_64):
        mesh = marching_cubes(sphere_grid_64)
        area, volume = area_volume(mesh)
        assert area == pytest.approx(4 * np.pi, rel=0.02)
        assert volume == pytest.approx(4 * np.pi / 3, rel=0.01)

    def test_mirror_invariance(self):
        mesh = cube_mesh(2.0)
        mirrored = TriangleMesh(mesh.vertices * np.array([-1.0, 1.0, 1.0]), mesh.triangles)
        assert area_volume(mirrored) == pytest.approx(area_volume(mesh))

    def test_rotation_invariance(self, sphere_grid_64):
        mesh = marching_cubes(sphere_grid_64)
        theta = 0.7
        rot = np.array(
            [
                [np.cos(theta), -np.sin(theta), 0],
                [np.sin(theta), np.cos(theta), 0],
                [0, 0, 1],
            ]
        )
        tilt = np.array(
            [
                [1, 0, 0],
                [0, np.cos(0.4), -np.sin(0.4)],
                [0, np.sin(0.4), np.cos(0.4)],
            ]
        )
        rotated = TriangleMesh(mesh.vertices @ (tilt @ rot).T, mesh.triangles)
        a0, v0 = area_volume(mesh)
        a1, v1 = area_volume(rotated)
        assert a1 == pytest.approx(a0, rel=1e-6)
        assert v1 == pytest.approx(v0, rel=1e-6)

    def test_empty(self):
        assert area_volume(TriangleMesh.empty()) == (0.0, 0.0)


class TestRelativeDensity:
    def test_all_inside(self):
        g = VoxelGrid((3, 3, 3), (0, 0, 0), (1, 1, 1), np.full(27, -1.0))
        assert relative_density(g) == 1.0

    def test_all_outside(self):
        g = VoxelGrid((3, 3, 3), (0, 0, 0), (1, 1, 1), np.full(27, 1.0))
        assert relative_density(g) == 0.0

    def test_half_space_weighting(self):
        # Plane through the middle sample: trapezoid weights make the inside
        # half plus half the middle layer.
        domain = Domain((0, 0, 0), (1, 1, 1))
        g = sample(lambda x, y, z: z - 0.5 + 0 * x * y, domain, (5, 5, 5))
        assert relative_density(g) == pytest.approx(0.625)

    @pytest.mark.parametrize("kind", ["gyroid", "schwarz_p", "diamond"])
    def test_antisymmetric_network_half(self, kind):
        spec = FieldSpec(SurfaceKind(kind), 50.0)
        g = sample(spec, Domain((0, 0, 0), (50, 50, 50)), (128, 128, 128))
        assert relative_density(g) == pytest.approx(0.5, abs=0.01)

    def test_monotone_in_network_level(self):
        spec = FieldSpec(SurfaceKind.GYROID, 1.0)
        g = sample(spec, Domain((0, 0, 0), (1, 1, 1)), (24, 24, 24))
        densities = [
            relative_density(transform_inside_negative(g, "network", t))
            for t in np.linspace(-1.0, 1.0, 11)
        ]
        assert all(b >= a for a, b in zip(densities, densities[1:]))


class TestTopology:
    def test_closed_cube(self):
        topo = topology_check(cube_mesh())
        assert (topo.watertight, topo.edge_manifold, topo.consistent_winding) == (True, True, True)
        assert topo.component_count == 1

    def test_cube_missing_face(self):
        mesh = cube_mesh()
        open_mesh = TriangleMesh(mesh.vertices, mesh.triangles[:-1])
        topo = topology_check(open_mesh)
        assert not topo.watertight
        assert topo.consistent_winding
        assert topo.component_count == 1

    def test_two_disjoint_cubes(self):
        a = cube_mesh()
        b = cube_mesh()
        vertices = np.vstack([a.vertices, b.vertices + 5.0])
        triangles = np.vstack([a.triangles, b.triangles + len(a.vertices)])
        topo = topology_check(TriangleMesh(vertices, triangles))
        assert topo.component_count == 2
        assert topo.watertight

    def test_flipped_triangle_breaks_winding(self):
        mesh = cube_mesh()
        tris = mesh.triangles.copy()
        tris[0] = tris[0][[0, 2, 1]]
        topo = topology_check(TriangleMesh(mesh.vertices, tris))
        assert not topo.consistent_winding
        assert not topo.watertight

    def test_empty_mesh(self):
        topo = topology_check(TriangleMesh.empty())
        assert topo.component_count == 0
        assert not topo.watertight


class TestOverhang:
    def test_upright_cube_bottom_face(self):
        assert overhang_fraction(cube_mesh(), 45.0) == pytest.approx(1.0 / 6.0, abs=1e-12)

    def test_sphere_cap_fraction(self, sphere_grid_64):
        mesh = marching_cubes(sphere_grid_64)
        expected = (1 - np.cos(np.deg2rad(45))) / 2
        assert overhang_fraction(mesh, 45.0) == pytest.approx(expected, abs=0.01)

    def test_flat_plate_half(self):
        # 10 x 10 x 0.01 plate: underside is half the area, sides negligible.
        v = cube_mesh().vertices * np.array([10.0, 10.0, 0.01])
        plate = TriangleMesh(v, cube_mesh().triangles)
        assert overhang_fraction(plate, 45.0) == pytest.approx(0.5, abs=0.01)

    def test_no_downward_faces(self):
        v = np.array([[0, 0, 0], [1, 0, 0], [0, 1, 0]], dtype=float)
        up = TriangleMesh(v, np.array([[0, 1, 2]]))
        assert overhang_fraction(up, 45.0) == 0.0

    def test_threshold_bounds(self):
        with pytest.raises(ValueError):
            overhang_fraction(cube_mesh(), 0.0)
        with pytest.raises(ValueError):
            overhang_fraction(cube_mesh(), 90.0)


class TestMinWall:
    def test_slab_five_voxels(self):
        # 20x20x21 samples, slab occupying 5 z-layers, spacing 1 mm.
        values = np.ones((21, 20, 20))
        values[8:13, :, :] = -1.0
        g = VoxelGrid((20, 20, 21), (0, 0, 0), (1, 1, 1), values.reshape(-1))
        assert 4.0 <= min_wall(g) <= 6.0

    def test_empty_grid(self):
        g = VoxelGrid((4, 4, 4), (0, 0, 0), (1, 1, 1), np.ones(64))
        assert min_wall(g) == 0.0

    def test_matches_erosion_oracle(self):
        spec = FieldSpec(SurfaceKind.GYROID, 25.0)
        g = sample(spec, Domain((0, 0, 0), (50, 50, 50)), (48, 48, 48))
        sheet = transform_inside_negative(g, "sheet", 0.4)
        rounds = erosion_rounds_oracle(sheet.view3d() <= 0)
        assert min_wall(sheet) == pytest.approx(2.0 * rounds * min(sheet.spacing))

    def test_sheet_thickness_monotone(self):
        spec = FieldSpec(SurfaceKind.GYROID, 50.0)
        g = sample(spec, Domain((0, 0, 0), (50, 50, 50)), (64, 64, 64))
        walls = [
            min_wall(transform_inside_negative(g, "sheet", t)) for t in (0.2, 0.4, 0.8)
        ]
        assert walls[0] <= walls[1] <= walls[2]
        assert walls[0] < walls[2]


class TestMeasure:
    def test_report_for_capped_solid(self):
        spec = FieldSpec(SurfaceKind.GYROID, 50.0)
        g = sample(spec, Domain((0, 0, 0), (50, 50, 50)), (48, 48, 48))
        mesh = weld_and_clean(cap_boundary(g, marching_cubes(g)))
        report = measure(mesh, grid=g)
        assert report.watertight and report.edge_manifold and report.consistent_winding
        assert report.relative_density == pytest.approx(0.5, abs=0.01)
        assert 0.0 <= report.overhang_area_fraction <= 1.0
        assert report.min_wall_mm > 0
        assert report.warnings == []
        # grid density vs mesh volume fraction agree
        _, volume = mesh_area_volume(mesh)
        assert report.relative_density == pytest.approx(volume / 50**3, abs=0.02)

    def test_open_mesh_flagged(self):
        mesh = cube_mesh()
        open_mesh = TriangleMesh(mesh.vertices, mesh.triangles[:-1])
        report = measure(open_mesh)
        assert not report.watertight
        assert "NOT_WATERTIGHT" in report.warnings
        assert report.relative_density is None
        assert report.min_wall_mm is None

    def test_json_round_trip(self):
        report = measure(cube_mesh())
        from tpms_forge.metrics import MeshReport

        assert MeshReport.from_dict(report.to_dict()) == report
