"""Mesh and grid measurements: area, volume, relative density, topology,
overhangs, and the erosion-based minimum-wall estimate that gates the
nozzle constraint."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import ndimage, sparse
from scipy.sparse.csgraph import connected_components

from .grids import VoxelGrid
from .mesher import TriangleMesh

# Coded warnings carried by MeshReport.warnings.
WARN_THIN_WALL = "THIN_WALL"
WARN_OVERHANG = "OVERHANG"
WARN_MULTI_COMPONENT = "MULTI_COMPONENT"
WARN_ENVELOPE = "ENVELOPE"
WARN_NOT_WATERTIGHT = "NOT_WATERTIGHT"

DEFAULT_OVERHANG_THRESHOLD_DEG = 45.0


@dataclass
class TopologyResult:
    watertight: bool
    edge_manifold: bool
    consistent_winding: bool
    component_count: int


@dataclass
class MeshReport:
    """Measured result for one mesh (grid-backed fields are None when the
    mesh was loaded from a file without its voxel grid)."""

    surface_area: float
    enclosed_volume: float
    relative_density: Optional[float]
    watertight: bool
    edge_manifold: bool
    consistent_winding: bool
    component_count: int
    overhang_area_fraction: float
    min_wall_mm: Optional[float]
    warnings: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "surface_area": self.surface_area,
            "enclosed_volume": self.enclosed_volume,
            "relative_density": self.relative_density,
            "watertight": self.watertight,
            "edge_manifold": self.edge_manifold,
            "consistent_winding": self.consistent_winding,
            "component_count": self.component_count,
            "overhang_area_fraction": self.overhang_area_fraction,
            "min_wall_mm": self.min_wall_mm,
            "warnings": list(self.warnings),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MeshReport":
        return cls(
            surface_area=float(d["surface_area"]),
            enclosed_volume=float(d["enclosed_volume"]),
            relative_density=None if d.get("relative_density") is None else float(d["relative_density"]),
            watertight=bool(d["watertight"]),
            edge_manifold=bool(d["edge_manifold"]),
            consistent_winding=bool(d["consistent_winding"]),
            component_count=int(d["component_count"]),
            overhang_area_fraction=float(d["overhang_area_fraction"]),
            min_wall_mm=None if d.get("min_wall_mm") is None else float(d["min_wall_mm"]),
            warnings=list(d.get("warnings", [])),
        )


def area_volume(mesh: TriangleMesh) -> tuple[float, float]:
    """Total triangle area and divergence-theorem volume (absolute value).

    The volume is only meaningful for a watertight mesh; callers attach the
    NOT_WATERTIGHT warning when measuring open meshes."""
    if len(mesh.triangles) == 0:
        return 0.0, 0.0
    p = mesh.vertices[mesh.triangles]
    cross = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    area = float(np.linalg.norm(cross, axis=1).sum() / 2.0)
    volume = float(abs(np.einsum("ij,ij->", p[:, 0], np.cross(p[:, 1], p[:, 2])) / 6.0))
    return area, volume


def _trapezoid_weights(grid: VoxelGrid) -> np.ndarray:
    nx, ny, nz = grid.dims
    wx, wy, wz = (np.ones(n) for n in (nx, ny, nz))
    for w in (wx, wy, wz):
        w[0] = w[-1] = 0.5
    return wz[:, None, None] * wy[None, :, None] * wx[None, None, :]


def relative_density(grid: VoxelGrid) -> float:
    """Weighted fraction of samples with value <= 0 (trapezoid rule: faces
    count 1/2, edges 1/4, corners 1/8), an unbiased cell-volume estimate."""
    w = _trapezoid_weights(grid)
    inside = grid.view3d() <= 0.0
    total = float(np.prod([d - 1 for d in grid.dims]))
    return float((w * inside).sum() / total)


def topology_check(mesh: TriangleMesh) -> TopologyResult:
    """Edge-adjacency classification of the mesh.

    watertight: every undirected edge borders exactly two triangles that
    traverse it in opposite directions; edge_manifold allows boundary edges
    but no triple-shared edges; component_count is over vertex connectivity.
    """
    tri = mesh.triangles
    if len(tri) == 0:
        return TopologyResult(False, True, True, 0)

    directed = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
    undirected = np.sort(directed, axis=1)
    _, u_counts = np.unique(undirected, axis=0, return_counts=True)
    _, d_counts = np.unique(directed, axis=0, return_counts=True)

    edge_manifold = bool(u_counts.max() <= 2)
    # No repeated directed edge means every doubly-shared edge is traversed
    # once in each direction.
    consistent_winding = bool(d_counts.max() == 1)
    watertight = bool(edge_manifold and consistent_winding and (u_counts == 2).all())

    n = len(mesh.vertices)
    rows = np.concatenate([tri[:, 0], tri[:, 1], tri[:, 2]])
    cols = np.concatenate([tri[:, 1], tri[:, 2], tri[:, 0]])
    adj = sparse.coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    count, labels = connected_components(adj, directed=False)
    component_count = int(len(np.unique(labels[np.unique(tri)])))
    return TopologyResult(watertight, edge_manifold, consistent_winding, component_count)


def overhang_fraction(
    mesh: TriangleMesh, threshold_deg: float = DEFAULT_OVERHANG_THRESHOLD_DEG
) -> float:
    """Area fraction printed facing down steeper than the self-support angle.

    Build direction is +z; a triangle counts when its outward unit normal has
    an angle to -z smaller than (90 deg - threshold), i.e. n_z < -sin(threshold).
    """
    if not (0.0 < threshold_deg < 90.0):
        raise ValueError(f"threshold must be in (0, 90) degrees, got {threshold_deg}")
    if len(mesh.triangles) == 0:
        return 0.0
    p = mesh.vertices[mesh.triangles]
    cross = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    norms = np.linalg.norm(cross, axis=1)
    areas = norms / 2.0
    total = areas.sum()
    if total == 0.0:
        return 0.0
    with np.errstate(invalid="ignore", divide="ignore"):
        nz = np.where(norms > 0, cross[:, 2] / np.where(norms > 0, norms, 1.0), 0.0)
    hanging = nz < -np.sin(np.deg2rad(threshold_deg))
    return float(areas[hanging].sum() / total)


def min_wall(grid: VoxelGrid) -> float:
    """Thinnest printable feature estimate from 6-neighborhood erosion.

    The city-block distance transform gives the erosion round in which each
    inside voxel disappears (domain boundary counts as outside); the estimate
    is 2 x the deepest round, in mm via the smallest spacing component.
    Accurate to one voxel as a lower bound."""
    inside = grid.view3d() <= 0.0
    if not inside.any():
        return 0.0
    padded = np.pad(inside, 1, mode="constant", constant_values=False)
    rounds = ndimage.distance_transform_cdt(padded, metric="taxicab")
    return float(2.0 * rounds.max() * min(grid.spacing))


def measure(
    mesh: TriangleMesh,
    grid: VoxelGrid | None = None,
    overhang_threshold_deg: float = DEFAULT_OVERHANG_THRESHOLD_DEG,
    wall_grid: VoxelGrid | None = None,
) -> MeshReport:
    """Assemble a MeshReport; ``wall_grid`` overrides the grid used for the
    wall estimate (the brick pipeline passes the lattice before the base
    plate is unioned in, so a thick base cannot mask thin lattice walls)."""
    area, volume = area_volume(mesh)
    topo = topology_check(mesh)
    report = MeshReport(
        surface_area=area,
        enclosed_volume=volume,
        relative_density=relative_density(grid) if grid is not None else None,
        watertight=topo.watertight,
        edge_manifold=topo.edge_manifold,
        consistent_winding=topo.consistent_winding,
        component_count=topo.component_count,
        overhang_area_fraction=overhang_fraction(mesh, overhang_threshold_deg),
        min_wall_mm=None,
        warnings=[],
    )
    source = wall_grid if wall_grid is not None else grid
    if source is not None:
        report.min_wall_mm = min_wall(source)
    if not topo.watertight and len(mesh.triangles) > 0:
        report.warnings.append(WARN_NOT_WATERTIGHT)
    return report
