"""Zero level-set extraction from inside-negative voxel grids.

Marching cubes with the classic 256-case table; vertices are placed by
linear interpolation along sign-changing lattice edges and shared through a
global edge index, so the raw surface is already topologically welded.
Boundary capping runs the same cell kernel over a virtual one-cell padding
shell of positive samples and clamps the resulting vertices onto the domain
box, which closes every solid cut by the domain faces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapFailure, SpecInvalid
from .grids import VoxelGrid
from .mc_tables import CORNER_PAIRS, EDGE_TABLE, TRI_TABLE

# Corner c of a cell sits at cell_origin + CORNER_OFFSETS[c] (x, y, z).
CORNER_OFFSETS = (
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
    (0, 0, 1), (1, 0, 1), (1, 1, 1), (0, 1, 1),
)

# Cell edge e is the lattice edge along _EDGE_AXIS[e] starting at
# cell_origin + _EDGE_BASE[e].
_EDGE_AXIS = (0, 1, 0, 1, 0, 1, 0, 1, 2, 2, 2, 2)
_EDGE_BASE = (
    (0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 0),
    (0, 0, 1), (1, 0, 1), (0, 1, 1), (0, 0, 1),
    (0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 1, 0),
)

_TRI_ARRAYS = tuple(np.array(t, dtype=np.int64).reshape(-1, 3) for t in TRI_TABLE)


@dataclass(frozen=True)
class TriangleMesh:
    """Indexed triangle soup; triangles wind counter-clockwise seen from outside."""

    vertices: np.ndarray
    triangles: np.ndarray

    def __post_init__(self):
        v = np.ascontiguousarray(np.asarray(self.vertices, dtype=np.float64).reshape(-1, 3))
        t = np.ascontiguousarray(np.asarray(self.triangles, dtype=np.int64).reshape(-1, 3))
        if t.size and (t.min() < 0 or t.max() >= len(v)):
            raise SpecInvalid("triangle indices out of range")
        v.setflags(write=False)
        t.setflags(write=False)
        object.__setattr__(self, "vertices", v)
        object.__setattr__(self, "triangles", t)

    @classmethod
    def empty(cls) -> "TriangleMesh":
        return cls(np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64))

    @property
    def bbox(self) -> tuple[np.ndarray, np.ndarray]:
        if len(self.vertices) == 0:
            z = np.zeros(3)
            return z, z
        return self.vertices.min(axis=0), self.vertices.max(axis=0)


def _perturbed_values(grid: VoxelGrid) -> np.ndarray:
    """Samples within 1e-9 of zero (relative to the value range) are nudged
    positive.  Keeps every cell's signs clean and every crossing strictly off
    the lattice nodes, so no two lattice edges can interpolate to the same
    float position."""
    v = grid.view3d().copy()
    vrange = float(v.max() - v.min()) if v.size else 0.0
    bump = 1e-9 * (vrange if vrange > 0.0 else 1.0)
    v[np.abs(v) < bump] = bump
    return v


def _polygonize(values: np.ndarray, coords: tuple[np.ndarray, np.ndarray, np.ndarray],
                spacing: tuple[float, float, float], cell_mask: np.ndarray | None):
    """Shared marching-cubes kernel over one sample block.

    values: (nz, ny, nx) strictly nonzero samples; coords: per-axis node
    coordinates.  Returns (vertices, triangles).  Crossing positions only
    depend on the incident node values and coordinates, so two calls agree
    bit-exactly on any lattice edge they both see.
    """
    nz, ny, nx = values.shape
    inside = values < 0.0

    cube_index = np.zeros((nz - 1, ny - 1, nx - 1), dtype=np.uint8)
    for bit, (di, dj, dk) in enumerate(CORNER_OFFSETS):
        cube_index |= inside[dk:dk + nz - 1, dj:dj + ny - 1, di:di + nx - 1].astype(np.uint8) << bit

    edge_flags = np.asarray(EDGE_TABLE, dtype=np.int32)[cube_index]
    active = edge_flags != 0
    if cell_mask is not None:
        active &= cell_mask
    if not active.any():
        return np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64)

    # One shared vertex per sign-changing lattice edge, keyed by
    # 3 * node_linear_id + axis.
    keys_parts, pos_parts = [], []
    axes = (np.asarray(coords[0], float), np.asarray(coords[1], float), np.asarray(coords[2], float))
    for axis in range(3):
        shift = [0, 0, 0]
        shift[axis] = 1
        di, dj, dk = shift
        na, nb, nc = nz - dk, ny - dj, nx - di
        v0 = values[:na, :nb, :nc]
        v1 = values[dk:, dj:, di:]
        cross = (v0 < 0.0) != (v1 < 0.0)
        kk, jj, ii = np.nonzero(cross)
        if kk.size == 0:
            continue
        t = v0[kk, jj, ii] / (v0[kk, jj, ii] - v1[kk, jj, ii])
        pos = np.empty((kk.size, 3))
        pos[:, 0] = axes[0][ii]
        pos[:, 1] = axes[1][jj]
        pos[:, 2] = axes[2][kk]
        pos[:, axis] += t * spacing[axis]
        node = (kk.astype(np.int64) * ny + jj) * nx + ii
        keys_parts.append(node * 3 + axis)
        pos_parts.append(pos)

    keys = np.concatenate(keys_parts)
    order = np.argsort(keys)
    sorted_keys = keys[order]
    vertices = np.concatenate(pos_parts)[order]

    ck, cj, ci = np.nonzero(active)
    cases = cube_index[ck, cj, ci]
    case_order = np.argsort(cases, kind="stable")
    ck, cj, ci, cases = ck[case_order], cj[case_order], ci[case_order], cases[case_order]

    tri_chunks = []
    boundaries = np.flatnonzero(np.diff(cases)) + 1
    for start, stop in zip(np.r_[0, boundaries], np.r_[boundaries, cases.size]):
        case = int(cases[start])
        tris = _TRI_ARRAYS[case]
        if tris.size == 0:
            continue
        sub_i, sub_j, sub_k = ci[start:stop], cj[start:stop], ck[start:stop]
        edge_ids = tris.reshape(-1)
        cell_keys = np.empty((sub_i.size, edge_ids.size), dtype=np.int64)
        for col, e in enumerate(edge_ids):
            bi, bj, bk = _EDGE_BASE[e]
            node = ((sub_k + bk).astype(np.int64) * ny + (sub_j + bj)) * nx + (sub_i + bi)
            cell_keys[:, col] = node * 3 + _EDGE_AXIS[e]
        vert_ids = np.searchsorted(sorted_keys, cell_keys)
        tri_chunks.append(vert_ids.reshape(-1, 3))

    if not tri_chunks:
        return np.zeros((0, 3)), np.zeros((0, 3), dtype=np.int64)
    triangles = np.concatenate(tri_chunks)
    # Table order winds toward the negative side; flip for outward = +field.
    triangles = triangles[:, [0, 2, 1]]
    return vertices, triangles


def marching_cubes(grid: VoxelGrid) -> TriangleMesh:
    """Extract the 0-isosurface; open where the solid meets the domain faces."""
    values = _perturbed_values(grid)
    vertices, triangles = _polygonize(
        values,
        tuple(grid.axis_coords(a) for a in range(3)),
        grid.spacing,
        None,
    )
    return TriangleMesh(vertices, triangles)


def cap_boundary(grid: VoxelGrid, mesh: TriangleMesh) -> TriangleMesh:
    """Close the mesh across the six domain faces.

    Runs the cell kernel over a virtual one-cell shell of positive samples
    around the grid and clamps the new vertices onto the domain box: the cap
    polygons land exactly on the faces and share their boundary crossings
    with ``mesh`` bit-for-bit.  Raises CapFailure when the combined surface
    is not closed.
    """
    values = _perturbed_values(grid)
    nz, ny, nx = values.shape

    padded = np.full((nz + 2, ny + 2, nx + 2), 1.0)
    padded[1:-1, 1:-1, 1:-1] = values

    pcoords = tuple(
        grid.origin[a] + grid.spacing[a] * np.arange(-1, grid.dims[a] + 1, dtype=float)
        for a in range(3)
    )
    shell = np.zeros((nz + 1, ny + 1, nx + 1), dtype=bool)
    shell[0, :, :] = shell[-1, :, :] = True
    shell[:, 0, :] = shell[:, -1, :] = True
    shell[:, :, 0] = shell[:, :, -1] = True

    cap_vertices, cap_triangles = _polygonize(padded, pcoords, grid.spacing, shell)

    if len(cap_triangles) == 0:
        capped = mesh
    else:
        lo = np.array(grid.origin)
        hi = np.array(grid.max_corner)
        cap_vertices = np.clip(cap_vertices, lo, hi)
        vertices = np.vstack([mesh.vertices, cap_vertices])
        triangles = np.vstack([mesh.triangles, cap_triangles + len(mesh.vertices)])
        # Exact weld only: near-degenerate slivers at grazing corners still
        # carry closure here and are collapsed by the spatial weld pass later.
        capped = _weld(TriangleMesh(vertices, triangles), 0.0, drop_slivers=False)

    bad = _open_edge_count(capped)
    if bad:
        raise CapFailure(f"capped mesh still has {bad} non-interior edges")
    return capped


def _open_edge_count(mesh: TriangleMesh) -> int:
    if len(mesh.triangles) == 0:
        return 0
    tri = mesh.triangles
    edges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
    edges.sort(axis=1)
    _, counts = np.unique(edges, axis=0, return_counts=True)
    return int(np.count_nonzero(counts != 2))


def _pinched_groups(group_of: np.ndarray, triangles: np.ndarray) -> np.ndarray:
    """Group ids sitting on an edge shared by more than two triangles."""
    tri = group_of[triangles]
    tri = tri[(tri[:, 0] != tri[:, 1]) & (tri[:, 1] != tri[:, 2]) & (tri[:, 2] != tri[:, 0])]
    if len(tri) == 0:
        return np.zeros(0, dtype=np.int64)
    edges = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
    edges.sort(axis=1)
    uniq, counts = np.unique(edges, axis=0, return_counts=True)
    return np.unique(uniq[counts > 2])


def _weld(mesh: TriangleMesh, eps: float, drop_slivers: bool = True) -> TriangleMesh:
    """Merge vertices within eps (0 = exact), drop collapsed triangles and
    orphan vertices; preserves vertex/triangle order.

    Conservative: a merge that would pinch the surface (leave an edge shared
    by more than two triangles) is undone, so welding never makes a closed
    manifold mesh non-manifold.  Sliver removal (area <= 1e-12 mm^2) is
    optional because a sliver can still carry closure."""
    vertices, triangles = mesh.vertices, mesh.triangles
    if len(vertices) == 0:
        return TriangleMesh.empty()

    keys = vertices if eps == 0.0 else np.round(vertices / eps)
    _, first_occurrence, inverse = np.unique(
        keys, axis=0, return_index=True, return_inverse=True
    )
    group_of = inverse.reshape(-1)
    group_root = first_occurrence[group_of]  # original index representing each vertex

    if len(triangles):
        pre_pinched: set[int] | None = None
        for _ in range(8):
            pinched = _pinched_groups(group_root, triangles)
            if pinched.size == 0:
                break
            if pre_pinched is None:
                pre_pinched = set(
                    _pinched_groups(np.arange(len(vertices)), triangles).tolist()
                )
            # only merge-created pinches are undone; pre-existing ones stay
            culprits = [g for g in pinched.tolist() if g not in pre_pinched]
            if not culprits:
                break
            bad = np.isin(group_root, culprits)
            group_root = group_root.copy()
            group_root[bad] = np.flatnonzero(bad)  # every bad vertex stands alone

    # roots are original indices, so ascending order preserves vertex order
    roots, rank_inverse = np.unique(group_root, return_inverse=True)
    new_vertices = vertices[roots]
    tri = rank_inverse.reshape(-1)[triangles] if len(triangles) else triangles

    if len(tri):
        distinct = (tri[:, 0] != tri[:, 1]) & (tri[:, 1] != tri[:, 2]) & (tri[:, 2] != tri[:, 0])
        tri = tri[distinct]
    if drop_slivers and len(tri):
        p = new_vertices[tri]
        area2 = np.linalg.norm(np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0]), axis=1)
        tri = tri[area2 > 2e-12]

    used = np.zeros(len(new_vertices), dtype=bool)
    used[tri.reshape(-1)] = True
    remap = np.cumsum(used) - 1
    return TriangleMesh(new_vertices[used], remap[tri])


def weld_and_clean(mesh: TriangleMesh, eps: float | None = None) -> TriangleMesh:
    """Public cleanup pass; default eps is 1e-6 of the bounding-box diagonal."""
    if eps is None:
        lo, hi = mesh.bbox
        eps = 1e-6 * float(np.linalg.norm(hi - lo))
    if eps < 0:
        raise SpecInvalid(f"weld epsilon must be >= 0, got {eps}")
    return _weld(mesh, eps)
