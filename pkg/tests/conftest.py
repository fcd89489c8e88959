from __future__ import annotations

import numpy as np
import pytest

from tpms_forge.grids import Domain, sample
from tpms_forge.mesher import TriangleMesh


@pytest.fixture(scope="session")
def unit_domain() -> Domain:
    return Domain((0.0, 0.0, 0.0), (1.0, 1.0, 1.0))


@pytest.fixture(scope="session")
def sphere_grid_64():
    domain = Domain((-1.5, -1.5, -1.5), (1.5, 1.5, 1.5))
    return sample(lambda x, y, z: np.sqrt(x * x + y * y + z * z) - 1.0, domain, (64, 64, 64))


def cube_mesh(side: float = 1.0) -> TriangleMesh:
    """Closed unit cube scaled by ``side``, outward winding, 12 triangles."""
    v = side * np.array(
        [
            [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
            [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
        ],
        dtype=float,
    )
    t = np.array(
        [
            [0, 2, 1], [0, 3, 2],  # bottom (normal -z)
            [4, 5, 6], [4, 6, 7],  # top (+z)
            [0, 1, 5], [0, 5, 4],  # front (-y)
            [2, 3, 7], [2, 7, 6],  # back (+y)
            [1, 2, 6], [1, 6, 5],  # right (+x)
            [3, 0, 4], [3, 4, 7],  # left (-x)
        ]
    )
    return TriangleMesh(v, t)


def mesh_area_volume(mesh: TriangleMesh) -> tuple[float, float]:
    """Independent area/volume oracle used to cross-check the library."""
    area = 0.0
    volume = 0.0
    for i0, i1, i2 in mesh.triangles:
        p0, p1, p2 = mesh.vertices[i0], mesh.vertices[i1], mesh.vertices[i2]
        area += float(np.linalg.norm(np.cross(p1 - p0, p2 - p0))) / 2.0
        volume += float(p0 @ np.cross(p1, p2)) / 6.0
    return area, abs(volume)


def edge_count_map(mesh: TriangleMesh) -> dict[tuple[int, int], int]:
    """Brute-force undirected edge adjacency counts (dict-based oracle)."""
    counts: dict[tuple[int, int], int] = {}
    for a, b, c in mesh.triangles:
        for u, v in ((a, b), (b, c), (c, a)):
            key = (min(u, v), max(u, v))
            counts[key] = counts.get(key, 0) + 1
    return counts
