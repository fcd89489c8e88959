"""Regular sampling of scalar fields over rectangular domains.

Grids use the inside-negative convention throughout: a point is solid when
the (transformed) field value is <= 0.  Values are stored flat, x-fastest,
with samples on the domain corners inclusive.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import CapExceeded, GridMismatch, InvalidThickness, NonFiniteField, SpecInvalid
from .fields import FieldSpec, evaluate_batch

DEFAULT_VOXEL_CAP = 512**3


@dataclass(frozen=True)
class Domain:
    min_corner: tuple[float, float, float]
    max_corner: tuple[float, float, float]

    def __post_init__(self):
        lo = tuple(float(v) for v in self.min_corner)
        hi = tuple(float(v) for v in self.max_corner)
        object.__setattr__(self, "min_corner", lo)
        object.__setattr__(self, "max_corner", hi)
        if len(lo) != 3 or len(hi) != 3:
            raise SpecInvalid("domain corners must be 3-vectors")
        if not all(np.isfinite(lo)) or not all(np.isfinite(hi)):
            raise SpecInvalid("domain corners must be finite")
        if not all(h > l for l, h in zip(lo, hi)):
            raise SpecInvalid(f"max_corner must exceed min_corner componentwise: {lo} vs {hi}")

    @property
    def size(self) -> tuple[float, float, float]:
        return tuple(h - l for l, h in zip(self.min_corner, self.max_corner))

    @property
    def diagonal(self) -> float:
        return float(np.linalg.norm(self.size))


@dataclass(frozen=True)
class VoxelGrid:
    """dims[i] samples per axis; values flat with x varying fastest."""

    dims: tuple[int, int, int]
    origin: tuple[float, float, float]
    spacing: tuple[float, float, float]
    values: np.ndarray

    def __post_init__(self):
        dims = tuple(int(d) for d in self.dims)
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "origin", tuple(float(v) for v in self.origin))
        object.__setattr__(self, "spacing", tuple(float(v) for v in self.spacing))
        if any(d < 2 for d in dims):
            raise SpecInvalid(f"dims must be >= 2 per axis, got {dims}")
        if any(s <= 0 for s in self.spacing):
            raise SpecInvalid(f"spacing must be > 0, got {self.spacing}")
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size != dims[0] * dims[1] * dims[2]:
            raise SpecInvalid(
                f"values length {values.size} != product of dims {dims}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    def view3d(self) -> np.ndarray:
        """(nz, ny, nx) view of the flat array; view3d()[k, j, i]."""
        nx, ny, nz = self.dims
        return self.values.reshape(nz, ny, nx)

    def axis_coords(self, axis: int) -> np.ndarray:
        return self.origin[axis] + self.spacing[axis] * np.arange(self.dims[axis], dtype=float)

    @property
    def max_corner(self) -> tuple[float, float, float]:
        return tuple(
            o + s * (d - 1) for o, s, d in zip(self.origin, self.spacing, self.dims)
        )

    def with_values(self, values: np.ndarray) -> "VoxelGrid":
        return VoxelGrid(self.dims, self.origin, self.spacing, values)


def sample(field, domain: Domain, dims, cap: int = DEFAULT_VOXEL_CAP) -> VoxelGrid:
    """Evaluate ``field`` on a dims[0] x dims[1] x dims[2] lattice over ``domain``.

    ``field`` is a FieldSpec or a callable f(x, y, z) accepting broadcastable
    mm-coordinate arrays.  Raises CapExceeded when product(dims) > cap and
    NonFiniteField when any sample is not finite.
    """
    dims = tuple(int(d) for d in dims)
    if len(dims) != 3 or any(d < 2 for d in dims):
        raise SpecInvalid(f"dims must be three integers >= 2, got {dims}")
    count = dims[0] * dims[1] * dims[2]
    if count > cap:
        raise CapExceeded(f"{dims[0]}x{dims[1]}x{dims[2]} = {count} samples exceeds cap {cap}")

    spacing = tuple(
        (hi - lo) / (n - 1) for lo, hi, n in zip(domain.min_corner, domain.max_corner, dims)
    )
    xs = domain.min_corner[0] + spacing[0] * np.arange(dims[0], dtype=float)
    ys = domain.min_corner[1] + spacing[1] * np.arange(dims[1], dtype=float)
    zs = domain.min_corner[2] + spacing[2] * np.arange(dims[2], dtype=float)

    fn = (lambda x, y, z: evaluate_batch(field, x, y, z)) if isinstance(field, FieldSpec) else field
    values = np.asarray(
        fn(xs[None, None, :], ys[None, :, None], zs[:, None, None]), dtype=float
    )
    values = np.broadcast_to(values, (dims[2], dims[1], dims[0])).reshape(-1).copy()
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise NonFiniteField(f"field returned a non-finite value at flat sample index {bad}")
    return VoxelGrid(dims, domain.min_corner, spacing, values)


def transform_inside_negative(grid: VoxelGrid, style: str, t: float) -> VoxelGrid:
    """Solidify: network keeps F <= t, sheet keeps |F| <= t (t > 0)."""
    t = float(t)
    if not np.isfinite(t):
        raise InvalidThickness(f"iso level must be finite, got {t}")
    if style == "network":
        return grid.with_values(grid.values - t)
    if style == "sheet":
        if t <= 0:
            raise InvalidThickness(f"sheet thickness must be > 0, got {t}")
        return grid.with_values(np.abs(grid.values) - t)
    raise SpecInvalid(f"unknown solid style {style!r}, expected 'network' or 'sheet'")


def union_min(a: VoxelGrid, b: VoxelGrid) -> VoxelGrid:
    """Componentwise min: the union of two inside-negative solids."""
    if a.dims != b.dims or a.origin != b.origin or a.spacing != b.spacing:
        raise GridMismatch(
            f"grids differ: dims {a.dims}/{b.dims}, origin {a.origin}/{b.origin}, "
            f"spacing {a.spacing}/{b.spacing}"
        )
    return a.with_values(np.minimum(a.values, b.values))
