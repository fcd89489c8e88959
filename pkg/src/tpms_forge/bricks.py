"""Assemble printable bricks: lattice solid clipped to the workshop envelope
(150 x 150 x 200 mm) with a solid adhesion base unioned underneath, then
meshed, capped, measured, and gated against fabrication constraints."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import EnvelopeExceeded, NotWatertight, SpecInvalid
from .fields import FieldSpec, SurfaceKind
from .grids import DEFAULT_VOXEL_CAP, Domain, VoxelGrid, sample, transform_inside_negative, union_min
from .mesher import TriangleMesh, cap_boundary, marching_cubes, weld_and_clean
from .metrics import (
    WARN_ENVELOPE,
    WARN_MULTI_COMPONENT,
    WARN_OVERHANG,
    WARN_THIN_WALL,
    MeshReport,
    measure,
)
from .solver import SolveResult, solve_iso_on_grid, solve_thickness_on_grid

ENVELOPE_MM = (150.0, 150.0, 200.0)
DEFAULT_BASE_HEIGHT_MM = 10.0
DEFAULT_NOZZLE_MM = 0.6
DEFAULT_MAX_AXIS_RESOLUTION = 128
DEFAULT_PERIOD_MM = 50.0
OVERHANG_WARN_FRACTION = 0.25
BBOX_TOL_MM = 1e-9


@dataclass(frozen=True)
class SolidMode:
    """How the scalar field becomes a solid: a fixed iso level, a density
    target, or a minimum-wall target (wall targets imply sheet style)."""

    style: str
    iso: Optional[float] = None
    target_density: Optional[float] = None
    target_wall: Optional[float] = None

    def __post_init__(self):
        if self.style not in ("network", "sheet"):
            raise SpecInvalid(f"style must be 'network' or 'sheet', got {self.style!r}")
        given = [
            v for v in (self.iso, self.target_density, self.target_wall) if v is not None
        ]
        if len(given) != 1:
            raise SpecInvalid(
                "exactly one of iso, target_density, target_wall must be set"
            )
        if self.iso is not None and not np.isfinite(self.iso):
            raise SpecInvalid(f"iso must be finite, got {self.iso}")
        if self.iso is not None and self.style == "sheet" and self.iso <= 0:
            raise SpecInvalid(f"sheet iso thickness must be > 0, got {self.iso}")
        if self.target_density is not None and not (0.0 < self.target_density < 1.0):
            raise SpecInvalid(f"target_density must be in (0, 1), got {self.target_density}")
        if self.target_wall is not None:
            if self.style != "sheet":
                raise SpecInvalid("target_wall requires sheet style")
            if not (np.isfinite(self.target_wall) and self.target_wall > 0):
                raise SpecInvalid(f"target_wall must be > 0, got {self.target_wall}")

    def to_dict(self) -> dict:
        return {
            "style": self.style,
            "iso": self.iso,
            "target_density": self.target_density,
            "target_wall": self.target_wall,
        }


@dataclass(frozen=True)
class BrickSpec:
    field: FieldSpec
    mode: SolidMode
    domain_size: tuple[float, float, float] = ENVELOPE_MM
    base_height: float = DEFAULT_BASE_HEIGHT_MM
    resolution: Optional[tuple[int, int, int]] = None
    nozzle_mm: float = DEFAULT_NOZZLE_MM
    allow_oversize: bool = False

    def __post_init__(self):
        size = tuple(float(v) for v in self.domain_size)
        object.__setattr__(self, "domain_size", size)
        if len(size) != 3 or not all(np.isfinite(v) and v > 0 for v in size):
            raise SpecInvalid(f"domain_size must be three positive mm values, got {size}")
        if not self.allow_oversize and any(
            s > e + BBOX_TOL_MM for s, e in zip(size, ENVELOPE_MM)
        ):
            raise EnvelopeExceeded(
                f"domain {size} exceeds the {ENVELOPE_MM} mm print envelope "
                "(set allow_oversize to override)"
            )
        if not (np.isfinite(self.base_height) and self.base_height >= 0):
            raise SpecInvalid(f"base_height must be >= 0, got {self.base_height}")
        if self.resolution is not None:
            res = tuple(int(v) for v in self.resolution)
            object.__setattr__(self, "resolution", res)
            if len(res) != 3 or any(v < 2 for v in res):
                raise SpecInvalid(f"resolution must be three integers >= 2, got {res}")
        if not (np.isfinite(self.nozzle_mm) and self.nozzle_mm > 0):
            raise SpecInvalid(f"nozzle_mm must be > 0, got {self.nozzle_mm}")

    def dims(self) -> tuple[int, int, int]:
        if self.resolution is not None:
            return self.resolution
        return default_resolution(self.domain_size)

    def domain(self) -> Domain:
        return Domain((0.0, 0.0, 0.0), self.domain_size)

    def to_dict(self) -> dict:
        return {
            "surface": {
                "kind": self.field.kind.value,
                "period_mm": list(self.field.period_length),
                "phase_offset": list(self.field.phase_offset),
                "strut_radius": self.field.strut_radius,
            },
            "mode": self.mode.to_dict(),
            "domain_mm": list(self.domain_size),
            "base_height_mm": self.base_height,
            "resolution": None if self.resolution is None else list(self.resolution),
            "nozzle_mm": self.nozzle_mm,
            "allow_oversize": self.allow_oversize,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "BrickSpec":
        if not isinstance(data, dict):
            raise SpecInvalid(f"spec must be a JSON object, got {type(data).__name__}")
        known = {
            "surface",
            "mode",
            "domain_mm",
            "base_height_mm",
            "resolution",
            "nozzle_mm",
            "allow_oversize",
        }
        unknown = set(data) - known
        if unknown:
            raise SpecInvalid(f"unknown spec fields: {sorted(unknown)}")
        surface = data.get("surface")
        if not isinstance(surface, dict) or "kind" not in surface:
            raise SpecInvalid("spec needs a 'surface' object with a 'kind'")
        try:
            kind = SurfaceKind(surface["kind"])
        except ValueError:
            raise SpecInvalid(
                f"unknown surface kind {surface['kind']!r}; see list-surfaces"
            ) from None
        try:
            field = FieldSpec(
                kind,
                surface.get("period_mm", DEFAULT_PERIOD_MM),
                _triple(surface.get("phase_offset", (0.0, 0.0, 0.0)), "phase_offset"),
                float(surface.get("strut_radius", 0.2)),
            )
            mode_data = data.get("mode") or {"style": "network", "iso": 0.0}
            mode = SolidMode(
                style=mode_data.get("style", "network"),
                iso=_opt_float(mode_data.get("iso")),
                target_density=_opt_float(mode_data.get("target_density")),
                target_wall=_opt_float(mode_data.get("target_wall")),
            )
            return cls(
                field=field,
                mode=mode,
                domain_size=_triple(data.get("domain_mm", ENVELOPE_MM), "domain_mm"),
                base_height=float(data.get("base_height_mm", DEFAULT_BASE_HEIGHT_MM)),
                resolution=(
                    None
                    if data.get("resolution") is None
                    else tuple(int(v) for v in data["resolution"])
                ),
                nozzle_mm=float(data.get("nozzle_mm", DEFAULT_NOZZLE_MM)),
                allow_oversize=bool(data.get("allow_oversize", False)),
            )
        except (TypeError, ValueError) as exc:
            raise SpecInvalid(f"malformed spec: {exc}") from None

    def canonical_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))

    def job_id(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:16]


def _triple(value, name: str) -> tuple[float, float, float]:
    if isinstance(value, (int, float)):
        return (float(value),) * 3
    seq = tuple(float(v) for v in value)
    if len(seq) != 3:
        raise SpecInvalid(f"{name} must be a scalar or 3-vector, got {value!r}")
    return seq


def _opt_float(v) -> Optional[float]:
    return None if v is None else float(v)


def default_resolution(
    domain_size, max_axis: int = DEFAULT_MAX_AXIS_RESOLUTION
) -> tuple[int, int, int]:
    longest = max(domain_size)
    return tuple(max(2, round(max_axis * s / longest)) for s in domain_size)


@dataclass
class BrickResult:
    mesh: TriangleMesh
    report: MeshReport
    spec_echo: BrickSpec
    solve: Optional[SolveResult] = None


def base_plate_grid(grid: VoxelGrid, base_height: float) -> VoxelGrid:
    """Inside-negative slab z <= base_height on the same lattice."""
    nx, ny, nz = grid.dims
    z = grid.axis_coords(2)
    values = np.broadcast_to(
        (z - base_height)[:, None, None], (nz, ny, nx)
    ).reshape(-1)
    return grid.with_values(values)


def build_brick(spec: BrickSpec, cap: int = DEFAULT_VOXEL_CAP) -> BrickResult:
    """Full pipeline: (solve) -> sample -> solidify -> union base ->
    marching cubes -> cap -> weld -> measure -> constraint warnings.

    Raises NotWatertight rather than returning an open mesh."""
    grid = sample(spec.field, spec.domain(), spec.dims(), cap=cap)

    solve: Optional[SolveResult] = None
    mode = spec.mode
    if mode.iso is not None:
        t = mode.iso
    elif mode.target_density is not None:
        solve = solve_iso_on_grid(grid, mode.style, mode.target_density)
        t = solve.t
    else:
        solve = solve_thickness_on_grid(grid, mode.target_wall)
        t = solve.t

    lattice = transform_inside_negative(grid, mode.style, t)
    solid = lattice
    if spec.base_height > 0:
        solid = union_min(lattice, base_plate_grid(grid, spec.base_height))

    mesh = weld_and_clean(cap_boundary(solid, marching_cubes(solid)))
    report = measure(mesh, grid=solid, wall_grid=lattice)
    if len(mesh.triangles) > 0 and not report.watertight:
        raise NotWatertight(
            f"pipeline produced an open mesh ({len(mesh.triangles)} triangles); "
            "this is an internal failure, please report the spec"
        )

    result = BrickResult(mesh=mesh, report=report, spec_echo=spec, solve=solve)
    report.warnings.extend(validate_constraints(result, spec))
    return result


def validate_constraints(result: BrickResult, spec: BrickSpec) -> list[str]:
    """Coded fabrication warnings for a built brick."""
    warnings = []
    report = result.report
    if report.min_wall_mm is not None and report.min_wall_mm < 2.0 * spec.nozzle_mm:
        warnings.append(WARN_THIN_WALL)
    if report.overhang_area_fraction > OVERHANG_WARN_FRACTION:
        warnings.append(WARN_OVERHANG)
    if report.component_count > 1:
        warnings.append(WARN_MULTI_COMPONENT)
    if len(result.mesh.vertices):
        lo, hi = result.mesh.bbox
        if (lo < -BBOX_TOL_MM).any() or (
            hi > np.asarray(spec.domain_size) + BBOX_TOL_MM
        ).any():
            warnings.append(WARN_ENVELOPE)
    return warnings
