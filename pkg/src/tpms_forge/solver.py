"""Iso-level root finding: hit a target relative density (material budget)
or a target minimum wall by bisecting the monotone solidification knob.

The grid is sampled once; each iteration only shifts values, so a solve
costs O(iterations x sample count) with no field re-evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import NonMonotoneObjective, ResolutionTooCoarse, TargetUnreachable
from .fields import FieldSpec
from .grids import DEFAULT_VOXEL_CAP, Domain, VoxelGrid, sample, transform_inside_negative
from .metrics import min_wall, relative_density

MAX_ITERATIONS = 60
DEFAULT_DENSITY_TOL = 0.005


@dataclass(frozen=True)
class SolveResult:
    t: float
    achieved: float
    iterations: int
    converged: bool

    def to_dict(self) -> dict:
        return {
            "t": self.t,
            "achieved": self.achieved,
            "iterations": self.iterations,
            "converged": self.converged,
        }


def _bisect(
    objective: Callable[[float], float],
    lo: float,
    hi: float,
    target: float,
    tol: float,
) -> SolveResult:
    """Bisect a non-decreasing objective; returns the best point seen.

    Ties prefer the >= target side so constraint-style targets (minimum wall)
    end up satisfied rather than barely missed."""
    f_lo, f_hi = objective(lo), objective(hi)
    if not (f_lo <= target <= f_hi):
        raise TargetUnreachable(
            f"target {target} outside attainable range [{f_lo:.6g}, {f_hi:.6g}]"
        )

    sweep = np.linspace(lo, hi, 9)
    values = [objective(t) for t in sweep]
    if any(b < a - 1e-12 for a, b in zip(values, values[1:])):
        raise NonMonotoneObjective(
            f"objective not non-decreasing on pre-check sweep: {values}"
        )

    best_t, best_f = hi, f_hi
    iterations = 0
    for _ in range(MAX_ITERATIONS):
        iterations += 1
        mid = 0.5 * (lo + hi)
        f_mid = objective(mid)
        better = abs(f_mid - target) < abs(best_f - target) or (
            abs(f_mid - target) == abs(best_f - target) and f_mid >= target > best_f
        )
        if better:
            best_t, best_f = mid, f_mid
        if abs(f_mid - target) <= tol and f_mid >= target:
            return SolveResult(mid, f_mid, iterations, True)
        if f_mid < target:
            lo = mid
        else:
            hi = mid
    converged = abs(best_f - target) <= tol
    return SolveResult(best_t, best_f, iterations, converged)


def density_objective(grid: VoxelGrid, style: str) -> Callable[[float], float]:
    """density(t) exactly as metrics.relative_density sees the transformed
    grid, so a returned t reproduces its achieved value when re-measured."""

    def objective(t: float) -> float:
        return relative_density(transform_inside_negative(grid, style, t))

    return objective


def solve_iso_on_grid(
    grid: VoxelGrid,
    style: str,
    target: float,
    tol: float = DEFAULT_DENSITY_TOL,
) -> SolveResult:
    """Find t with relative_density(transform(grid, style, t)) ~ target."""
    if not (0.0 < target < 1.0):
        raise TargetUnreachable(f"target density must be in (0, 1), got {target}")
    if tol <= 0:
        raise ValueError(f"tol must be > 0, got {tol}")
    if style == "network":
        lo, hi = float(grid.values.min()), float(grid.values.max())
    elif style == "sheet":
        hi = float(np.abs(grid.values).max())
        lo = hi * 2.0**-52
    else:
        raise ValueError(f"unknown solid style {style!r}")
    if lo >= hi:
        raise TargetUnreachable("field is constant on this grid; density cannot be steered")
    return _bisect(density_objective(grid, style), lo, hi, target, tol)


def solve_iso_for_density(
    field: FieldSpec,
    domain: Domain,
    dims,
    style: str,
    target: float,
    tol: float = DEFAULT_DENSITY_TOL,
    cap: int = DEFAULT_VOXEL_CAP,
) -> SolveResult:
    return solve_iso_on_grid(sample(field, domain, dims, cap=cap), style, target, tol)


def solve_thickness_on_grid(
    grid: VoxelGrid,
    target_wall: float,
    tol: Optional[float] = None,
) -> SolveResult:
    """Find sheet thickness t whose eroded wall estimate reaches target_wall mm."""
    pitch = min(grid.spacing)
    if tol is None:
        tol = pitch
    if target_wall < 2.0 * pitch:
        raise ResolutionTooCoarse(
            f"target wall {target_wall} mm below 2 x voxel pitch {pitch:.4g} mm; "
            "raise the resolution or the target"
        )

    def objective(t: float) -> float:
        return min_wall(transform_inside_negative(grid, "sheet", t))

    hi = float(np.abs(grid.values).max())
    lo = hi * 2.0**-52
    return _bisect(objective, lo, hi, target_wall, tol)


def solve_thickness_for_wall(
    field: FieldSpec,
    domain: Domain,
    dims,
    target_wall: float,
    tol: Optional[float] = None,
    cap: int = DEFAULT_VOXEL_CAP,
) -> SolveResult:
    return solve_thickness_on_grid(sample(field, domain, dims, cap=cap), target_wall, tol)
