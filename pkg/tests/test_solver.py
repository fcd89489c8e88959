from __future__ import annotations

import numpy as np
import pytest

from tpms_forge.errors import NonMonotoneObjective, ResolutionTooCoarse, TargetUnreachable
from tpms_forge.fields import FieldSpec, SurfaceKind
from tpms_forge.grids import Domain, sample, transform_inside_negative
from tpms_forge.metrics import min_wall, relative_density
from tpms_forge.solver import (
    _bisect,
    solve_iso_for_density,
    solve_iso_on_grid,
    solve_thickness_on_grid,
)

DOMAIN = Domain((0, 0, 0), (50, 50, 50))


@pytest.fixture(scope="module")
def gyroid_grid():
    return sample(FieldSpec(SurfaceKind.GYROID, 50.0), DOMAIN, (96, 96, 96))


@pytest.fixture(scope="module")
def gyroid_sweep(gyroid_grid):
    return sweep_density_oracle(gyroid_grid, "network", 401)


def oracle_density(grid, style: str, t: float) -> float:
    """Independent weighted-count density at one iso level (brute force)."""
    nx, ny, nz = grid.dims
    w = np.ones((nz, ny, nx))
    for axis in range(3):
        sl = [slice(None)] * 3
        for end in (0, -1):
            sl[axis] = end
            w[tuple(sl)] *= 0.5
    total = (nx - 1) * (ny - 1) * (nz - 1)
    v = grid.view3d()
    field = v if style == "network" else np.abs(v)
    return float((w * (field - t <= 0)).sum() / total)


def sweep_density_oracle(grid, style: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Brute-force density(t) over a t grid."""
    if style == "network":
        ts = np.linspace(grid.values.min(), grid.values.max(), n)
    else:
        ts = np.linspace(1e-12, np.abs(grid.values).max(), n)
    return ts, np.array([oracle_density(grid, style, t) for t in ts])


class TestDensitySolve:
    def test_schwarz_p_half_at_zero(self):
        grid = sample(FieldSpec(SurfaceKind.SCHWARZ_P, 50.0), DOMAIN, (96, 96, 96))
        result = solve_iso_on_grid(grid, "network", 0.5)
        assert result.converged
        assert abs(result.t) <= 0.01 * (grid.values.max() - grid.values.min())
        assert result.achieved == pytest.approx(0.5, abs=0.005)

    @pytest.mark.parametrize("target", [0.2, 0.3, 0.5, 0.7])
    def test_gyroid_targets_vs_sweep_oracle(self, gyroid_grid, gyroid_sweep, target):
        result = solve_iso_on_grid(gyroid_grid, "network", target)
        assert result.converged
        assert result.achieved == pytest.approx(target, abs=0.005)
        # independent count at the returned level agrees with both the target
        # and the solver's own bookkeeping
        assert oracle_density(gyroid_grid, "network", result.t) == pytest.approx(
            result.achieved, abs=1e-12
        )
        assert oracle_density(gyroid_grid, "network", result.t) == pytest.approx(
            target, abs=0.005
        )
        # and the returned level sits inside the oracle's feasible band
        ts, densities = gyroid_sweep
        band = ts[np.abs(densities - target) <= 0.005]
        step = ts[1] - ts[0]
        assert band.size > 0
        assert band.min() - step <= result.t <= band.max() + step

    def test_achieved_reproducible_exactly(self, gyroid_grid):
        result = solve_iso_on_grid(gyroid_grid, "network", 0.3)
        remeasured = relative_density(
            transform_inside_negative(gyroid_grid, "network", result.t)
        )
        assert remeasured == result.achieved

    def test_sheet_target(self, gyroid_grid):
        result = solve_iso_on_grid(gyroid_grid, "sheet", 0.25)
        assert result.converged
        assert result.achieved == pytest.approx(0.25, abs=0.005)
        assert result.t > 0

    def test_target_above_one_unreachable(self, gyroid_grid):
        with pytest.raises(TargetUnreachable):
            solve_iso_on_grid(gyroid_grid, "network", 1.5)

    def test_target_zero_unreachable(self, gyroid_grid):
        with pytest.raises(TargetUnreachable):
            solve_iso_on_grid(gyroid_grid, "network", 0.0)

    def test_constant_field_unreachable(self, unit_domain):
        grid = sample(lambda x, y, z: 1.0 + 0 * x * y * z, unit_domain, (8, 8, 8))
        with pytest.raises(TargetUnreachable):
            solve_iso_on_grid(grid, "network", 0.5)

    def test_full_signature_entry_point(self):
        result = solve_iso_for_density(
            FieldSpec(SurfaceKind.GYROID, 50.0), DOMAIN, (48, 48, 48), "network", 0.4
        )
        assert result.converged
        assert result.achieved == pytest.approx(0.4, abs=0.005)

    def test_iteration_budget_respected(self, gyroid_grid):
        result = solve_iso_on_grid(gyroid_grid, "network", 0.3, tol=1e-12)
        assert result.iterations <= 60


class TestWallSolve:
    def test_wall_target_within_pitch(self):
        grid = sample(FieldSpec(SurfaceKind.GYROID, 50.0), DOMAIN, (128, 128, 128))
        pitch = min(grid.spacing)
        result = solve_thickness_on_grid(grid, 1.2)
        achieved = result.achieved
        assert 1.2 - pitch <= achieved <= 1.2 + pitch
        remeasured = min_wall(transform_inside_negative(grid, "sheet", result.t))
        assert remeasured == achieved

    def test_below_pitch_rejected(self):
        grid = sample(FieldSpec(SurfaceKind.GYROID, 50.0), DOMAIN, (32, 32, 32))
        with pytest.raises(ResolutionTooCoarse):
            solve_thickness_on_grid(grid, 1.0)

    def test_thicker_target_needs_larger_t(self):
        grid = sample(FieldSpec(SurfaceKind.GYROID, 50.0), DOMAIN, (96, 96, 96))
        small = solve_thickness_on_grid(grid, 1.5)
        big = solve_thickness_on_grid(grid, 3.0)
        assert big.t >= small.t
        assert big.achieved >= small.achieved


class TestBisectGuards:
    def test_non_monotone_objective_aborts(self):
        # endpoints bracket the target but the interior wiggles
        with pytest.raises(NonMonotoneObjective):
            _bisect(lambda t: t + 0.8 * np.sin(3 * np.pi * t), 0.0, 1.0, 0.5, 0.01)

    def test_bracket_contains_target(self):
        with pytest.raises(TargetUnreachable):
            _bisect(lambda t: t, 0.0, 1.0, 2.0, 0.01)

    def test_simple_root(self):
        result = _bisect(lambda t: t**3, -2.0, 2.0, 0.125, 1e-6)
        assert result.converged
        assert result.t == pytest.approx(0.5, abs=1e-2)
