from __future__ import annotations

import json

import numpy as np
import pytest

from conftest import cube_mesh
from tpms_forge.cli import main
from tpms_forge.io_export import read_stl_binary, write_mesh_file


def run(capsys, *argv) -> tuple[int, str, str]:
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestListSurfaces:
    def test_plain_lists_16_rows(self, capsys):
        code, out, _ = run(capsys, "list-surfaces")
        assert code == 0
        assert len(out.strip().splitlines()) == 16

    def test_json_array_of_16(self, capsys):
        code, out, _ = run(capsys, "list-surfaces", "--json")
        assert code == 0
        rows = json.loads(out)
        assert len(rows) == 16
        assert {r["kind"] for r in rows} == {
            "gyroid", "diamond", "schwarz_p", "neovius", "lidinoid", "split_p",
            "d_prime", "double_gyroid", "iwp", "pw_hybrid", "scherk_1", "scherk_2",
            "skeletal_1", "skeletal_2", "skeletal_3", "skeletal_4",
        }

    def test_unknown_flag_usage_error(self):
        with pytest.raises(SystemExit) as exc:
            main(["list-surfaces", "--frobnicate"])
        assert exc.value.code != 0


class TestGen:
    def test_gen_writes_mesh_and_report(self, capsys, tmp_path):
        out = tmp_path / "brick.stl"
        code, stdout, _ = run(
            capsys, "gen", "--surface", "gyroid", "--period", "50",
            "--mode", "network", "--iso", "0.0",
            "--domain", "50", "--resolution", "48", "--base-height", "5",
            "-o", str(out),
        )
        assert code == 0
        assert out.exists()
        sidecar = tmp_path / "brick.report.json"
        assert sidecar.exists()
        report = json.loads(sidecar.read_text())
        assert report["watertight"] is True
        assert "job_id" in report and "spec" in report
        mesh = read_stl_binary(out.read_bytes())
        assert len(mesh.triangles) > 0

    def test_gen_density_target(self, capsys, tmp_path):
        out = tmp_path / "p.stl"
        code, _, _ = run(
            capsys, "gen", "--surface", "schwarz_p", "--period", "50",
            "--target-density", "0.5",
            "--domain", "50", "--resolution", "64", "--base-height", "0",
            "-o", str(out),
        )
        assert code == 0
        report = json.loads((tmp_path / "p.report.json").read_text())
        assert abs(report["relative_density"] - 0.5) <= 0.005

    def test_gen_strict_multi_component_exit_2(self, capsys, tmp_path):
        out = tmp_path / "split.stl"
        code, _, err = run(
            capsys, "gen", "--surface", "gyroid", "--period", "400",
            "--mode", "sheet", "--iso", "0.15", "--base-height", "0",
            "--resolution", "48,48,64", "--strict",
            "-o", str(out),
        )
        assert code == 2
        assert "MULTI_COMPONENT" in err

    def test_gen_without_strict_warnings_exit_0(self, capsys, tmp_path):
        out = tmp_path / "split.stl"
        code, _, err = run(
            capsys, "gen", "--surface", "gyroid", "--period", "400",
            "--mode", "sheet", "--iso", "0.15", "--base-height", "0",
            "--resolution", "48,48,64",
            "-o", str(out),
        )
        assert code == 0
        assert "MULTI_COMPONENT" in err

    def test_config_file_with_flag_override(self, capsys, tmp_path):
        config = tmp_path / "spec.json"
        config.write_text(json.dumps({
            "surface": {"kind": "gyroid", "period_mm": 25},
            "mode": {"style": "network", "iso": 0.0},
            "domain_mm": [50, 50, 50],
            "resolution": [32, 32, 32],
            "base_height_mm": 5,
        }))
        out = tmp_path / "c.stl"
        code, _, _ = run(
            capsys, "gen", "--config", str(config), "--surface", "schwarz_p",
            "-o", str(out),
        )
        assert code == 0
        report = json.loads((tmp_path / "c.report.json").read_text())
        assert report["spec"]["surface"]["kind"] == "schwarz_p"
        assert report["spec"]["resolution"] == [32, 32, 32]

    def test_bad_surface_exit_1(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "gen", "--surface", "moebius", "-o", str(tmp_path / "x.stl")
        )
        assert code == 1
        assert "SPEC_INVALID" in err

    def test_oversize_domain_needs_flag(self, capsys, tmp_path):
        code, _, err = run(
            capsys, "gen", "--surface", "gyroid", "--domain", "300,150,200",
            "--resolution", "24", "-o", str(tmp_path / "x.stl"),
        )
        assert code == 1
        assert "ENVELOPE_EXCEEDED" in err

    def test_obj_format(self, capsys, tmp_path):
        out = tmp_path / "brick.obj"
        code, _, _ = run(
            capsys, "gen", "--surface", "gyroid", "--period", "25",
            "--mode", "network", "--iso", "0.0",
            "--domain", "50", "--resolution", "24", "--base-height", "5",
            "-o", str(out),
        )
        assert code == 0
        assert out.read_text().startswith("v ")


class TestSolve:
    def test_solve_prints_result(self, capsys):
        code, out, _ = run(
            capsys, "solve", "--surface", "gyroid", "--period", "50",
            "--target-density", "0.3", "--domain", "50", "--resolution", "48",
        )
        assert code == 0
        result = json.loads(out)
        assert result["converged"] is True
        assert abs(result["achieved"] - 0.3) <= 0.005

    def test_solve_requires_target(self, capsys):
        code, _, err = run(
            capsys, "solve", "--surface", "gyroid", "--iso", "0.0",
            "--domain", "50", "--resolution", "24",
        )
        assert code == 1
        assert "nothing to solve" in err


class TestInspect:
    def test_cube_stl(self, capsys, tmp_path):
        path = tmp_path / "cube.stl"
        write_mesh_file(cube_mesh(2.0), path)
        code, out, _ = run(capsys, "inspect", str(path))
        assert code == 0
        report = json.loads(out)
        assert report["watertight"] is True
        assert report["surface_area"] == pytest.approx(6 * 4.0, rel=1e-6)
        assert report["relative_density"] is None
        assert report["min_wall_mm"] is None

    def test_open_mesh_not_watertight(self, capsys, tmp_path):
        mesh = cube_mesh()
        from tpms_forge.mesher import TriangleMesh

        open_mesh = TriangleMesh(mesh.vertices, mesh.triangles[:-1])
        path = tmp_path / "open.stl"
        write_mesh_file(open_mesh, path)
        code, out, _ = run(capsys, "inspect", str(path))
        assert code == 0
        assert json.loads(out)["watertight"] is False

    def test_garbage_exit_1(self, capsys, tmp_path):
        path = tmp_path / "garbage.stl"
        path.write_bytes(b"\x00\x01 nonsense")
        code, _, err = run(capsys, "inspect", str(path))
        assert code == 1
        assert "MALFORMED" in err


class TestEnvCap:
    def test_env_cap_enforced(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("TPMS_FORGE_MAX_VOXELS", "1000")
        code, _, err = run(
            capsys, "gen", "--surface", "gyroid", "--domain", "50",
            "--resolution", "48", "-o", str(tmp_path / "x.stl"),
        )
        assert code == 1
        assert "CAP_EXCEEDED" in err
