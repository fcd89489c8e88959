"""Command-line surface: list-surfaces, gen, solve, inspect, serve.

Exit codes are a stable contract: 0 success, 1 error, 2 constraint warnings
under --strict.  The config file is the BrickSpec JSON itself; flags override
file fields so one schema serves CLI, files, and the HTTP API.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .bricks import BrickSpec, build_brick
from .errors import ForgeError, MalformedMesh
from .fields import surface_catalog
from .grids import Domain, sample
from .io_export import read_mesh_file, write_mesh_file, write_report_json
from .metrics import measure
from .service import ENV_MAX_VOXELS, create_app, resolve_cap
from .solver import solve_iso_on_grid, solve_thickness_on_grid

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_STRICT = 2


def _parse_triple(text: str, kind=float):
    parts = text.split(",")
    if len(parts) == 1:
        return kind(parts[0])
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected one value or three comma-separated: {text!r}")
    return tuple(kind(p) for p in parts)


def _spec_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", type=Path, help="BrickSpec JSON file; flags override its fields")
    parser.add_argument("--surface", help="surface kind (see list-surfaces)")
    parser.add_argument("--period", type=lambda s: _parse_triple(s, float),
                        help="period length in mm (scalar or x,y,z)")
    parser.add_argument("--offset", type=lambda s: _parse_triple(s, float),
                        help="phase offset in cell units (scalar or x,y,z)")
    parser.add_argument("--strut-radius", type=float, help="skeletal strut radius as fraction of period")
    parser.add_argument("--mode", choices=["network", "sheet"], help="solidification style")
    parser.add_argument("--iso", type=float, help="fixed iso level / sheet thickness")
    parser.add_argument("--target-density", type=float, help="solve iso level for this relative density")
    parser.add_argument("--target-wall", type=float, help="solve sheet thickness for this min wall (mm)")
    parser.add_argument("--domain", type=lambda s: _parse_triple(s, float),
                        help="domain size in mm (scalar or x,y,z; default 150,150,200)")
    parser.add_argument("--base-height", type=float, help="adhesion base height in mm (default 10)")
    parser.add_argument("--resolution", type=lambda s: _parse_triple(s, int),
                        help="samples per axis (scalar or x,y,z; default <=128 on longest axis)")
    parser.add_argument("--nozzle", type=float, help="nozzle diameter in mm (default 0.6)")
    parser.add_argument("--allow-oversize", action="store_true", default=None,
                        help="permit domains beyond the 150x150x200 mm envelope")


def _spec_from_args(args: argparse.Namespace) -> BrickSpec:
    data: dict = {}
    if args.config:
        data = json.loads(Path(args.config).read_text())
        if not isinstance(data, dict):
            raise MalformedMesh(f"config {args.config} is not a JSON object")

    surface = dict(data.get("surface", {}))
    if args.surface is not None:
        surface["kind"] = args.surface
    if args.period is not None:
        surface["period_mm"] = list(args.period) if isinstance(args.period, tuple) else args.period
    if args.offset is not None:
        surface["phase_offset"] = list(args.offset) if isinstance(args.offset, tuple) else [args.offset] * 3
    if args.strut_radius is not None:
        surface["strut_radius"] = args.strut_radius
    if surface:
        surface.setdefault("kind", "gyroid")
        data["surface"] = surface

    if any(v is not None for v in (args.mode, args.iso, args.target_density, args.target_wall)):
        mode = dict(data.get("mode", {}))
        if args.mode is not None:
            mode["style"] = args.mode
        mode.setdefault("style", "network")
        if args.iso is not None or args.target_density is not None or args.target_wall is not None:
            mode.pop("iso", None)
            mode.pop("target_density", None)
            mode.pop("target_wall", None)
        if args.iso is not None:
            mode["iso"] = args.iso
        if args.target_density is not None:
            mode["target_density"] = args.target_density
        if args.target_wall is not None:
            mode["target_wall"] = args.target_wall
        data["mode"] = mode

    if args.domain is not None:
        data["domain_mm"] = list(args.domain) if isinstance(args.domain, tuple) else [args.domain] * 3
    if args.base_height is not None:
        data["base_height_mm"] = args.base_height
    if args.resolution is not None:
        data["resolution"] = (
            list(args.resolution) if isinstance(args.resolution, tuple) else [args.resolution] * 3
        )
    if args.nozzle is not None:
        data["nozzle_mm"] = args.nozzle
    if args.allow_oversize:
        data["allow_oversize"] = True

    data.setdefault("surface", {"kind": "gyroid"})
    return BrickSpec.from_dict(data)


def cmd_list_surfaces(args: argparse.Namespace) -> int:
    rows = [
        {
            "kind": info.kind.value,
            "triply_periodic": info.triply_periodic,
            "symmetry": info.symmetry.value,
            "formula": info.formula,
        }
        for info in surface_catalog()
    ]
    if args.json:
        print(json.dumps(rows, indent=2))
    else:
        width = max(len(r["kind"]) for r in rows)
        for r in rows:
            periodic = "triply periodic" if r["triply_periodic"] else "domain-bounded"
            print(f"{r['kind']:<{width}}  {periodic:<15}  {r['symmetry']:<20}  {r['formula']}")
    return EXIT_OK


def cmd_gen(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    cap = resolve_cap()
    result = build_brick(spec, cap=cap)

    out: Path = args.output
    write_mesh_file(result.mesh, out, args.format)
    sidecar = write_report_json(
        result.report,
        out,
        extra={
            "job_id": spec.job_id(),
            "spec": spec.to_dict(),
            "solve": None if result.solve is None else result.solve.to_dict(),
        },
    )
    report = result.report
    print(f"wrote {out} ({len(result.mesh.triangles)} triangles) and {sidecar}")
    print(
        f"area {report.surface_area:.1f} mm^2 | volume {report.enclosed_volume:.1f} mm^3 "
        f"| density {report.relative_density:.3f} | min wall {report.min_wall_mm:.2f} mm"
    )
    for code in report.warnings:
        print(f"{code}: constraint warning", file=sys.stderr)
    if args.strict and report.warnings:
        return EXIT_STRICT
    return EXIT_OK


def cmd_solve(args: argparse.Namespace) -> int:
    spec = _spec_from_args(args)
    mode = spec.mode
    if mode.iso is not None:
        print("nothing to solve: spec pins a fixed iso level", file=sys.stderr)
        return EXIT_ERROR
    grid = sample(spec.field, spec.domain(), spec.dims(), cap=resolve_cap())
    if mode.target_density is not None:
        result = solve_iso_on_grid(grid, mode.style, mode.target_density)
    else:
        result = solve_thickness_on_grid(grid, mode.target_wall)
    print(json.dumps(result.to_dict(), indent=2))
    return EXIT_OK if result.converged else EXIT_ERROR


def cmd_inspect(args: argparse.Namespace) -> int:
    mesh = read_mesh_file(args.mesh)
    report = measure(mesh)
    print(json.dumps(report.to_dict(), indent=2))
    return EXIT_OK


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    app = create_app()
    uvicorn.run(app, host=args.bind, port=args.port, log_level="info")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tpms-forge",
        description="Generate 3D-printable triply periodic minimal surface bricks.",
        epilog=f"The {ENV_MAX_VOXELS} environment variable overrides the voxel cap.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("list-surfaces", help="list the 16 surface families")
    p.add_argument("--json", action="store_true", help="emit JSON instead of a table")
    p.set_defaults(fn=cmd_list_surfaces)

    p = sub.add_parser("gen", help="build a brick and write mesh + report")
    _spec_arguments(p)
    p.add_argument("-o", "--output", type=Path, required=True, help="output mesh path")
    p.add_argument("--format", choices=["stl_binary", "stl_ascii", "obj"],
                   help="mesh format (default: by extension, binary STL)")
    p.add_argument("--strict", action="store_true",
                   help="exit with code 2 when constraint warnings fire")
    p.set_defaults(fn=cmd_gen)

    p = sub.add_parser("solve", help="solve the iso level for a density or wall target")
    _spec_arguments(p)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("inspect", help="measure an STL/OBJ file and print its report")
    p.add_argument("mesh", type=Path)
    p.set_defaults(fn=cmd_inspect)

    p = sub.add_parser("serve", help="run the local HTTP service (viewer backend)")
    p.add_argument("--port", type=int, default=8731)
    p.add_argument("--bind", default="127.0.0.1")
    p.set_defaults(fn=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ForgeError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_ERROR
    except (OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"ERROR: {exc}", file=sys.stderr)
        return EXIT_ERROR


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
