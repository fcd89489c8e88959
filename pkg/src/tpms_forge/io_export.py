"""Mesh interchange: binary/ASCII STL and OBJ writers, strict readers for
round-trip testing and inspection, and the report JSON sidecar."""

from __future__ import annotations

import json
from pathlib import Path
from typing import BinaryIO, TextIO

import numpy as np

from .errors import MalformedMesh, SinkError
from .mesher import TriangleMesh
from .metrics import MeshReport

STL_HEADER = b"tpms-forge".ljust(80, b"\0")
_STL_TRI_DTYPE = np.dtype(
    [
        ("normal", "<f4", 3),
        ("v0", "<f4", 3),
        ("v1", "<f4", 3),
        ("v2", "<f4", 3),
        ("attr", "<u2"),
    ]
)
assert _STL_TRI_DTYPE.itemsize == 50


def _facet_normals(mesh: TriangleMesh) -> np.ndarray:
    p = mesh.vertices[mesh.triangles]
    n = np.cross(p[:, 1] - p[:, 0], p[:, 2] - p[:, 0])
    length = np.linalg.norm(n, axis=1, keepdims=True)
    return np.divide(n, length, out=np.zeros_like(n), where=length > 0)


def write_stl_binary(mesh: TriangleMesh, sink: BinaryIO) -> int:
    """80-byte header, little-endian u32 count, then 50 bytes per facet
    (normal, three vertices as f32, zero attribute).  Returns bytes written."""
    count = len(mesh.triangles)
    record = np.zeros(count, dtype=_STL_TRI_DTYPE)
    if count:
        p = mesh.vertices[mesh.triangles].astype("<f4")
        record["normal"] = _facet_normals(mesh).astype("<f4")
        record["v0"], record["v1"], record["v2"] = p[:, 0], p[:, 1], p[:, 2]
    try:
        sink.write(STL_HEADER)
        sink.write(np.uint32(count).astype("<u4").tobytes())
        sink.write(record.tobytes())
    except OSError as exc:
        raise SinkError(f"write failed: {exc}") from exc
    return 84 + 50 * count


def stl_bytes(mesh: TriangleMesh) -> bytes:
    import io

    buf = io.BytesIO()
    write_stl_binary(mesh, buf)
    return buf.getvalue()


def read_stl_binary(source: BinaryIO | bytes) -> TriangleMesh:
    """Strict parser: the stream must be exactly 84 + 50*count bytes.
    Vertices are welded at exact float equality; triangle order preserved."""
    data = source if isinstance(source, bytes) else source.read()
    if len(data) < 84:
        raise MalformedMesh(f"binary STL needs at least 84 bytes, got {len(data)}")
    count = int(np.frombuffer(data[80:84], dtype="<u4")[0])
    expected = 84 + 50 * count
    if len(data) != expected:
        raise MalformedMesh(
            f"length mismatch: header declares {count} triangles "
            f"({expected} bytes) but stream has {len(data)} bytes"
        )
    if count == 0:
        return TriangleMesh.empty()
    record = np.frombuffer(data[84:], dtype=_STL_TRI_DTYPE)
    corners = np.stack([record["v0"], record["v1"], record["v2"]], axis=1)
    flat = corners.reshape(-1, 3)
    uniq, first_idx, inverse = np.unique(flat, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first_idx, kind="stable")
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    vertices = flat[first_idx[order]].astype(np.float64)
    triangles = rank[inverse.reshape(-1)].reshape(-1, 3)
    return TriangleMesh(vertices, triangles)


def write_stl_ascii(mesh: TriangleMesh, sink: TextIO) -> int:
    """Plain-text STL; returns the number of lines written."""
    normals = _facet_normals(mesh)
    p = mesh.vertices[mesh.triangles]
    lines = 2
    try:
        sink.write("solid tpms-forge\n")
        for tri in range(len(mesh.triangles)):
            n = normals[tri]
            sink.write(f"  facet normal {n[0]:.9g} {n[1]:.9g} {n[2]:.9g}\n")
            sink.write("    outer loop\n")
            for v in p[tri]:
                sink.write(f"      vertex {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
            sink.write("    endloop\n")
            sink.write("  endfacet\n")
            lines += 7
        sink.write("endsolid tpms-forge\n")
    except OSError as exc:
        raise SinkError(f"write failed: {exc}") from exc
    return lines


def read_stl_ascii(text: str) -> TriangleMesh:
    coords = []
    for line in text.splitlines():
        parts = line.split()
        if parts and parts[0] == "vertex":
            if len(parts) != 4:
                raise MalformedMesh(f"bad vertex line: {line.strip()!r}")
            coords.append([float(v) for v in parts[1:4]])
    if len(coords) % 3 != 0:
        raise MalformedMesh(f"vertex count {len(coords)} not a multiple of 3")
    if not coords:
        return TriangleMesh.empty()
    flat = np.array(coords)
    uniq, first_idx, inverse = np.unique(flat, axis=0, return_index=True, return_inverse=True)
    order = np.argsort(first_idx, kind="stable")
    rank = np.empty(len(order), dtype=np.int64)
    rank[order] = np.arange(len(order))
    return TriangleMesh(flat[first_idx[order]], rank[inverse.reshape(-1)].reshape(-1, 3))


def write_obj(mesh: TriangleMesh, sink: TextIO) -> int:
    """v/f lines with 1-based indices and 9 significant digits; returns the
    line count (vertices + faces, nothing else)."""
    lines = 0
    try:
        for v in mesh.vertices:
            sink.write(f"v {v[0]:.9g} {v[1]:.9g} {v[2]:.9g}\n")
            lines += 1
        for t in mesh.triangles:
            sink.write(f"f {t[0] + 1} {t[1] + 1} {t[2] + 1}\n")
            lines += 1
    except OSError as exc:
        raise SinkError(f"write failed: {exc}") from exc
    return lines


def read_obj(text: str) -> TriangleMesh:
    vertices, triangles = [], []
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts or parts[0].startswith("#"):
            continue
        if parts[0] == "v":
            if len(parts) < 4:
                raise MalformedMesh(f"line {lineno}: bad vertex: {line.strip()!r}")
            vertices.append([float(v) for v in parts[1:4]])
        elif parts[0] == "f":
            if len(parts) < 4:
                raise MalformedMesh(f"line {lineno}: bad face: {line.strip()!r}")
            idx = [int(p.split("/")[0]) for p in parts[1:]]
            idx = [i - 1 if i > 0 else len(vertices) + i for i in idx]
            for a, b in zip(idx[1:], idx[2:]):
                triangles.append([idx[0], a, b])
    if not vertices:
        return TriangleMesh.empty()
    try:
        return TriangleMesh(np.array(vertices, dtype=float), np.array(triangles, dtype=np.int64))
    except Exception as exc:
        raise MalformedMesh(f"inconsistent OBJ data: {exc}") from exc


def write_mesh_file(mesh: TriangleMesh, path: str | Path, fmt: str | None = None) -> None:
    """Write by format or file extension: stl_binary (default), stl_ascii, obj."""
    path = Path(path)
    if fmt is None:
        fmt = {".obj": "obj"}.get(path.suffix.lower(), "stl_binary")
    if fmt == "stl_binary":
        with open(path, "wb") as f:
            write_stl_binary(mesh, f)
    elif fmt == "stl_ascii":
        with open(path, "w") as f:
            write_stl_ascii(mesh, f)
    elif fmt == "obj":
        with open(path, "w") as f:
            write_obj(mesh, f)
    else:
        raise ValueError(f"unknown format {fmt!r}")


def read_mesh_file(path: str | Path) -> TriangleMesh:
    path = Path(path)
    data = path.read_bytes()
    if path.suffix.lower() == ".obj":
        try:
            return read_obj(data.decode())
        except UnicodeDecodeError as exc:
            raise MalformedMesh(f"not a text OBJ file: {exc}") from exc
    if data[:6].rstrip() == b"solid" or data[:5] == b"solid":
        try:
            return read_stl_ascii(data.decode())
        except (UnicodeDecodeError, MalformedMesh):
            return read_stl_binary(data)
    return read_stl_binary(data)


def report_sidecar_path(mesh_path: str | Path) -> Path:
    """brick.stl -> brick.report.json, next to the mesh."""
    return Path(mesh_path).with_suffix(".report.json")


def write_report_json(report: MeshReport, mesh_path: str | Path, extra: dict | None = None) -> Path:
    """Write `<mesh>.report.json` next to the mesh file; returns its path."""
    payload = report.to_dict()
    if extra:
        payload.update(extra)
    path = report_sidecar_path(mesh_path)
    path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")
    return path
