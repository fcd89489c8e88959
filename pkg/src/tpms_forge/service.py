"""Local HTTP+JSON service: the viewer backend and automation endpoint.

Generation is synchronous and content-addressed: the job id is the hash of
the canonicalized BrickSpec, so retries and duplicate posts are idempotent
and the mesh endpoint returns byte-identical STL for the same spec."""

from __future__ import annotations

import os
import threading
from collections import OrderedDict
from concurrent.futures import Future, ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Optional

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import __version__
from .bricks import BrickSpec, build_brick
from .errors import (
    CapExceeded,
    EnvelopeExceeded,
    ForgeError,
    NonMonotoneObjective,
    ResolutionTooCoarse,
    SpecInvalid,
    TargetUnreachable,
)
from .fields import surface_catalog
from .grids import DEFAULT_VOXEL_CAP
from .io_export import stl_bytes

STORE_LIMIT = 64
ENV_MAX_VOXELS = "TPMS_FORGE_MAX_VOXELS"

_SPEC_ERRORS = (SpecInvalid, EnvelopeExceeded)
_SOLVER_ERRORS = (TargetUnreachable, ResolutionTooCoarse, NonMonotoneObjective)


@dataclass
class JobRecord:
    id: str
    spec: BrickSpec
    status: str  # "done" | "failed"
    report: Optional[dict] = None
    solve: Optional[dict] = None
    error: Optional[str] = None
    stl: bytes = field(default=b"", repr=False)

    def to_dict(self) -> dict:
        return {
            "id": self.id,
            "spec": self.spec.to_dict(),
            "status": self.status,
            "report": self.report,
            "solve": self.solve,
            "error": self.error,
        }


class JobStore:
    """In-memory LRU keyed by content-hash id; access is serialized."""

    def __init__(self, limit: int = STORE_LIMIT):
        self._limit = limit
        self._lock = threading.Lock()
        self._jobs: OrderedDict[str, JobRecord] = OrderedDict()

    def get(self, job_id: str) -> Optional[JobRecord]:
        with self._lock:
            record = self._jobs.get(job_id)
            if record is not None:
                self._jobs.move_to_end(job_id)
            return record

    def put(self, record: JobRecord) -> None:
        with self._lock:
            self._jobs[record.id] = record
            self._jobs.move_to_end(record.id)
            while len(self._jobs) > self._limit:
                self._jobs.popitem(last=False)

    def __len__(self) -> int:
        with self._lock:
            return len(self._jobs)


def resolve_cap(cap: Optional[int] = None) -> int:
    if cap is not None:
        return cap
    env = os.environ.get(ENV_MAX_VOXELS)
    if env:
        try:
            return int(env)
        except ValueError:
            raise SpecInvalid(f"{ENV_MAX_VOXELS} must be an integer, got {env!r}") from None
    return DEFAULT_VOXEL_CAP


def create_app(
    cap: Optional[int] = None,
    store_limit: int = STORE_LIMIT,
    workers: Optional[int] = None,
) -> FastAPI:
    app = FastAPI(title="tpms-forge", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    voxel_cap = resolve_cap(cap)
    store = JobStore(store_limit)
    executor = ThreadPoolExecutor(max_workers=workers or os.cpu_count() or 2)
    inflight: dict[str, Future] = {}
    inflight_lock = threading.Lock()
    app.state.store = store

    def error_response(status: int, exc: ForgeError) -> JSONResponse:
        return JSONResponse(
            status_code=status, content={"error": exc.code, "detail": exc.message}
        )

    def run_job(spec: BrickSpec, job_id: str) -> JobRecord:
        try:
            result = build_brick(spec, cap=voxel_cap)
            return JobRecord(
                id=job_id,
                spec=spec,
                status="done",
                report=result.report.to_dict(),
                solve=None if result.solve is None else result.solve.to_dict(),
                stl=stl_bytes(result.mesh),
            )
        except _SOLVER_ERRORS as exc:
            return JobRecord(id=job_id, spec=spec, status="failed", error=exc.code)

    @app.get("/api/surfaces")
    def surfaces() -> list[dict]:
        return [
            {
                "kind": info.kind.value,
                "formula": info.formula,
                "triply_periodic": info.triply_periodic,
                "symmetry": info.symmetry.value,
            }
            for info in surface_catalog()
        ]

    @app.post("/api/generate")
    async def generate(request: Request):
        try:
            body = await request.json()
        except Exception:
            return JSONResponse(
                status_code=422,
                content={"error": "SPEC_INVALID", "detail": "request body is not valid JSON"},
            )
        try:
            spec = BrickSpec.from_dict(body)
            dims = spec.dims()
            if dims[0] * dims[1] * dims[2] > voxel_cap:
                raise CapExceeded(
                    f"resolution {dims} exceeds the {voxel_cap}-sample cap"
                )
        except CapExceeded as exc:
            return error_response(413, exc)
        except _SPEC_ERRORS as exc:
            return error_response(422, exc)

        job_id = spec.job_id()
        record = store.get(job_id)
        if record is None:
            # Coalesce duplicate in-flight ids onto one computation.
            with inflight_lock:
                fut = inflight.get(job_id)
                if fut is None:
                    fut = executor.submit(run_job, spec, job_id)
                    inflight[job_id] = fut
            try:
                record = fut.result()
            except ForgeError as exc:
                # Internal pipeline failure (not a solver/spec problem).
                return error_response(500, exc)
            finally:
                with inflight_lock:
                    inflight.pop(job_id, None)
            store.put(record)

        status = 200 if record.status == "done" else 409
        return JSONResponse(status_code=status, content=record.to_dict())

    @app.get("/api/mesh/{job_id}.stl")
    def mesh(job_id: str):
        record = store.get(job_id)
        if record is None or record.status != "done":
            return JSONResponse(
                status_code=404, content={"error": "NOT_FOUND", "detail": f"no mesh for id {job_id}"}
            )
        return Response(content=record.stl, media_type="application/octet-stream")

    @app.get("/api/report/{job_id}")
    def report(job_id: str):
        record = store.get(job_id)
        if record is None or record.report is None:
            return JSONResponse(
                status_code=404, content={"error": "NOT_FOUND", "detail": f"no report for id {job_id}"}
            )
        return JSONResponse(content=record.report)

    return app
