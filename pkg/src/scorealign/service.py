"""HTTP service backing the jump-labeling interface.

Serves every project directory under one root. Reads are unrestricted;
the only mutations are whole-list jump replacement (PUT) and generated
outputs (logical_order.json, alignment.json). Writes and alignment jobs
are serialized per project by an exclusive lock, so a PUT issued while
an alignment runs waits and the running job keeps the jump snapshot it
started from.

Endpoints (JSON unless noted)::

    GET  /projects                         project ids
    GET  /projects/{id}/pages/{page}       page image bytes (PNG)
    GET  /projects/{id}/measures           measures.json content
    GET  /projects/{id}/jumps              stored jump list
    PUT  /projects/{id}/jumps              replace jump list; 422 + violations
    GET  /projects/{id}/logical-order      unroll of the stored jumps
    POST /projects/{id}/align              run the alignment pipeline; 409 if inputs missing
    GET  /projects/{id}/alignment          alignment.json content

The GET endpoints for jumps and logical-order return the canonical file
bytes, so clients that save response bodies verbatim get files identical
to the stored artifacts.
"""

from __future__ import annotations

import re
import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import FileResponse

from .project import (
    JumpValidationError,
    Project,
    canonical_json_bytes,
    jumps_from_json,
    run_align,
    run_unroll,
    write_json,
)
from .unroll import validate_jumps

_PROJECT_ID = re.compile(r"^[A-Za-z0-9._-]+$")


def _violations_payload(violations) -> dict:
    return {
        "violations": [{"kind": v.kind, "message": v.message} for v in violations]
    }


def create_app(root: str | Path) -> FastAPI:
    root = Path(root)
    app = FastAPI(title="scorealign labeling service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    locks: dict[str, threading.Lock] = {}
    locks_guard = threading.Lock()

    def project_lock(pid: str) -> threading.Lock:
        with locks_guard:
            return locks.setdefault(pid, threading.Lock())

    def project(pid: str) -> Project:
        if not _PROJECT_ID.match(pid) or not (root / pid).is_dir():
            raise HTTPException(status_code=404, detail=f"unknown project {pid!r}")
        return Project(root / pid)

    def json_file_response(path: Path) -> Response:
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"{path.name} not found")
        return Response(content=path.read_bytes(), media_type="application/json")

    @app.get("/projects")
    def list_projects() -> list[str]:
        if not root.is_dir():
            return []
        return sorted(
            p.name for p in root.iterdir() if p.is_dir() and (p / "measures.json").exists()
        )

    @app.get("/projects/{pid}/pages/{page}")
    def get_page(pid: str, page: int):
        path = project(pid).page_image_path(page)
        if not path.exists():
            raise HTTPException(status_code=404, detail=f"no page {page} in project {pid!r}")
        return FileResponse(path, media_type="image/png")

    @app.get("/projects/{pid}/measures")
    def get_measures(pid: str) -> Response:
        return json_file_response(project(pid).path("measures.json"))

    @app.get("/projects/{pid}/jumps")
    def get_jumps(pid: str) -> Response:
        path = project(pid).path("jumps.json")
        if not path.exists():
            return Response(content=canonical_json_bytes([]), media_type="application/json")
        return json_file_response(path)

    @app.put("/projects/{pid}/jumps")
    async def put_jumps(pid: str, request: Request) -> Response:
        proj = project(pid)
        try:
            payload = await request.json()
        except Exception:
            raise HTTPException(status_code=422, detail="body must be a JSON array")
        if not isinstance(payload, list) or not all(
            isinstance(d, dict)
            and isinstance(d.get("from"), int)
            and isinstance(d.get("to"), int)
            for d in payload
        ):
            raise HTTPException(
                status_code=422,
                detail='body must be an array of {"from": int, "to": int}',
            )
        jumps = jumps_from_json(payload)
        measure_count = len(proj.measure_boxes())
        violations = validate_jumps(measure_count, jumps)
        if violations:
            return Response(
                content=canonical_json_bytes(_violations_payload(violations)),
                media_type="application/json",
                status_code=422,
            )
        with project_lock(pid):
            write_json(proj.path("jumps.json"), [{"from": d["from"], "to": d["to"]} for d in payload])
            run_unroll(proj)
        return json_file_response(proj.path("jumps.json"))

    @app.get("/projects/{pid}/logical-order")
    def get_logical_order(pid: str) -> Response:
        proj = project(pid)
        boxes = proj.measure_boxes()
        jumps = proj.load_jumps()
        violations = validate_jumps(len(boxes), jumps)
        if violations:
            return Response(
                content=canonical_json_bytes(_violations_payload(violations)),
                media_type="application/json",
                status_code=422,
            )
        from .unroll import unroll

        order = unroll(len(boxes), jumps)
        return Response(
            content=canonical_json_bytes(list(order.entries)),
            media_type="application/json",
        )

    @app.post("/projects/{pid}/align")
    def post_align(pid: str, variant: str = "onset_prob", threshold: float = 0.5):
        proj = project(pid)
        with project_lock(pid):
            try:
                record = run_align(proj, variant=variant, threshold=threshold)
            except FileNotFoundError as err:
                raise HTTPException(status_code=409, detail=str(err))
            except ValueError as err:
                raise HTTPException(status_code=422, detail=str(err))
        a = record.alignment
        return {
            "duration": a.duration,
            "num_measures": a.num_measures,
            "num_samples": len(a.samples),
        }

    @app.get("/projects/{pid}/alignment")
    def get_alignment(pid: str) -> Response:
        return json_file_response(project(pid).path("alignment.json"))

    return app
