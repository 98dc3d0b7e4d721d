"""HTTP JSON API over the design store, backing the browser editor.

Routes:

    GET  /health                         liveness probe
    GET  /codec                          attribute ranges / bin counts
    GET  /designs                        summaries of stored designs
    POST /designs                        {intent, category, seed?} -> run the
                                         pipeline and store the bundle
    GET  /designs/{id}                   full bundle plus current version
    POST /designs/{id}/edits             {edit, base_version} -> apply one edit
    GET  /designs/{id}/export?format=    svg or png bytes

Every mutating request carries the base version it was made against;
stale versions get 409. CORS is open so the editor frontend can talk to a
locally running service from any origin.
"""

from __future__ import annotations

import os

from fastapi import FastAPI, Response
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .backends.base import PipelineConfig
from .backends.mock import mock_suite
from .codec import CODEC_TABLE
from .errors import ColeforgeError, Conflict, InvalidEdit, NotFound, StageFailure
from .pipeline import run_pipeline
from .schema import CATEGORY_VALUES, DesignIntent
from .store import EDIT_OPS, DesignStore

DEFAULT_STORE = "coleforge-store"


class IntentRequest(BaseModel):
    intent: str
    category: str
    seed: int = 0


class EditRequest(BaseModel):
    edit: dict
    base_version: int


def create_app(store_path=None, suite=None, cfg: PipelineConfig = PipelineConfig()) -> FastAPI:
    store = DesignStore(store_path or os.environ.get("COLEFORGE_STORE", DEFAULT_STORE))
    suite = suite or mock_suite()

    app = FastAPI(title="coleforge editor service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    app.state.store = store

    @app.exception_handler(NotFound)
    async def _not_found(request, exc):
        return JSONResponse(status_code=404, content={"error": str(exc)})

    @app.exception_handler(Conflict)
    async def _conflict(request, exc):
        return JSONResponse(status_code=409, content={"error": str(exc)})

    @app.exception_handler(InvalidEdit)
    async def _invalid_edit(request, exc):
        return JSONResponse(
            status_code=422, content={"error": str(exc), "findings": exc.findings}
        )

    @app.exception_handler(ColeforgeError)
    async def _domain_error(request, exc):
        return JSONResponse(status_code=500, content={"error": str(exc)})

    @app.get("/health")
    def health():
        return {"status": "ok"}

    @app.get("/codec")
    def codec():
        return {
            "attributes": {
                name: {"lo": spec.lo, "hi": spec.hi, "n_bins": spec.n_bins}
                for name, spec in CODEC_TABLE.items()
            },
            "edit_ops": list(EDIT_OPS),
        }

    @app.get("/designs")
    def list_designs():
        return {"designs": store.list_designs()}

    @app.post("/designs")
    def create_design(req: IntentRequest):
        if req.category not in CATEGORY_VALUES:
            return JSONResponse(
                status_code=422, content={"error": f"unknown category {req.category!r}"}
            )
        try:
            bundle = run_pipeline(DesignIntent(req.intent, req.category), suite, cfg, seed=req.seed)
        except StageFailure as exc:
            return JSONResponse(
                status_code=502, content={"error": str(exc), "stage": exc.stage}
            )
        design_id = store.create(bundle)
        return {"id": design_id, "version": store.version(design_id)}

    @app.get("/designs/{design_id}")
    def get_design(design_id: str):
        bundle = store.get(design_id)
        return {
            "id": design_id,
            "version": store.version(design_id),
            "bundle": bundle.to_dict(),
        }

    @app.post("/designs/{design_id}/edits")
    def apply_edit(design_id: str, req: EditRequest):
        return store.apply_edit(design_id, req.edit, req.base_version)

    @app.get("/designs/{design_id}/export")
    def export(design_id: str, format: str = "svg"):
        blob = store.export(design_id, format)
        media = "image/svg+xml" if format == "svg" else "image/png"
        return Response(content=blob, media_type=media)

    return app
