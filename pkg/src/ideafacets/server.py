"""HTTP JSON API over a loaded bundle.

The service holds the bundle as an immutable snapshot; queries never
mutate it, so concurrent requests are safe.  POST /api/reload swaps the
snapshot atomically (single reference assignment) without disturbing
in-flight queries.  The only write path is POST /api/marks, which
appends rater marks to the bundle's marks file.  Every response embeds
the bundle build id.
"""

from __future__ import annotations

import threading
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .corpus import PURPOSE
from .inspiration import InspirationError
from .pipeline import Bundle, PipelineError
from .render import (
    concept_to_dict,
    document_to_dict,
    edge_to_dict,
    search_response_to_dict,
)
from .rules import MiningError, edge_provenance, neighbors
from .search import FacetQuery, QueryError


class SearchBody(BaseModel):
    purpose: list[str] = Field(default_factory=list)
    not_purpose: list[str] = Field(default_factory=list)
    mechanism: list[str] = Field(default_factory=list)
    not_mechanism: list[str] = Field(default_factory=list)
    method: str = "avg"
    neg_percentile: float = 90.0
    limit: int = 20
    combine: str = "mean"


class InspireBody(BaseModel):
    seed: str
    boxes: int | None = None
    rng_seed: int | None = None


class MarkedSpan(BaseModel):
    box_index: int
    span_index: int


class MarksBody(BaseModel):
    session_id: str
    rater_id: str
    marked: list[MarkedSpan] = Field(default_factory=list)
    comments: dict[str, str] = Field(default_factory=dict)


class ReloadBody(BaseModel):
    bundle_dir: str | None = None


def query_from_body(body: SearchBody) -> FacetQuery:
    return FacetQuery(
        purpose_pos=tuple(body.purpose),
        purpose_neg=tuple(body.not_purpose),
        mech_pos=tuple(body.mechanism),
        mech_neg=tuple(body.not_mechanism),
        method=body.method,
        neg_percentile=body.neg_percentile,
        limit=body.limit,
        combine=body.combine,
    )


def create_app(bundle: Bundle, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="ideafacets", version="0.1.0")
    state = {"bundle": bundle}
    reload_lock = threading.Lock()

    def current() -> Bundle:
        return state["bundle"]

    @app.exception_handler(QueryError)
    @app.exception_handler(InspirationError)
    @app.exception_handler(MiningError)
    async def _bad_request(request: Request, exc: Exception):
        return JSONResponse(
            status_code=400,
            content={"code": 400, "stage": "query", "message": str(exc)},
        )

    @app.exception_handler(PipelineError)
    async def _pipeline_error(request: Request, exc: PipelineError):
        return JSONResponse(
            status_code=500,
            content={"code": 500, "stage": exc.stage, "message": str(exc)},
        )

    @app.get("/api/health")
    def health():
        return {"status": "ok", "build_id": current().build_id}

    @app.post("/api/search")
    def search_endpoint(body: SearchBody):
        bundle = current()
        response = bundle.search(query_from_body(body))
        return search_response_to_dict(response, bundle.build_id)

    @app.get("/api/products/{doc_id}")
    def product(doc_id: str):
        bundle = current()
        try:
            doc = bundle.corpus.get(doc_id)
        except KeyError:
            raise HTTPException(
                status_code=404,
                detail={"code": 404, "stage": "lookup", "message": f"no product {doc_id!r}"},
            )
        return {"build_id": bundle.build_id, "product": document_to_dict(doc)}

    @app.get("/api/concepts")
    def concepts(kind: str | None = Query(default=None)):
        bundle = current()
        listed = [
            concept_to_dict(c, full=False)
            for c in bundle.concepts
            if kind is None or c.kind == kind
        ]
        return {"build_id": bundle.build_id, "concepts": listed}

    @app.get("/api/concepts/{concept_id}")
    def concept_detail(concept_id: str):
        bundle = current()
        try:
            concept = bundle.concept(concept_id)
        except KeyError:
            raise HTTPException(
                status_code=404,
                detail={"code": 404, "stage": "lookup", "message": f"no concept {concept_id!r}"},
            )
        return {"build_id": bundle.build_id, "concept": concept_to_dict(concept)}

    @app.get("/api/graph/neighbors/{concept_id}")
    def graph_neighbors(
        concept_id: str,
        direction: str = Query(default="out"),
        top: int = Query(default=3, ge=1),
    ):
        bundle = current()
        edges = neighbors(bundle.graph, concept_id, direction=direction, top_r=top)
        listed = []
        for edge in edges:
            far_id = edge.target if edge.source == concept_id else edge.source
            listed.append(
                {
                    "edge": edge_to_dict(edge),
                    "concept": concept_to_dict(bundle.graph.concepts[far_id], full=False),
                }
            )
        return {"build_id": bundle.build_id, "concept_id": concept_id, "neighbors": listed}

    @app.get("/api/graph/edge/{source}/{target}")
    def graph_edge(source: str, target: str):
        bundle = current()
        edge = bundle.graph.edge(source, target)
        pairs = edge_provenance(bundle.graph, source, target, bundle.corpus)
        return {
            "build_id": bundle.build_id,
            "edge": edge_to_dict(edge),
            "provenance": pairs,
        }

    @app.post("/api/inspire")
    def inspire(body: InspireBody):
        bundle = current()
        session = bundle.inspire(body.seed, boxes=body.boxes, rng_seed=body.rng_seed)
        return {"build_id": bundle.build_id, "session": session.as_dict()}

    @app.post("/api/marks")
    def marks(body: MarksBody):
        bundle = current()
        record = {
            "session_id": body.session_id,
            "rater_id": body.rater_id,
            "marked": [{"box_index": m.box_index, "span_index": m.span_index} for m in body.marked],
            "comments": body.comments,
        }
        bundle.append_marks(record)
        return {"build_id": bundle.build_id, "stored": len(body.marked)}

    @app.post("/api/reload")
    def reload(body: ReloadBody):
        with reload_lock:
            target = Path(body.bundle_dir) if body.bundle_dir else current().dir
            fresh = Bundle(target)
            state["bundle"] = fresh  # atomic swap; in-flight queries keep the old snapshot
        return {"status": "reloaded", "build_id": fresh.build_id}

    if ui_dir is not None:
        # same-origin static hosting for the explorer SPA (after the API
        # routes, so /api/* keeps precedence)
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(
    bundle_dir: str | Path,
    host: str = "127.0.0.1",
    port: int = 8000,
    ui_dir: str | Path | None = None,
) -> None:
    """Load a bundle and serve it; blocks until interrupted."""
    import uvicorn

    app = create_app(Bundle(bundle_dir), ui_dir=ui_dir)
    uvicorn.run(app, host=host, port=port, log_level="info")
