"""HTTP face of the repository.

All request and response bodies are UTF-8. Submissions and profiles go in
as raw .scl text; query results, maps, and claims come back as JSON
(or dot text for maps when asked).
"""
from __future__ import annotations

from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse, PlainTextResponse

from . import dsl, query, service
from .kb import KbError, UnknownIdError
from .maps import MapFormatError


def create_app(repo: service.Repository) -> FastAPI:
    app = FastAPI(title="claimgraph", docs_url=None, redoc_url=None)

    @app.middleware("http")
    async def cors(request: Request, call_next):
        if request.method == "OPTIONS":
            response = Response(status_code=204)
        else:
            response = await call_next(request)
        response.headers["Access-Control-Allow-Origin"] = "*"
        response.headers["Access-Control-Allow-Methods"] = "GET, POST, OPTIONS"
        response.headers["Access-Control-Allow-Headers"] = "Content-Type"
        return response

    def error(status: int, kind: str, detail: str) -> JSONResponse:
        return JSONResponse(status_code=status, content={"error": kind, "detail": detail})

    @app.post("/submissions")
    async def post_submission(request: Request, lax: bool | None = None):
        text = (await request.body()).decode("utf-8")
        report = repo.ingest_text(text, source="http", lax=lax)
        status = 201 if report.accepted else 422
        return JSONResponse(status_code=status, content=report.to_dict())

    @app.get("/query")
    def get_query(q: str, direct: bool = False):
        try:
            ast = dsl.parse_query(q)
        except dsl.DslError as exc:
            return error(400, "bad-query", str(exc))
        if direct and isinstance(ast, dsl.FindQuery):
            ast = dsl.FindQuery(kind=ast.kind, link=ast.link, target=ast.target, direct=True)
        try:
            result = query.execute(repo.kb, ast, params=repo.config.params)
        except UnknownIdError as exc:
            return error(404, "unknown-id", str(exc))
        except (KbError, ValueError) as exc:
            return error(400, "bad-query", str(exc))
        return JSONResponse(content=result.to_dict())

    @app.get("/maps/{concept_id}")
    def get_map(
        concept_id: str,
        depth: int = 1,
        format: str = "json",
        inferred: bool = False,
    ):
        try:
            cmap = query.extract_concept_map(
                repo.kb, concept_id, depth, include_inferred=inferred, params=repo.config.params
            )
            body = query.export_map(cmap, format)
        except UnknownIdError as exc:
            return error(404, "unknown-id", str(exc))
        except (MapFormatError, ValueError) as exc:
            return error(400, "bad-request", str(exc))
        media = "application/json" if format == "json" else "text/vnd.graphviz"
        return Response(content=body, media_type=media)

    @app.get("/schema")
    def get_schema():
        return PlainTextResponse(dsl.export_schema(repo.kb.schema))

    @app.post("/profiles")
    async def post_profile(request: Request):
        text = (await request.body()).decode("utf-8")
        try:
            profile = repo.add_profile(text)
        except dsl.DslError as exc:
            return error(422, "bad-profile", str(exc))
        except service.ServiceError as exc:
            return error(409, "duplicate-profile", str(exc))
        return JSONResponse(status_code=201, content={"id": profile.id})

    @app.get("/alerts")
    def get_alerts():
        fired = repo.alerts()
        return JSONResponse(
            content=[
                {
                    "profile": alert.profile_id,
                    "matched": [
                        {"target": target, "documents": list(docs)}
                        for target, docs in alert.matched
                    ],
                    "map": {
                        "focus": alert.map.focus,
                        "nodes": [
                            {"id": n.id, "kind": n.kind, "side": n.side} for n in alert.map.nodes
                        ],
                        "edges": [
                            {
                                "source": e.source,
                                "link": e.link,
                                "target": e.target,
                                "status": e.status,
                                "claim": e.claim,
                            }
                            for e in alert.map.edges
                        ],
                    },
                }
                for alert in fired
            ]
        )

    @app.get("/claims/{claim_id}")
    def get_claim(claim_id: str):
        claim = repo.kb.claims.get(claim_id)
        if claim is None:
            return error(404, "unknown-id", f"unknown claim {claim_id!r}")
        return JSONResponse(
            content={
                "claim": claim.id,
                "authors": list(claim.authors),
                "source": claim.assertion.source,
                "link": claim.assertion.link,
                "target": claim.assertion.target,
                "justification": {
                    "form": claim.justification.form,
                    "value": claim.justification.value,
                },
                "timestamp": claim.timestamp,
            }
        )

    return app


def serve(config: service.ServerConfig) -> None:
    """Blocking server start; mutations serialize through the repository lock."""
    import uvicorn

    repo = service.Repository(config)
    app = create_app(repo)
    uvicorn.run(app, host="127.0.0.1", port=config.port, log_level="warning")
