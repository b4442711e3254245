"""HTTP API over a loaded engine: health, ask and ontology stats.

Requests only read the immutable snapshots loaded at startup, so
concurrent questions are safe. CORS is open for the browser console."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .engine import Engine, EngineConfig, EngineError, InvalidQuestion


def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(title="ontoqa", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["GET", "POST"],
        allow_headers=["*"],
    )

    @app.get("/api/health")
    def health():
        return {"status": "ok"}

    @app.post("/api/ask")
    async def ask(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "request body must be JSON")
        if not isinstance(body, dict):
            return _error(400, "request body must be a JSON object")
        question = body.get("question")
        if not isinstance(question, str) or not question.strip():
            return _error(400, "a non-empty 'question' string is required")
        k = body.get("k")
        if k is not None and (not isinstance(k, int) or k < 1):
            return _error(400, "'k' must be a positive integer")
        try:
            return engine.ask(question, k=k).to_dict()
        except InvalidQuestion as exc:
            return _error(400, str(exc))
        except EngineError as exc:
            return _error(500, str(exc))

    @app.get("/api/ontology/stats")
    def ontology_stats():
        return engine.ontology_stats()

    @app.exception_handler(Exception)
    async def unhandled(request: Request, exc: Exception):
        return _error(500, f"internal error: {exc}")

    return app


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


def serve(config: EngineConfig, host: str, port: int) -> None:
    """Load the snapshots and serve until shutdown. Failures to bind or to
    load the artifacts surface as named errors before serving starts."""
    import uvicorn

    engine = Engine.load(config)
    if engine.index is None:
        raise EngineError(
            f"no index snapshot at {config.index_path}; run ingest before serving"
        )
    uvicorn.run(create_app(engine), host=host, port=port, log_level="info")
