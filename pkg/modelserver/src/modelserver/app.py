"""FastAPI application implementing the embed/generate wire protocols.

Endpoints:
  POST /embed     {"texts": [str, ...]} -> {"dims": int, "vectors": [[...], ...]}
  POST /generate  {"claim", "context", "mode", "decoding", "seed"} ->
                  {"text": str, "truncated": bool}
  GET  /health    model identifiers

Contract details: /embed is deterministic for identical input and rejects
malformed bodies with 400 and over-length texts with 413; /generate returns
422 for unsupported strategies and 503 when a checkpoint cannot load; beam
decoding is deterministic for a fixed seed. Embedding batches are processed
sequentially per request; generation requests are queued on a lock.
"""

from __future__ import annotations

import threading

from fastapi import FastAPI, HTTPException, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .backends import (STRATEGIES, BackendLoadError, make_embedder,
                       make_generator)
from .config import ServerConfig


class EmbedRequest(BaseModel):
    texts: list[str]


class DecodingModel(BaseModel):
    strategy: str
    params: dict = Field(default_factory=dict)


class GenerateRequest(BaseModel):
    claim: str | None = None
    context: str
    mode: str = "article"
    decoding: DecodingModel
    seed: int = 0


def create_app(config: ServerConfig | None = None) -> FastAPI:
    config = config or ServerConfig()
    app = FastAPI(title="modelserver", docs_url=None, redoc_url=None)
    embedder = make_embedder(config.embedding_model, config.device)
    generator = make_generator(config.generation_model, config.device)
    generate_lock = threading.Lock()

    @app.exception_handler(RequestValidationError)
    async def validation_handler(request: Request, exc: RequestValidationError):
        # /embed promises 400 with a reason; /generate keeps FastAPI's 422.
        status = 400 if request.url.path == "/embed" else 422
        return JSONResponse(status_code=status, content={"detail": exc.errors()})

    @app.post("/embed")
    def embed(req: EmbedRequest):
        for i, text in enumerate(req.texts):
            if len(text) > config.max_text_chars:
                raise HTTPException(
                    status_code=413,
                    detail=f"text {i} exceeds {config.max_text_chars} characters")
        try:
            vectors: list[list[float]] = []
            for start in range(0, len(req.texts), config.max_batch):
                vectors.extend(embedder.embed(req.texts[start:start + config.max_batch]))
            return {"dims": embedder.dims, "vectors": vectors}
        except BackendLoadError as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from exc

    @app.post("/generate")
    def generate(req: GenerateRequest):
        if req.decoding.strategy not in STRATEGIES:
            raise HTTPException(
                status_code=422,
                detail=f"unsupported strategy {req.decoding.strategy!r}; "
                       f"expected one of {list(STRATEGIES)}")
        if req.mode not in ("article", "claim_article"):
            raise HTTPException(status_code=422,
                                detail=f"unsupported mode {req.mode!r}")
        try:
            with generate_lock:
                text, truncated = generator.generate(
                    req.claim, req.context, req.mode, req.decoding.strategy,
                    req.decoding.params, req.seed, config.max_context_words)
        except BackendLoadError as exc:
            raise HTTPException(status_code=503, detail=str(exc)) from exc
        return {"text": text, "truncated": truncated}

    @app.get("/health")
    def health():
        return {"status": "ok",
                "embedding_model": embedder.identifier,
                "generation_model": generator.identifier}

    return app
