"""HTTP API over a QAService.

All endpoints live under /api/v1.  Domain misses (unknown subject, no
formula, values still needed) are reported inside a 200 payload's
status field; only malformed requests produce 4xx responses, with a
{status, message} body.
"""

from __future__ import annotations

from typing import Dict, Optional

from fastapi import FastAPI
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from . import kb, questions
from .service import BadRequest, QAService


class QuestionRequest(BaseModel):
    text: str
    lang: str = Field(default="en", pattern="^(en|hi|formula)$")


class CalculateRequest(BaseModel):
    qid: Optional[str] = None
    formula: Optional[str] = None
    bindings: Dict[str, float] = Field(default_factory=dict)


def create_app(store: kb.Store,
               patterns: Optional[questions.HindiPatterns] = None) -> FastAPI:
    service = QAService(store, patterns)
    app = FastAPI(title="mathqa", docs_url=None, redoc_url=None)

    @app.exception_handler(BadRequest)
    async def _bad_request(request, err: BadRequest):
        return JSONResponse(status_code=400,
                            content={"status": "error", "message": str(err)})

    @app.post("/api/v1/question")
    def question(req: QuestionRequest) -> dict:
        return service.ask(req.text, req.lang).to_dict()

    @app.post("/api/v1/calculate")
    def calculate(req: CalculateRequest) -> dict:
        return service.compute(req.qid, req.formula, req.bindings)

    @app.get("/api/v1/items")
    def items(label: str, lang: str = "en") -> dict:
        return {"items": service.items(label, lang)}

    @app.get("/healthz")
    def healthz() -> dict:
        return {"status": "ok"}

    return app
