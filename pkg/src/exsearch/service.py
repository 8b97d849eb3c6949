"""HTTP face of the engine: search, explain, explain_pair, intent, meta.

All state (index, embeddings, config) is immutable after startup, so the
handlers are freely concurrent. Success bodies are serialized through the
same canonical JSON writer the CLI uses; failures always carry the shape
{"error": {"code", "message"}}.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .converters import ConverterKind
from .engine import DEFAULT_POOL_SIZE, SearchEngine
from .errors import (
    DegenerateLocalRegionError,
    EmptyQueryError,
    ExsearchError,
    InvalidParameterError,
    NoResultsError,
    NotInTopKError,
    PairOrderError,
    ScoreShiftRequiredError,
    UnknownConverterError,
    UnknownDocumentError,
    UnknownRankerError,
)
from .explain import DEFAULT_N_SAMPLES, payload_to_json

_ERROR_CODES: list[tuple[type[ExsearchError], int, str]] = [
    (EmptyQueryError, 400, "empty_query"),
    (UnknownRankerError, 400, "unknown_ranker"),
    (UnknownConverterError, 400, "unknown_converter"),
    (UnknownDocumentError, 404, "unknown_document"),
    (NoResultsError, 404, "no_results"),
    (NotInTopKError, 409, "not_in_top_k"),
    (PairOrderError, 409, "pair_order_violated"),
    (ScoreShiftRequiredError, 422, "score_shift_required"),
    (DegenerateLocalRegionError, 422, "degenerate_local_region"),
    (InvalidParameterError, 400, "invalid_parameter"),
    (ExsearchError, 400, "bad_request"),
]


@dataclass
class ServiceConfig:
    corpus_path: str | Path
    embedding_path: str | Path | None = None
    listen_address: str = "127.0.0.1:8000"
    default_k: int = 10
    default_converter: str = ConverterKind.TOP_K_BINARY.value
    default_n_samples: int = DEFAULT_N_SAMPLES
    pool_size: int = DEFAULT_POOL_SIZE
    ui_dir: str | Path | None = None

    def __post_init__(self) -> None:
        if self.default_k < 1:
            raise InvalidParameterError(f"default_k must be >= 1, got {self.default_k}")
        ConverterKind.from_wire(self.default_converter)

    def defaults(self) -> dict:
        return {
            "k": self.default_k,
            "converter": self.default_converter,
            "n_samples": self.default_n_samples,
            "pool_size": self.pool_size,
        }


def _error_body(code: str, message: str) -> dict:
    return {"error": {"code": code, "message": message}}


def _json(payload: dict) -> Response:
    return Response(content=payload_to_json(payload), media_type="application/json")


def _require(body: dict, name: str) -> object:
    if name not in body or body[name] is None:
        raise InvalidParameterError(f"missing required field {name!r}")
    return body[name]


def _require_str(body: dict, name: str) -> str:
    value = _require(body, name)
    if not isinstance(value, str):
        raise InvalidParameterError(f"field {name!r} must be a string")
    return value


def _require_int(body: dict, name: str) -> int:
    value = _require(body, name)
    if isinstance(value, bool) or not isinstance(value, int):
        raise InvalidParameterError(f"field {name!r} must be an integer")
    return value


def _optional_int(body: dict, name: str) -> int | None:
    if name not in body or body[name] is None:
        return None
    return _require_int(body, name)


def create_app(config: ServiceConfig) -> FastAPI:
    """Load the corpus (and embeddings, if configured) and wire the routes."""
    engine = SearchEngine.from_corpus_file(
        config.corpus_path,
        embedding_path=config.embedding_path,
        pool_size=config.pool_size,
    )
    return build_app(engine, config)


def build_app(engine: SearchEngine, config: ServiceConfig) -> FastAPI:
    app = FastAPI(title="exsearch", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )

    @app.exception_handler(ExsearchError)
    async def handle_domain_error(request: Request, exc: ExsearchError) -> JSONResponse:
        for exc_type, status, code in _ERROR_CODES:
            if isinstance(exc, exc_type):
                return JSONResponse(status_code=status, content=_error_body(code, str(exc)))
        raise exc  # pragma: no cover - map ends with the base class

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(
        request: Request, exc: RequestValidationError
    ) -> JSONResponse:
        return JSONResponse(status_code=400, content=_error_body("invalid_parameter", str(exc)))

    @app.get("/meta")
    def meta() -> Response:
        return _json(engine.meta(config.defaults()))

    @app.get("/search")
    def search(q: str = "", ranker: str | None = None, k: int | None = None) -> Response:
        ranker_name = ranker or "bm25"
        k_value = k if k is not None else config.default_k
        return _json(engine.search_payload(q, ranker_name, k_value))

    @app.post("/explain")
    async def explain(request: Request) -> Response:
        body = await _read_body(request)
        payload = engine.explain(
            q=_require_str(body, "q"),
            doc_id=_require_str(body, "doc_id"),
            ranker_name=_require_str(body, "ranker"),
            converter_name=_require_str(body, "converter"),
            k=_require_int(body, "k"),
            n_words=_require_int(body, "n_words"),
            n_samples=_optional_int(body, "n_samples"),
            seed=_optional_int(body, "seed"),
        )
        return _json(payload)

    @app.post("/explain_pair")
    async def explain_pair(request: Request) -> Response:
        body = await _read_body(request)
        payload = engine.explain_pair(
            q=_require_str(body, "q"),
            doc_a_id=_require_str(body, "doc_a_id"),
            doc_b_id=_require_str(body, "doc_b_id"),
            ranker_name=_require_str(body, "ranker"),
            k=_require_int(body, "k"),
            n_words=_require_int(body, "n_words"),
            n_samples=_optional_int(body, "n_samples"),
            seed=_optional_int(body, "seed"),
        )
        return _json(payload)

    @app.post("/intent")
    async def intent(request: Request) -> Response:
        body = await _read_body(request)
        payload = engine.intent(
            q=_require_str(body, "q"),
            ranker_name=_require_str(body, "ranker"),
            converter_name=_require_str(body, "converter"),
            k=_require_int(body, "k"),
            n_words=_require_int(body, "n_words"),
            n_samples=_optional_int(body, "n_samples"),
            seed=_optional_int(body, "seed"),
        )
        return _json(payload)

    if config.ui_dir and Path(config.ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/ui", StaticFiles(directory=str(config.ui_dir), html=True), name="ui")

    return app


async def _read_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception as exc:
        raise InvalidParameterError(f"request body is not valid JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise InvalidParameterError("request body must be a JSON object")
    return body
