"""HTTP service exposing the receiver-modeling operations.

Endpoints
---------
- ``POST /v1/dist``      photocount distribution table
- ``POST /v1/tvd``       approximation-accuracy sweep
- ``POST /v1/security``  security sweep (mutual information, Holevo bound, key fraction)
- ``POST /v1/validate``  fast internal consistency battery
- ``GET  /v1/presets``   named ready-to-run configurations
- ``GET  /health``       liveness probe

Error mapping: configuration problems → 400 (or 422 from body validation),
whole-request domain/numerical failures → 409.  Per-point failures inside a
sweep never fail the request; they are reported in the ``status`` column.
"""

from __future__ import annotations

from fastapi import FastAPI, HTTPException
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import ValidationError

from .. import __version__
from ..errors import ConfigError, DomainError, QuadratureError, TruncationError
from ..presets import PRESETS
from .compute import dist_table, security_table, tvd_table, validate_checks
from .models import (
    DistRequest,
    PresetInfo,
    PresetsResponse,
    SecurityRequest,
    TableResponse,
    TvdRequest,
    ValidateRequest,
    ValidateResponse,
    finite_or_none,
)


def _table_response(columns, rows) -> TableResponse:
    clean = [
        [finite_or_none(c) if isinstance(c, float) else c for c in row]
        for row in rows
    ]
    return TableResponse(columns=list(columns), rows=clean)


def create_app() -> FastAPI:
    app = FastAPI(
        title="asymrx",
        version=__version__,
        description=(
            "Photocount statistics, POVM reconstruction and asymptotic security "
            "analysis for asymmetric homodyne and double-homodyne receivers."
        ),
    )

    @app.exception_handler(ConfigError)
    async def _config_error(_, exc: ConfigError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"detail": {"kind": "config", "message": str(exc)}}
        )

    @app.exception_handler(ValidationError)
    async def _pydantic_error(_, exc: ValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=400, content={"detail": {"kind": "config", "message": str(exc)}}
        )

    @app.exception_handler(DomainError)
    async def _domain_error(_, exc: DomainError) -> JSONResponse:
        return JSONResponse(
            status_code=409,
            content={
                "detail": {
                    "kind": "domain",
                    "code": getattr(exc, "code", "domain_error"),
                    "message": str(exc),
                }
            },
        )

    @app.exception_handler(TruncationError)
    @app.exception_handler(QuadratureError)
    async def _numerical_error(_, exc: Exception) -> JSONResponse:
        return JSONResponse(
            status_code=409,
            content={
                "detail": {
                    "kind": "numerical",
                    "code": "numerical_error",
                    "message": str(exc),
                }
            },
        )

    @app.get("/health")
    async def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.get("/v1/presets", response_model=PresetsResponse)
    async def presets() -> PresetsResponse:
        infos = [
            PresetInfo(
                name=name,
                command=entry["command"],
                description=entry["description"],
                config=entry["config"],
            )
            for name, entry in sorted(PRESETS.items())
        ]
        return PresetsResponse(presets=infos)

    @app.post("/v1/dist", response_model=TableResponse)
    async def dist(req: DistRequest) -> TableResponse:
        return _table_response(*dist_table(req))

    @app.post("/v1/tvd", response_model=TableResponse)
    async def tvd(req: TvdRequest) -> TableResponse:
        return _table_response(*tvd_table(req))

    @app.post("/v1/security", response_model=TableResponse)
    async def security(req: SecurityRequest) -> TableResponse:
        return _table_response(*security_table(req))

    @app.post("/v1/validate", response_model=ValidateResponse)
    async def validate(req: ValidateRequest) -> ValidateResponse:
        checks = validate_checks(req.seed)
        return ValidateResponse(passed=all(c.passed for c in checks), checks=checks)

    return app


app = create_app()
