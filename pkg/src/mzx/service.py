"""HTTP facade: the runner and the acceptance checks behind a FastAPI app."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from . import __version__, runner, verify
from .core import ConsistencyError
from .models import (
    HealthResponse,
    RunRequest,
    RunResponse,
    VerifyRequest,
    VerifyResponse,
)

app = FastAPI(
    title="mzx",
    version=__version__,
    description=(
        "Exact statistics and seeded sampling for a two-arm interferometer "
        "with path-polarization preparations."
    ),
)


@app.exception_handler(ConsistencyError)
async def _consistency_error(request: Request, exc: ConsistencyError) -> JSONResponse:
    # Signals a convention bug in the engine itself; never expected in service.
    return JSONResponse(
        status_code=500,
        content={"detail": str(exc), "error_type": "consistency"},
    )


@app.get("/health", response_model=HealthResponse)
def health() -> HealthResponse:
    return HealthResponse(name="mzx", version=__version__)


@app.post("/run", response_model=RunResponse)
def run(request: RunRequest) -> RunResponse:
    return runner.run_experiment(request)


@app.post("/verify", response_model=VerifyResponse)
def verify_run(request: VerifyRequest) -> VerifyResponse:
    return verify.run_verification(request)
