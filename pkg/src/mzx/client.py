"""Backends for the CLI: in-process by default, HTTP when a server is given.

Both clients expose the same two calls with the same pydantic models, so the
CLI (or any other caller) cannot tell them apart; determinism guarantees are
identical because all floats survive the JSON round trip exactly.
"""

from __future__ import annotations

from types import TracebackType

import httpx

from . import runner
from . import verify as verify_module
from .core import ConsistencyError
from .models import RunRequest, RunResponse, VerifyRequest, VerifyResponse


class ServiceError(RuntimeError):
    """Transport failure or non-consistency server-side error."""


class LocalClient:
    """Evaluates requests in-process."""

    def run(self, request: RunRequest) -> RunResponse:
        return runner.run_experiment(request)

    def verify(self, request: VerifyRequest | None = None) -> VerifyResponse:
        return verify_module.run_verification(request)

    def __enter__(self) -> LocalClient:
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        return None


class RemoteClient:
    """Talks to a served instance over HTTP."""

    def __init__(
        self,
        base_url: str,
        timeout: float = 600.0,
        transport: httpx.BaseTransport | None = None,
    ) -> None:
        self._client = httpx.Client(base_url=base_url, timeout=timeout, transport=transport)

    def run(self, request: RunRequest) -> RunResponse:
        return RunResponse.model_validate(
            self._post("/run", request.model_dump(mode="json"))
        )

    def verify(self, request: VerifyRequest | None = None) -> VerifyResponse:
        payload = (request or VerifyRequest()).model_dump(mode="json")
        return VerifyResponse.model_validate(self._post("/verify", payload))

    def _post(self, path: str, payload: dict) -> dict:
        try:
            response = self._client.post(path, json=payload)
        except httpx.HTTPError as exc:
            raise ServiceError(f"cannot reach service: {exc}") from exc
        if response.status_code >= 400:
            try:
                body = response.json()
            except ValueError:
                body = {}
            detail = body.get("detail", response.text)
            if body.get("error_type") == "consistency":
                raise ConsistencyError(str(detail))
            raise ServiceError(f"service returned {response.status_code}: {detail}")
        return response.json()

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> RemoteClient:
        return self

    def __exit__(
        self,
        exc_type: type[BaseException] | None,
        exc: BaseException | None,
        tb: TracebackType | None,
    ) -> None:
        self.close()
