"""HTTP client for the benchmark service.

Without a base URL the client talks to an in-process instance of the app,
so the CLI works with no running server; with one it speaks to a remote
deployment over the same wire format.
"""

from __future__ import annotations

import base64
import warnings

import httpx


class ServiceError(RuntimeError):
    """Non-2xx response from the service."""

    def __init__(self, status_code: int, detail: str):
        super().__init__(f"service returned {status_code}: {detail}")
        self.status_code = status_code
        self.detail = detail


class ServiceClient:
    def __init__(self, base_url: str | None = None):
        if base_url:
            self._client = httpx.Client(base_url=base_url, timeout=None)
        else:
            with warnings.catch_warnings():
                # starlette warns about its httpx-based test client; harmless here
                warnings.simplefilter("ignore", DeprecationWarning)
                from fastapi.testclient import TestClient
            from .service import create_app
            self._client = TestClient(create_app(), raise_server_exceptions=False)

    def close(self) -> None:
        self._client.close()

    def __enter__(self) -> "ServiceClient":
        return self

    def __exit__(self, *exc_info) -> None:
        self.close()

    # -- endpoints ----------------------------------------------------------

    def health(self) -> dict:
        return self._get("/health")

    def gan_suite_configs(self) -> list[dict]:
        return self._get("/configs/gan-suite")

    def run(self, configs: list[dict], options: dict) -> dict:
        return self._post("/bench/run", {"configs": configs, "options": options})

    def run_gan_suite(self, options: dict) -> dict:
        return self._post("/bench/gan-suite", {"options": options})

    def verify(self, **params) -> dict:
        return self._post("/verify", params)

    def convert_ppm(self, ppm_bytes: bytes) -> tuple[bytes, dict]:
        payload = {"ppm_base64": base64.b64encode(ppm_bytes).decode("ascii")}
        body = self._post("/convert/ppm-to-sct", payload)
        return base64.b64decode(body["sct_base64"]), body

    def render(self, report: dict, fmt: str) -> str:
        return self._post("/report/render", {"report": report, "format": fmt})["text"]

    # -- plumbing -----------------------------------------------------------

    def _get(self, path: str):
        return self._handle(self._client.get(path))

    def _post(self, path: str, payload: dict):
        return self._handle(self._client.post(path, json=payload))

    @staticmethod
    def _handle(response: httpx.Response):
        if response.status_code >= 300:
            try:
                detail = response.json().get("detail", response.text)
            except ValueError:
                detail = response.text
            raise ServiceError(response.status_code, str(detail))
        return response.json()
