"""HTTP service exposing validation and registry workflows.

Built on the standard library's threading HTTP server: requests are
handled concurrently, while the store serializes writers per entity
family, so concurrent version logging can never duplicate a number.

Routes (bodies and responses are JSON unless noted):

    GET  /health
    POST /v1/baselines?name=<str>          body text/csv -> {"baseline_id"}
    GET  /v1/baselines
    GET  /v1/baselines/{id}
    POST /v1/validate?baseline_id=<id>     body text/csv -> drift report
    GET  /v1/reports/{id}
    POST /v1/models/{name}/versions        body version draft -> record
    GET  /v1/models/{name}/versions
    GET  /v1/models/{name}/versions/{n}
    GET  /v1/models/{name}/lineage
    POST /v1/models/{name}/compare         {"metric","versions","direction"}
    GET  /v1/models/{name}/best?metric=<m>&direction=max|min

Errors: 400 malformed input, 404 unknown id/model, 409 registry conflict,
422 semantic errors; body is {"error": "<message>"}.

The run config is re-read from <store>/config.json on every request when
that file exists, so threshold edits apply without restarting.
"""

from __future__ import annotations

import json
import re
import sys
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from typing import Any, Optional
from urllib.parse import parse_qs, urlsplit

from .canon import canonical_bytes
from .config import DriftConfig, load_config
from .errors import (
    ConfigError,
    ConflictError,
    DriftwatchError,
    IngestError,
    NotFoundError,
    SemanticError,
)
from .notify import emit_alerts
from .pipeline import profile_table, validate_table
from .registry import (
    best_version,
    compare_versions,
    get_lineage,
    list_versions,
    log_version,
)
from .store import Store
from .summarize import summary_doc
from .table import read_table

_MODEL_ROUTE = re.compile(r"^/v1/models/([^/]+)/(versions|lineage|compare|best)(?:/(\d+))?$")


class _HttpError(Exception):
    def __init__(self, status: int, message: str):
        super().__init__(message)
        self.status = status
        self.message = message


def _status_for(exc: DriftwatchError) -> int:
    if isinstance(exc, NotFoundError):
        return 404
    if isinstance(exc, ConflictError):
        return 409
    if isinstance(exc, SemanticError):
        return 422
    if isinstance(exc, (IngestError, ConfigError)):
        return 400
    return 500


class DriftwatchHandler(BaseHTTPRequestHandler):
    server_version = "driftwatch"
    protocol_version = "HTTP/1.1"

    # set by build_server on the server object
    store: Store
    base_cfg: DriftConfig

    def log_message(self, format: str, *args) -> None:  # noqa: A002 - stdlib signature
        pass  # keep test output quiet; operators can front with a real proxy

    # -- plumbing -------------------------------------------------------

    def _cfg(self) -> DriftConfig:
        text = self.server.store.read_config_text()  # type: ignore[attr-defined]
        if text is None:
            return self.server.base_cfg  # type: ignore[attr-defined]
        return load_config(text)

    def _body(self) -> bytes:
        length = int(self.headers.get("Content-Length") or 0)
        return self.rfile.read(length) if length > 0 else b""

    def _json_body(self) -> Any:
        raw = self._body()
        if not raw:
            raise _HttpError(400, "request body must be JSON")
        try:
            return json.loads(raw.decode("utf-8"))
        except (UnicodeDecodeError, json.JSONDecodeError) as exc:
            raise _HttpError(400, f"malformed JSON body: {exc}") from exc

    def _reply(self, status: int, doc: Any) -> None:
        body = canonical_bytes(doc)
        self.send_response(status)
        self.send_header("Content-Type", "application/json; charset=utf-8")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _param(self, query: dict[str, list[str]], name: str) -> str:
        values = query.get(name)
        if not values or not values[0]:
            raise _HttpError(400, f"missing required query parameter: {name}")
        return values[0]

    # -- dispatch ----------------------------------------------------------

    def do_GET(self) -> None:
        self._dispatch("GET")

    def do_POST(self) -> None:
        self._dispatch("POST")

    def _dispatch(self, method: str) -> None:
        split = urlsplit(self.path)
        path = split.path.rstrip("/") or "/"
        query = parse_qs(split.query)
        try:
            self._route(method, path, query)
        except _HttpError as exc:
            self._reply(exc.status, {"error": exc.message})
        except DriftwatchError as exc:
            self._reply(_status_for(exc), {"error": str(exc)})
        except Exception as exc:  # pragma: no cover - defensive
            self._reply(500, {"error": f"internal error: {exc}"})

    def _route(self, method: str, path: str, query: dict[str, list[str]]) -> None:
        store: Store = self.server.store  # type: ignore[attr-defined]

        if method == "GET" and path == "/health":
            self._reply(200, {"status": "ok"})
            return

        if path == "/v1/baselines":
            if method == "POST":
                cfg = self._cfg()
                name = query.get("name", [None])[0]
                table = read_table(self._body(), "csv")
                summary = profile_table(table, cfg)
                baseline_id = store.put_baseline(summary, name=name)
                self._reply(201, {"baseline_id": baseline_id})
                return
            if method == "GET":
                self._reply(200, {"baselines": store.list_baselines()})
                return

        match = re.match(r"^/v1/baselines/([0-9a-f]+)$", path)
        if match and method == "GET":
            self._reply(200, summary_doc(store.get_baseline(match.group(1))))
            return

        if path == "/v1/validate" and method == "POST":
            cfg = self._cfg()
            baseline = store.get_baseline(self._param(query, "baseline_id"))
            table = read_table(self._body(), "csv")
            report, _current = validate_table(baseline, table, cfg)
            store.put_report(report)
            if cfg.notify_url:
                threading.Thread(
                    target=emit_alerts, args=(report, cfg), daemon=True
                ).start()
            self._reply(200, report)
            return

        match = re.match(r"^/v1/reports/([0-9a-f]+)$", path)
        if match and method == "GET":
            self._reply(200, store.get_report(match.group(1)))
            return

        match = _MODEL_ROUTE.match(path)
        if match:
            self._route_models(method, match, query)
            return

        raise _HttpError(404, f"no such route: {method} {path}")

    def _route_models(self, method: str, match: re.Match, query: dict[str, list[str]]) -> None:
        store: Store = self.server.store  # type: ignore[attr-defined]
        model_name, action, number = match.group(1), match.group(2), match.group(3)

        if action == "versions":
            if method == "POST" and number is None:
                draft = self._json_body()
                if not isinstance(draft, dict):
                    raise _HttpError(400, "version draft must be a JSON object")
                self._reply(201, log_version(store, model_name, draft))
                return
            if method == "GET" and number is None:
                self._reply(
                    200,
                    {"model_name": model_name, "versions": list_versions(store, model_name)},
                )
                return
            if method == "GET":
                if not store.model_exists(model_name):
                    raise NotFoundError(f"unknown model: {model_name!r}")
                self._reply(200, store.get_version(model_name, int(number)))
                return

        if action == "lineage" and method == "GET" and number is None:
            self._reply(200, get_lineage(store, model_name))
            return

        if action == "compare" and method == "POST" and number is None:
            body = self._json_body()
            if not isinstance(body, dict):
                raise _HttpError(400, "compare body must be a JSON object")
            metric = body.get("metric")
            versions = body.get("versions")
            direction = body.get("direction", "max")
            if not isinstance(metric, str) or not metric:
                raise _HttpError(400, "compare body needs a 'metric' string")
            if not isinstance(versions, list) or not all(
                isinstance(v, int) and not isinstance(v, bool) for v in versions
            ):
                raise _HttpError(400, "compare body needs 'versions': [int, ...]")
            cfg = self._cfg()
            self._reply(
                200,
                compare_versions(store, model_name, metric, versions, direction, cfg),
            )
            return

        if action == "best" and method == "GET" and number is None:
            metric = self._param(query, "metric")
            direction = query.get("direction", ["max"])[0]
            version = best_version(store, model_name, metric, direction)
            self._reply(
                200,
                {
                    "model_name": model_name,
                    "metric": metric,
                    "direction": direction,
                    "best_version": version,
                },
            )
            return

        raise _HttpError(404, f"no such route: {method} {self.path}")


def parse_address(addr: str) -> tuple[str, int]:
    host, sep, port = addr.rpartition(":")
    if not sep:
        raise ConfigError(f"address must be host:port, got {addr!r}")
    try:
        return (host or "127.0.0.1", int(port))
    except ValueError:
        raise ConfigError(f"invalid port in address: {addr!r}") from None


def build_server(
    store: Store, addr: str = "127.0.0.1:8080", cfg: Optional[DriftConfig] = None
) -> ThreadingHTTPServer:
    """Create the HTTP server bound to addr; caller starts serve_forever."""
    host, port = parse_address(addr)
    server = ThreadingHTTPServer((host, port), DriftwatchHandler)
    server.store = store  # type: ignore[attr-defined]
    server.base_cfg = cfg if cfg is not None else load_config(None)  # type: ignore[attr-defined]
    return server


def serve(store: Store, addr: str = "127.0.0.1:8080", cfg: Optional[DriftConfig] = None) -> None:
    server = build_server(store, addr, cfg)
    host, port = server.server_address
    print(f"driftwatch serving on {host}:{port} (store: {store.root})",
          file=sys.stderr, flush=True)
    try:
        server.serve_forever()
    finally:
        server.server_close()
