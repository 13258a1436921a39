"""Read-only HTTP JSON service over one loaded session.

One process serves one session; every handler is a pure read of the
immutable dataset, so concurrent requests need no locking. Responses to
identical requests are byte-identical.
"""

from __future__ import annotations

from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer
from urllib.parse import parse_qs, urlsplit

from .anomaly import anomaly_to_dict, mapped_anomalies, raw_anomalies
from .errors import EngineError, ParamError, QueryError
from .insights import build_timeline, fused_to_dict, render_doc, timeline_to_doc
from .session import QueryRequest, SessionDataset, run_query

ROUTES = ("/api/session", "/api/records", "/api/timeline", "/api/anomalies", "/api/query")


def _int_param(params: dict, key: str, default: int | None) -> int | None:
    raw = params.get(key)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ParamError(f"parameter {key!r} must be an integer, got {raw!r}") from None
    if value < 0:
        raise ParamError(f"parameter {key!r} must be non-negative, got {value}")
    return value


def _float_param(params: dict, key: str) -> float | None:
    raw = params.get(key)
    if raw is None or raw == "":
        return None
    try:
        return float(raw)
    except ValueError:
        raise ParamError(f"parameter {key!r} must be a number, got {raw!r}") from None


def _reject_unknown(params: dict, allowed: set, route: str) -> None:
    unknown = set(params) - allowed
    if unknown:
        raise ParamError(f"{route} does not accept: {', '.join(sorted(unknown))}")


def _make_handler(session: SessionDataset):
    class SessionHandler(BaseHTTPRequestHandler):
        server_version = "emofuse"
        protocol_version = "HTTP/1.1"

        def log_message(self, fmt, *args):
            pass  # tests and CLI runs stay quiet

        def do_GET(self):
            try:
                parts = urlsplit(self.path)
                params = {key: values[-1] for key, values in parse_qs(parts.query).items()}
                body = self._route(parts.path, params)
            except EngineError as exc:
                self._send(400, _error_body(exc.code, str(exc)))
            except Exception as exc:  # unexpected; never leak a stack trace
                self._send(500, _error_body("E_INTERNAL", f"{type(exc).__name__}: {exc}"))
            else:
                if body is None:
                    self._send(404, _error_body("E_ROUTE", f"unknown route {parts.path!r}"))
                else:
                    self._send(200, body)

        def _method_not_allowed(self):
            self._send(405, _error_body("E_METHOD", "this service is read-only; use GET"))

        do_POST = _method_not_allowed
        do_PUT = _method_not_allowed
        do_DELETE = _method_not_allowed
        do_PATCH = _method_not_allowed

        def _route(self, path: str, params: dict) -> dict | None:
            if path == "/api/session":
                _reject_unknown(params, set(), path)
                return session.metadata()

            if path == "/api/records":
                _reject_unknown(params, {"offset", "limit"}, path)
                offset = _int_param(params, "offset", 0)
                limit = _int_param(params, "limit", None)
                page = session.fused[offset: None if limit is None else offset + limit]
                rows = [fused_to_dict(offset + i, rec) for i, rec in enumerate(page)]
                body = {
                    "schema_version": 1,
                    "total": len(session.fused),
                    "offset": offset,
                    "rows": rows,
                }
                if limit is not None:
                    body["limit"] = limit
                return body

            if path == "/api/timeline":
                _reject_unknown(params, {"min_run"}, path)
                min_run = _float_param(params, "min_run")
                if session.frame_dominants is None:
                    raise QueryError("timeline is unavailable: session was loaded without frame data")
                if min_run is None:
                    timeline = list(session.timeline)
                    min_run = session.min_run_s
                else:
                    timeline = build_timeline(list(session.frame_dominants), min_run)
                body = timeline_to_doc(timeline)
                body["min_run_s"] = min_run
                return body

            if path == "/api/anomalies":
                _reject_unknown(params, {"mode", "include_neutral"}, path)
                mode = params.get("mode", "raw")
                records = list(session.fused)
                if mode == "raw":
                    if "include_neutral" in params:
                        raise ParamError("include_neutral only applies to mode=mapped")
                    rows = [anomaly_to_dict(a) for a in raw_anomalies(records)]
                    return {"schema_version": 1, "mode": "raw", "rows": rows}
                if mode == "mapped":
                    flag = params.get("include_neutral", "0")
                    if flag not in ("0", "1"):
                        raise ParamError(f"include_neutral must be 0 or 1, got {flag!r}")
                    include_neutral = flag == "1"
                    rows = [
                        anomaly_to_dict(a)
                        for a in mapped_anomalies(records, session.mapping, include_neutral)
                    ]
                    return {
                        "schema_version": 1,
                        "mode": "mapped",
                        "include_neutral": include_neutral,
                        "rows": rows,
                    }
                raise ParamError(f"mode must be raw or mapped, got {mode!r}")

            if path == "/api/query":
                name = params.pop("name", "").strip()
                if not name:
                    raise ParamError("query requires a name parameter")
                result = run_query(session, QueryRequest(name, params))
                return result.to_dict()

            return None

        def _send(self, status: int, body: dict) -> None:
            payload = render_doc(body).encode("utf-8")
            self.send_response(status)
            self.send_header("Content-Type", "application/json; charset=utf-8")
            self.send_header("Content-Length", str(len(payload)))
            self.send_header("Cache-Control", "no-store")
            self.send_header("Access-Control-Allow-Origin", "*")
            self.end_headers()
            self.wfile.write(payload)

    return SessionHandler


def _error_body(code: str, message: str) -> dict:
    return {"schema_version": 1, "error": {"code": code, "message": message}}


def make_server(session: SessionDataset, port: int = 0, host: str = "127.0.0.1") -> ThreadingHTTPServer:
    """Bind (port 0 picks a free one); the caller runs serve_forever()."""
    return ThreadingHTTPServer((host, port), _make_handler(session))
