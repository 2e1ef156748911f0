"""Minimal HTTP/JSON facade over fit, rollout, and correct for the browser UI.

Endpoints (all bodies and responses are JSON):

    POST /sessions                       -> {"id": ...}
    POST /sessions/{id}/trajectories     body {name, dt, samples[][]}
    POST /sessions/{id}/fit              body {trajectory, n_basis?, gains?, name?}
    POST /sessions/{id}/rollout          body {dmp: name|document, start?, dt?, duration?}
    POST /sessions/{id}/correct          body {deficient, corrective, cut, lambda?,
                                               n_basis?, gains?, name?}
    GET  /sessions/{id}                  -> inventory

Statuses: 200 on success, 400 for malformed requests, 404 for unknown
sessions, 422 for validation failures (with a machine-readable reason), 500
for solver failures. Sessions live in memory only, expire after a TTL, and
are capped in number; all numeric state is immutable, so concurrent requests
only contend on the session table lock.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
import threading
import time
import uuid
from dataclasses import dataclass, field
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import numpy as np

from .blend import BlendConfig
from .correction import CorrectionRequest, correct
from .dmp import DmpParams, fit, rollout
from .errors import InstabilityError, ParseError, SolverError
from .io import dmp_from_document, dmp_to_document
from .trajectory import Trajectory

__all__ = ["SessionStore", "make_server", "serve", "main"]

DEFAULT_TTL_SECONDS = 3600.0
DEFAULT_MAX_SESSIONS = 64


@dataclass
class Session:
    id: str
    created_at: float
    trajectories: dict[str, Trajectory] = field(default_factory=dict)
    dmps: dict[str, DmpParams] = field(default_factory=dict)


class SessionStore:
    """In-memory session table with TTL expiry and a size cap.

    When the cap is hit after expired sessions are dropped, the oldest
    session is evicted; this is a workbench, not a database.
    """

    def __init__(self, ttl: float = DEFAULT_TTL_SECONDS, cap: int = DEFAULT_MAX_SESSIONS):
        self._ttl = ttl
        self._cap = cap
        self._lock = threading.Lock()
        self._sessions: dict[str, Session] = {}

    def _purge_locked(self) -> None:
        now = time.monotonic()
        expired = [sid for sid, s in self._sessions.items() if now - s.created_at > self._ttl]
        for sid in expired:
            del self._sessions[sid]

    def create(self) -> Session:
        with self._lock:
            self._purge_locked()
            while len(self._sessions) >= self._cap:
                oldest = min(self._sessions.values(), key=lambda s: s.created_at)
                del self._sessions[oldest.id]
            session = Session(id=uuid.uuid4().hex, created_at=time.monotonic())
            self._sessions[session.id] = session
            return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            self._purge_locked()
            return self._sessions.get(session_id)


class _HttpError(Exception):
    def __init__(self, status: int, code: str, reason: str):
        super().__init__(reason)
        self.status = status
        self.code = code
        self.reason = reason


_SESSION_ROUTE = re.compile(r"^/sessions/([0-9a-f]{32})(?:/(trajectories|fit|rollout|correct))?$")


class _Handler(BaseHTTPRequestHandler):
    server_version = "dmpkit"
    protocol_version = "HTTP/1.1"

    # the store is attached to the server object by make_server()
    @property
    def store(self) -> SessionStore:
        return self.server.store  # type: ignore[attr-defined]

    def log_message(self, format: str, *args) -> None:  # keep stdout clean
        pass

    def _reply(self, status: int, payload: dict) -> None:
        body = json.dumps(payload).encode("utf-8")
        self.send_response(status)
        self.send_header("Content-Type", "application/json")
        self.send_header("Content-Length", str(len(body)))
        self.end_headers()
        self.wfile.write(body)

    def _fail(self, status: int, code: str, reason: str) -> None:
        self._reply(status, {"error": {"code": code, "reason": reason}})

    def _read_body(self) -> dict:
        content_type = self.headers.get("Content-Type", "")
        if "application/json" not in content_type:
            raise _HttpError(400, "content-type", "Content-Type must be application/json")
        try:
            length = int(self.headers.get("Content-Length", "0"))
        except ValueError:
            raise _HttpError(400, "content-length", "invalid Content-Length") from None
        raw = self.rfile.read(length) if length else b""
        if not raw:
            return {}
        try:
            body = json.loads(raw)
        except json.JSONDecodeError as exc:
            raise _HttpError(400, "json", f"body is not valid JSON: {exc}") from None
        if not isinstance(body, dict):
            raise _HttpError(400, "json", "body must be a JSON object")
        return body

    def _session(self, session_id: str) -> Session:
        session = self.store.get(session_id)
        if session is None:
            raise _HttpError(404, "session", f"unknown session {session_id}")
        return session

    def do_POST(self) -> None:
        try:
            if self.path == "/sessions":
                self._read_body()
                session = self.store.create()
                self._reply(200, {"id": session.id})
                return
            match = _SESSION_ROUTE.match(self.path)
            if not match or match.group(2) is None:
                raise _HttpError(404, "route", f"no such endpoint {self.path}")
            session = self._session(match.group(1))
            body = self._read_body()
            handler = {
                "trajectories": self._post_trajectory,
                "fit": self._post_fit,
                "rollout": self._post_rollout,
                "correct": self._post_correct,
            }[match.group(2)]
            handler(session, body)
        except _HttpError as exc:
            self._fail(exc.status, exc.code, exc.reason)
        except (ParseError, ValueError) as exc:
            self._fail(422, "validation", str(exc))
        except (InstabilityError, SolverError) as exc:
            self._fail(500, "solver", str(exc))

    def do_GET(self) -> None:
        try:
            match = _SESSION_ROUTE.match(self.path)
            if not match or match.group(2) is not None:
                raise _HttpError(404, "route", f"no such endpoint {self.path}")
            session = self._session(match.group(1))
            self._reply(200, {
                "id": session.id,
                "trajectories": {
                    name: {"n_samples": t.n_samples, "dims": t.dims, "dt": t.dt}
                    for name, t in sorted(session.trajectories.items())
                },
                "dmps": {
                    name: {"dims": p.dims, "n_basis": p.n_basis, "tau": p.tau}
                    for name, p in sorted(session.dmps.items())
                },
            })
        except _HttpError as exc:
            self._fail(exc.status, exc.code, exc.reason)

    # ---- endpoint bodies ----

    def _post_trajectory(self, session: Session, body: dict) -> None:
        name = _require_str(body, "name")
        dt = _require_number(body, "dt")
        if "samples" not in body:
            raise _HttpError(422, "validation", "missing field 'samples'")
        traj = Trajectory(np.array(body["samples"], dtype=float), dt)
        session.trajectories[name] = traj
        self._reply(200, {"stored": name, "n_samples": traj.n_samples, "dims": traj.dims})

    def _post_fit(self, session: Session, body: dict) -> None:
        demo = self._lookup_trajectory(session, _require_str(body, "trajectory"))
        gains = _gains(body)
        params = fit(
            demo,
            n_basis=int(body.get("n_basis", 50)),
            tau=gains.pop("tau"),
            **gains,
        )
        if "name" in body:
            session.dmps[_require_str(body, "name")] = params
        self._reply(200, dmp_to_document(params))

    def _post_rollout(self, session: Session, body: dict) -> None:
        if "dmp" not in body:
            raise _HttpError(422, "validation", "missing field 'dmp'")
        source = body["dmp"]
        if isinstance(source, str):
            if source not in session.dmps:
                raise _HttpError(422, "unknown-dmp", f"no stored primitive named {source!r}")
            params = session.dmps[source]
        else:
            params = dmp_from_document(source)
        start = np.array(body["start"], dtype=float) if "start" in body else None
        traj = rollout(
            params,
            y_start=start,
            dt=float(body.get("dt", 0.004)),
            duration=float(body["duration"]) if "duration" in body else None,
        )
        self._reply(200, {"dt": traj.dt, "samples": traj.samples.tolist()})

    def _post_correct(self, session: Session, body: dict) -> None:
        deficient = self._lookup_trajectory(session, _require_str(body, "deficient"))
        corrective = self._lookup_trajectory(session, _require_str(body, "corrective"))
        if "cut" not in body or isinstance(body["cut"], bool) or not isinstance(body["cut"], int):
            raise _HttpError(422, "validation", "field 'cut' must be an integer sample index")
        gains = _gains(body)
        gains.pop("tau")  # the merged duration sets the time constant
        request = CorrectionRequest(
            deficient=deficient,
            corrective=corrective,
            corrective_cut=body["cut"],
            blend=BlendConfig(lam=float(body.get("lambda", 1.0))),
            n_basis=int(body.get("n_basis", 50)),
            **gains,
        )
        outcome = correct(request)
        if "name" in body:
            session.dmps[_require_str(body, "name")] = outcome.modified_dmp
        diag = outcome.diagnostics
        self._reply(200, {
            "merged": {"dt": outcome.merged.dt, "samples": outcome.merged.samples.tolist()},
            "dmp": dmp_to_document(outcome.modified_dmp),
            "split": {
                "M": outcome.split.deficient_cut + 1,
                "d_m": outcome.split.min_distance,
                "junction_index": diag.junction_index,
                "corrective_cut": outcome.split.corrective_cut,
            },
            "diagnostics": {
                "max_step": diag.max_step,
                "junction_max_second_diff": diag.junction_max_second_diff,
                "blend_objective": diag.blend_objective,
                "blend_position_residual": diag.blend_position_residual,
                "blend_direction_residual": diag.blend_direction_residual,
                "blend_solve_ms": 1e3 * diag.blend_solve_seconds,
            },
        })

    def _lookup_trajectory(self, session: Session, name: str) -> Trajectory:
        if name not in session.trajectories:
            raise _HttpError(422, "unknown-trajectory", f"no stored trajectory named {name!r}")
        return session.trajectories[name]


def _require_str(body: dict, key: str) -> str:
    value = body.get(key)
    if not isinstance(value, str) or not value:
        raise _HttpError(422, "validation", f"field {key!r} must be a non-empty string")
    return value


def _require_number(body: dict, key: str) -> float:
    value = body.get(key)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise _HttpError(422, "validation", f"field {key!r} must be a number")
    return float(value)


def _gains(body: dict) -> dict:
    gains = body.get("gains", {})
    if not isinstance(gains, dict):
        raise _HttpError(422, "validation", "field 'gains' must be an object")
    unknown = gains.keys() - {"tau", "alpha_z", "beta_z", "alpha_x"}
    if unknown:
        raise _HttpError(422, "validation", f"unknown gains: {sorted(unknown)}")
    return {
        "tau": float(gains["tau"]) if "tau" in gains else None,
        "alpha_z": float(gains.get("alpha_z", 25.0)),
        "beta_z": float(gains.get("beta_z", 6.25)),
        "alpha_x": float(gains.get("alpha_x", 1.0)),
    }


def make_server(host: str = "127.0.0.1", port: int = 8080,
                ttl: float = DEFAULT_TTL_SECONDS, cap: int = DEFAULT_MAX_SESSIONS) -> ThreadingHTTPServer:
    server = ThreadingHTTPServer((host, port), _Handler)
    server.daemon_threads = True
    server.store = SessionStore(ttl=ttl, cap=cap)  # type: ignore[attr-defined]
    return server


def serve(host: str = "127.0.0.1", port: int = 8080) -> None:
    server = make_server(host, port)
    print(f"dmpkit service listening on http://{host}:{server.server_address[1]}", file=sys.stderr)
    try:
        server.serve_forever()
    except KeyboardInterrupt:
        pass
    finally:
        server.server_close()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="dmpkit-service", description=__doc__)
    parser.add_argument("--host", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    args = parser.parse_args(argv)
    serve(args.host, args.port)
    return 0


if __name__ == "__main__":
    sys.exit(main())
