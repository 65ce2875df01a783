"""HTTP elicitation service: serves the scenario, collects ranking sheets and
interval responses session by session, and exports analysis-ready datasets.

Sessions are one-shot: ranking first, then hop ratings, then the session is
submitted and immutable (no revision). Persistence is an append-only JSONL
log per session plus an index file; state is rebuilt by replaying the logs,
so a crash between requests loses at most the request in flight.
"""

from __future__ import annotations

import json
import os
import threading
import uuid
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Mapping

from fastapi import FastAPI, Header, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel

from .dataio import FORMAT_VERSION, scenario_to_json
from .model import Expert, Scenario, validate_scenario

RANKING = "ranking"
RATING = "rating"
SUBMITTED = "submitted"


class ServiceError(Exception):
    """An application-level failure rendered as a JSON problem document."""

    def __init__(self, status: int, code: str, message: str):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message


def _error(status: int, code: str, message: str) -> ServiceError:
    return ServiceError(status, code, message)


@dataclass
class Session:
    session_id: str
    expert_id: str
    created_at: str
    state: str = RANKING
    ranks: dict[str, int] = field(default_factory=dict)
    responses: dict[tuple[str, str], tuple[float, float]] = field(default_factory=dict)

    def view(self, required: int) -> dict[str, Any]:
        return {
            "session_id": self.session_id,
            "expert_id": self.expert_id,
            "state": self.state,
            "created_at": self.created_at,
            "answered": len(self.responses),
            "required": required,
        }


class SessionStore:
    """Append-only persistence: ``sessions.index`` plus one JSONL file per
    session under ``sessions/``. Every event is flushed and fsynced before the
    request returns."""

    def __init__(self, root: Path):
        self.root = Path(root)
        self.sessions_dir = self.root / "sessions"
        self.index_path = self.root / "sessions.index"
        self.sessions_dir.mkdir(parents=True, exist_ok=True)

    def _append(self, path: Path, record: Mapping[str, Any]) -> None:
        with open(path, "a", encoding="utf-8") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def append_created(self, session: Session) -> None:
        record = {
            "event": "created",
            "session_id": session.session_id,
            "expert_id": session.expert_id,
            "created_at": session.created_at,
        }
        # session file first, index second: an index entry always has a file
        self._append(self.session_path(session.session_id), record)
        self._append(self.index_path, record)

    def append_ranking(self, session_id: str, ranks: Mapping[str, int]) -> None:
        self._append(
            self.session_path(session_id),
            {"event": "ranking", "ranks": {k: ranks[k] for k in sorted(ranks)}},
        )

    def append_response(
        self, session_id: str, hop_id: str, question_id: str, lo: float, hi: float
    ) -> None:
        self._append(
            self.session_path(session_id),
            {"event": "response", "hop_id": hop_id, "question_id": question_id, "lo": lo, "hi": hi},
        )

    def session_path(self, session_id: str) -> Path:
        return self.sessions_dir / f"{session_id}.jsonl"

    def _read_lines(self, path: Path) -> Iterable[dict[str, Any]]:
        if not path.exists():
            return
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    yield json.loads(line)
                except json.JSONDecodeError:
                    return  # torn tail from a crash mid-append; ignore the rest

    def replay(self) -> list[Session]:
        sessions = []
        for entry in self._read_lines(self.index_path):
            session_id = entry.get("session_id")
            if not session_id:
                continue
            session = Session(
                session_id=session_id,
                expert_id=entry.get("expert_id", ""),
                created_at=entry.get("created_at", ""),
            )
            for event in self._read_lines(self.session_path(session_id)):
                kind = event.get("event")
                if kind == "ranking":
                    session.ranks = {str(k): int(v) for k, v in event.get("ranks", {}).items()}
                    session.state = RATING
                elif kind == "response":
                    key = (str(event["hop_id"]), str(event["question_id"]))
                    session.responses[key] = (float(event["lo"]), float(event["hi"]))
            sessions.append(session)
        return sessions


class SurveyService:
    """All survey behavior behind the HTTP layer; safe for concurrent use.

    Operations on one session are serialized by a per-session lock; the
    registry lock guards session creation and export snapshots.
    """

    def __init__(
        self,
        scenario: Scenario,
        experts: Iterable[Expert],
        store_dir: str | Path,
        admin_token: str | None = None,
    ):
        self.scenario = scenario
        self.experts = tuple(experts)
        violations = validate_scenario(scenario, experts=self.experts)
        if violations:
            raise ValueError(f"scenario invalid: {'; '.join(str(v) for v in violations)}")
        self.admin_token = admin_token
        self.store = SessionStore(Path(store_dir))
        self.required_pairs = frozenset(
            (hop.id, question.id) for hop in scenario.hops for question in scenario.questions
        )
        self._expert_ids = {e.id for e in self.experts}
        self._registry_lock = threading.Lock()
        self._locks: dict[str, threading.Lock] = {}
        self._sessions: dict[str, Session] = {}
        self._by_expert: dict[str, str] = {}
        for session in self.store.replay():
            if len(session.responses) == len(self.required_pairs) and session.state == RATING:
                session.state = SUBMITTED
            self._sessions[session.session_id] = session
            self._by_expert[session.expert_id] = session.session_id
            self._locks[session.session_id] = threading.Lock()

    # -- session operations ---------------------------------------------

    def create_session(self, expert_id: str) -> Session:
        if expert_id not in self._expert_ids:
            raise _error(404, "expert_not_found", f"unknown expert {expert_id!r}")
        with self._registry_lock:
            existing_id = self._by_expert.get(expert_id)
            if existing_id is not None:
                state = self._sessions[existing_id].state
                if state == SUBMITTED:
                    raise _error(
                        409,
                        "already_submitted",
                        f"expert {expert_id!r} already submitted session {existing_id}",
                    )
                raise _error(
                    409,
                    "session_exists",
                    f"expert {expert_id!r} already has open session {existing_id}",
                )
            session = Session(
                session_id=uuid.uuid4().hex,
                expert_id=expert_id,
                created_at=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            )
            self.store.append_created(session)
            self._sessions[session.session_id] = session
            self._by_expert[expert_id] = session.session_id
            self._locks[session.session_id] = threading.Lock()
            return session

    def _session_lock(self, session_id: str) -> tuple[Session, threading.Lock]:
        with self._registry_lock:
            session = self._sessions.get(session_id)
            if session is None:
                raise _error(404, "session_not_found", f"no session {session_id!r}")
            return session, self._locks[session_id]

    def get_session(self, session_id: str) -> dict[str, Any]:
        session, lock = self._session_lock(session_id)
        with lock:
            view = session.view(len(self.required_pairs))
            view["remaining"] = [
                {"hop_id": h, "question_id": q}
                for h, q in sorted(self.required_pairs - set(session.responses))
            ]
            return view

    def submit_ranking(self, session_id: str, ranks: Mapping[str, Any]) -> Session:
        session, lock = self._session_lock(session_id)
        with lock:
            if session.state != RANKING:
                raise _error(
                    409, "wrong_state", f"session is in state {session.state!r}, not {RANKING!r}"
                )
            av_ids = set(self.scenario.av_ids)
            if set(ranks) != av_ids:
                raise _error(
                    422,
                    "invalid_ranking",
                    "ranks must cover exactly the scenario's AV ids "
                    f"(missing {sorted(av_ids - set(ranks))}, "
                    f"unknown {sorted(set(ranks) - av_ids)})",
                )
            values = []
            for av_id, value in ranks.items():
                if isinstance(value, bool) or not isinstance(value, (int, float)) or value != int(value):
                    raise _error(422, "invalid_ranking", f"rank for {av_id!r} is not an integer")
                values.append(int(value))
            if sorted(values) != list(range(1, len(av_ids) + 1)):
                raise _error(
                    422,
                    "invalid_ranking",
                    f"ranks must form a permutation of 1..{len(av_ids)}",
                )
            clean = {av_id: int(value) for av_id, value in ranks.items()}
            self.store.append_ranking(session_id, clean)
            session.ranks = clean
            session.state = RATING
            return session

    def submit_interval(
        self, session_id: str, hop_id: str, question_id: str, lo: float, hi: float
    ) -> Session:
        session, lock = self._session_lock(session_id)
        with lock:
            if session.state != RATING:
                raise _error(
                    409, "wrong_state", f"session is in state {session.state!r}, not {RATING!r}"
                )
            if hop_id not in self.scenario.hop_by_id:
                raise _error(422, "unknown_hop", f"unknown hop {hop_id!r}")
            if question_id not in {q.id for q in self.scenario.questions}:
                raise _error(422, "unknown_question", f"unknown question {question_id!r}")
            if not (0.0 <= lo <= hi <= 100.0):
                raise _error(
                    422,
                    "invalid_interval",
                    f"interval must satisfy 0 <= lo <= hi <= 100, got [{lo}, {hi}]",
                )
            key = (hop_id, question_id)
            if key in session.responses:
                raise _error(
                    409,
                    "duplicate_response",
                    f"({hop_id}, {question_id}) was already answered; submissions are final",
                )
            self.store.append_response(session_id, hop_id, question_id, lo, hi)
            session.responses[key] = (float(lo), float(hi))
            if len(session.responses) == len(self.required_pairs):
                session.state = SUBMITTED
            return session

    # -- export -----------------------------------------------------------

    def export(self, include_partial: bool = False) -> dict[str, Any]:
        with self._registry_lock:
            snapshots = []
            for session_id in sorted(self._sessions):
                with self._locks[session_id]:
                    session = self._sessions[session_id]
                    snapshots.append(
                        (
                            session.expert_id,
                            session.state,
                            dict(session.ranks),
                            dict(session.responses),
                        )
                    )
        chosen = [
            s for s in snapshots if s[1] == SUBMITTED or (include_partial and (s[2] or s[3]))
        ]
        if not chosen:
            raise _error(
                409,
                "nothing_to_export",
                "no submitted sessions"
                + ("" if include_partial else " (pass include_partial=true for drafts)"),
            )
        chosen.sort(key=lambda s: s[0])
        rankings = [
            {"expert_id": expert_id, "ranks": {k: ranks[k] for k in sorted(ranks)}}
            for expert_id, _, ranks, _ in chosen
            if ranks
        ]
        responses = [
            {"expert_id": expert_id, "hop_id": h, "question_id": q, "lo": lo, "hi": hi}
            for expert_id, _, _, resp in chosen
            for (h, q), (lo, hi) in sorted(resp.items())
        ]
        return {
            "format_version": FORMAT_VERSION,
            "scenario": scenario_to_json(self.scenario),
            "experts": [
                {"id": e.id, "group_id": e.group_id, "is_reference": e.is_reference}
                for e in self.experts
            ],
            "rankings": rankings,
            "responses": responses,
        }


# -- HTTP layer -------------------------------------------------------------


class RankingBody(BaseModel):
    ranks: dict[str, int]


class ResponseBody(BaseModel):
    hop_id: str
    question_id: str
    lo: float
    hi: float


class CreateSessionBody(BaseModel):
    expert_id: str


def create_app(service: SurveyService) -> FastAPI:
    app = FastAPI(title="hoprank elicitation service")

    @app.exception_handler(ServiceError)
    def service_error_handler(request: Request, exc: ServiceError) -> JSONResponse:
        return JSONResponse(
            status_code=exc.status, content={"code": exc.code, "message": exc.message}
        )

    @app.exception_handler(RequestValidationError)
    def validation_error_handler(request: Request, exc: RequestValidationError) -> JSONResponse:
        return JSONResponse(
            status_code=422, content={"code": "invalid_request", "message": str(exc.errors())}
        )

    @app.get("/scenario")
    def get_scenario() -> dict[str, Any]:
        return {
            "scenario": scenario_to_json(service.scenario),
            "experts": [
                {"id": e.id, "group_id": e.group_id} for e in service.experts
            ],
        }

    @app.post("/sessions", status_code=201)
    def post_session(body: CreateSessionBody) -> dict[str, Any]:
        session = service.create_session(body.expert_id)
        return session.view(len(service.required_pairs))

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str) -> dict[str, Any]:
        return service.get_session(session_id)

    @app.post("/sessions/{session_id}/ranking")
    def post_ranking(session_id: str, body: RankingBody) -> dict[str, Any]:
        session = service.submit_ranking(session_id, body.ranks)
        return session.view(len(service.required_pairs))

    @app.post("/sessions/{session_id}/responses")
    def post_response(session_id: str, body: ResponseBody) -> dict[str, Any]:
        session = service.submit_interval(
            session_id, body.hop_id, body.question_id, body.lo, body.hi
        )
        return session.view(len(service.required_pairs))

    @app.get("/export")
    def get_export(
        include_partial: bool = Query(default=False),
        x_admin_token: str | None = Header(default=None),
    ) -> dict[str, Any]:
        if service.admin_token is not None and x_admin_token != service.admin_token:
            raise _error(401, "unauthorized", "missing or wrong X-Admin-Token header")
        return service.export(include_partial=include_partial)

    return app
