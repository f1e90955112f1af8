"""HTTP facade for the companion UI.

Exposes chat-driven modification sessions plus stateless extraction,
diffing and DOT visualization. Sessions live in memory; an optional
on-disk store (one JSON file per session) survives restarts. Without
the store, a restart clears all sessions.

Endpoints::

    POST /sessions                  {"code": ...} -> {"sessionId": ...}
    POST /sessions/{id}/changes     {"request": ..., "withContext": bool}
    GET  /sessions/{id}/fsm         extracted document of the current code
    GET  /sessions/{id}/dot         DOT text of the current code
    POST /extract                   {"code": ...} -> document array
    POST /diff                      {"groundTruth": [...], "input": [...]}
    POST /viz                       {"document": [...], "groundTruth": [...]?}

Errors come back as ``{"code", "message", "detail"}``.
"""

from __future__ import annotations

import json
import threading
import time
import uuid
from dataclasses import dataclass, field
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse

from .agents import FsmAgents
from .diff import categorize, report_to_obj
from .dot import diff_overlay, to_dot
from .errors import ChatFsmError, GatewayError
from .harness import DEFAULT_RETRIEVAL_K
from .model import FsmDocument, document_to_obj, parse_fsm_json, validate_document
from .retrieval import ContextBundle, index_codebase, retrieve, wrap_context

MAX_UPLOAD_BYTES = 1 << 20


@dataclass
class Session:
    session_id: str
    current_code: str
    created_at: float
    history: list[dict] = field(default_factory=list)
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def to_obj(self) -> dict:
        return {
            "sessionId": self.session_id,
            "currentCode": self.current_code,
            "createdAt": self.created_at,
            "history": self.history,
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "Session":
        return cls(session_id=obj["sessionId"], current_code=obj["currentCode"],
                   created_at=obj["createdAt"], history=list(obj["history"]))


class SessionStore:
    """In-memory sessions with optional JSON-per-session persistence."""

    def __init__(self, directory: Path | None = None):
        self.directory = directory
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()
        if directory is not None:
            directory.mkdir(parents=True, exist_ok=True)

    def create(self, code: str) -> Session:
        session = Session(session_id=uuid.uuid4().hex, current_code=code,
                          created_at=time.time())
        with self._lock:
            self._sessions[session.session_id] = session
        self.persist(session)
        return session

    def get(self, session_id: str) -> Session | None:
        with self._lock:
            session = self._sessions.get(session_id)
        if session is None and self.directory is not None:
            path = self.directory / f"{session_id}.json"
            if path.is_file():
                session = Session.from_obj(json.loads(path.read_text(encoding="utf-8")))
                with self._lock:
                    self._sessions[session_id] = session
        return session

    def persist(self, session: Session) -> None:
        if self.directory is None:
            return
        path = self.directory / f"{session.session_id}.json"
        path.write_text(json.dumps(session.to_obj(), indent=2) + "\n",
                        encoding="utf-8")


class ServiceError(ChatFsmError):
    def __init__(self, status: int, code: str, message: str, detail: str = ""):
        self.status = status
        self.code = code
        self.detail = detail
        super().__init__(message)


def _error_response(status: int, code: str, message: str, detail: str = ""):
    return JSONResponse(status_code=status, content={
        "code": code, "message": message, "detail": detail,
    })


def create_app(agents: FsmAgents, *, codebase_dir: Path | None = None,
               session_dir: Path | None = None,
               retrieval_k: int = DEFAULT_RETRIEVAL_K) -> FastAPI:
    """Build the application around one agent suite.

    ``codebase_dir`` is the snapshot used for context retrieval when a
    change request arrives with the context flag set.
    """
    app = FastAPI(title="chatfsm", version="0.1.0")
    store = SessionStore(session_dir)
    dot_cache: dict[str, str] = {}
    doc_cache: dict[str, FsmDocument] = {}
    failed_extractions: dict[str, str] = {}

    @app.exception_handler(ServiceError)
    async def service_error_handler(request: Request, exc: ServiceError):
        return _error_response(exc.status, exc.code, str(exc), exc.detail)

    @app.exception_handler(GatewayError)
    async def gateway_error_handler(request: Request, exc: GatewayError):
        return _error_response(502, "gateway_error", "language model call failed",
                               str(exc))

    @app.exception_handler(ChatFsmError)
    async def toolkit_error_handler(request: Request, exc: ChatFsmError):
        return _error_response(422, "toolkit_error", "request could not be processed",
                               str(exc))

    def require_session(session_id: str) -> Session:
        session = store.get(session_id)
        if session is None:
            raise ServiceError(404, "session_not_found",
                               f"no session {session_id}")
        return session

    def extract_cached(code: str) -> FsmDocument:
        if code in doc_cache:
            return doc_cache[code]
        if code in failed_extractions:
            raise ServiceError(422, "extraction_failed",
                               "FSM extraction failed for the current code",
                               failed_extractions[code])
        try:
            doc = agents.extract_fsm(code)
        except ChatFsmError as exc:
            failed_extractions[code] = str(exc)
            raise
        report = validate_document(doc)
        if not report.valid:
            detail = "; ".join(issue.message for issue in report.errors())
            failed_extractions[code] = detail
            raise ServiceError(422, "extraction_invalid",
                               "extracted document failed validation", detail)
        doc_cache[code] = doc
        return doc

    def context_block_for(code: str, request_text: str) -> str:
        query = agents.context_query(f"{code}\n\n{request_text}")
        if codebase_dir is None:
            return wrap_context(ContextBundle(chunks=[]))
        index = index_codebase(codebase_dir)
        return wrap_context(retrieve(index, query, retrieval_k))

    @app.post("/sessions", status_code=201)
    def create_session(payload: dict):
        code = payload.get("code", "")
        if not isinstance(code, str) or not code.strip():
            raise ServiceError(400, "empty_code", "code must be nonempty text")
        if len(code.encode("utf-8")) > MAX_UPLOAD_BYTES:
            raise ServiceError(413, "code_too_large",
                               "code exceeds the 1 MiB upload limit")
        session = store.create(code)
        return {"sessionId": session.session_id, "createdAt": session.created_at}

    @app.post("/sessions/{session_id}/changes")
    def post_change(session_id: str, payload: dict):
        session = require_session(session_id)
        request_text = payload.get("request", "")
        if not isinstance(request_text, str) or not request_text.strip():
            raise ServiceError(400, "empty_request", "request must be nonempty text")
        with_context = bool(payload.get("withContext", False))
        with session.lock:
            old_code = session.current_code
            old_doc = extract_cached(old_code)
            context = context_block_for(old_code, request_text) if with_context else None
            reply_code = agents.modify_fsm(old_code, request_text, context=context)
            new_doc = extract_cached(reply_code)
            diff_report = categorize(old_doc, new_doc)
            dot = diff_overlay(old_doc, new_doc)
            entry = {
                "request": request_text,
                "withContext": with_context,
                "replyCode": reply_code,
                "diff": report_to_obj(diff_report),
            }
            session.history.append(entry)
            session.current_code = reply_code
            store.persist(session)
        return {
            "replyCode": reply_code,
            "fsm": document_to_obj(new_doc),
            "diff": report_to_obj(diff_report),
            "dot": dot,
        }

    @app.get("/sessions/{session_id}/fsm")
    def get_fsm(session_id: str):
        session = require_session(session_id)
        return document_to_obj(extract_cached(session.current_code))

    @app.get("/sessions/{session_id}/dot")
    def get_dot(session_id: str):
        session = require_session(session_id)
        code = session.current_code
        if code not in dot_cache:
            dot_cache[code] = to_dot(extract_cached(code))
        return PlainTextResponse(dot_cache[code])

    @app.post("/extract")
    def extract(payload: dict):
        code = payload.get("code", "")
        if not isinstance(code, str) or not code.strip():
            raise ServiceError(400, "empty_code", "code must be nonempty text")
        return document_to_obj(agents.extract_fsm(code))

    @app.post("/diff")
    def diff(payload: dict):
        try:
            ground_truth = parse_fsm_json(json.dumps(payload["groundTruth"]))
            input_doc = parse_fsm_json(json.dumps(payload["input"]))
        except KeyError as exc:
            raise ServiceError(400, "missing_field",
                               f"payload needs field {exc.args[0]!r}") from exc
        return report_to_obj(categorize(ground_truth, input_doc))

    @app.post("/viz")
    def viz(payload: dict):
        try:
            document = parse_fsm_json(json.dumps(payload["document"]))
        except KeyError as exc:
            raise ServiceError(400, "missing_field",
                               f"payload needs field {exc.args[0]!r}") from exc
        if "groundTruth" in payload:
            ground_truth = parse_fsm_json(json.dumps(payload["groundTruth"]))
            return PlainTextResponse(diff_overlay(ground_truth, document))
        return PlainTextResponse(to_dot(document))

    return app
