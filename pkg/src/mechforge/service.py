"""HTTP service exposing design sessions, recommendations and grading.

Sessions live in memory with idle expiry. Mutations carry the client's
revision and are serialized per session; a mismatch answers 409, so one
winner emerges from concurrent edits. The catalog and rule bases are
shared immutably across sessions.
"""
from __future__ import annotations

import threading
import time
from dataclasses import dataclass, field
from fractions import Fraction

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .catalog import Catalog, ElementItem, InteractionItem
from .grader import Rubric, ScoreReport, grade
from .miner.apriori import RuleBase
from .recommender import (
    DesignError,
    DesignSession,
    MissingElements,
    NotFound,
    Recommendation,
    StaleRecommendation,
    StaleRuleBase,
)
from .vgdl import GameDescription, ParseError, Scalar, parse_description, render_description

API_PREFIX = "/api/v1"
MEDIA_TYPE = "application/vnd.mechforge.v1+json"
DEFAULT_SESSION_TTL = 3600.0


class ApiResponse(JSONResponse):
    media_type = MEDIA_TYPE


class ApiError(Exception):
    def __init__(self, status: int, code: str, message: str, line: int | None = None):
        super().__init__(message)
        self.status = status
        self.code = code
        self.message = message
        self.line = line

    def response(self) -> ApiResponse:
        body = {"code": self.code, "message": self.message}
        if self.line is not None:
            body["line"] = self.line
        return ApiResponse(body, status_code=self.status)


@dataclass
class SessionEntry:
    session: DesignSession
    lock: threading.Lock = field(default_factory=threading.Lock)
    created_at: float = field(default_factory=time.monotonic)
    last_access: float = field(default_factory=time.monotonic)


class SessionStore:
    """Counter-based ids keep the API byte-deterministic for a fixed
    request sequence."""

    def __init__(self, ttl: float):
        self.ttl = ttl
        self._entries: dict[str, SessionEntry] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def create(self, session_factory) -> SessionEntry:
        with self._lock:
            self._purge()
            self._counter += 1
            session_id = f"s{self._counter:06d}"
            entry = SessionEntry(session_factory(session_id))
            self._entries[session_id] = entry
            return entry

    def get(self, session_id: str) -> SessionEntry:
        with self._lock:
            self._purge()
            entry = self._entries.get(session_id)
            if entry is None:
                raise ApiError(404, "unknown-session", f"no session {session_id!r}")
            entry.last_access = time.monotonic()
            return entry

    def _purge(self) -> None:
        now = time.monotonic()
        expired = [sid for sid, e in self._entries.items()
                   if now - e.last_access > self.ttl]
        for sid in expired:
            del self._entries[sid]


# ── payload shaping ───────────────────────────────────────────────────


def _fraction_fields(name: str, value: Fraction) -> dict:
    return {name: float(value), f"{name}_exact": str(value)}


def _item_payload(item: ElementItem | InteractionItem) -> dict:
    if isinstance(item, ElementItem):
        return {"kind": "element", "behavior": item.behavior, "params": item.params_dict()}
    return {
        "kind": "interaction",
        "first": {"behavior": item.first.behavior, "params": item.first.params_dict()},
        "second": {"behavior": item.second.behavior, "params": item.second.params_dict()},
        "effect": item.effect,
    }


def _recommendation_payload(rec: Recommendation) -> dict:
    payload = {
        "id": rec.rec_id,
        "kind": rec.kind,
        "label": rec.item.label(),
        "item": _item_payload(rec.item),
        **_fraction_fields("confidence", rec.confidence),
        **_fraction_fields("support", rec.support),
        "origin": rec.origin,
        "provenance": rec.provenance,
        "source_rule": None,
        "revision": rec.revision,
    }
    if rec.source_rule is not None:
        payload["source_rule"] = {
            "antecedent": list(rec.source_rule.antecedent),
            "consequent": list(rec.source_rule.consequent),
        }
    return payload


def _design_payload(session: DesignSession) -> dict:
    design: GameDescription = session.design
    return {
        "session_id": session.session_id,
        "revision": session.revision,
        "name": design.name,
        "source": render_description(design),
        "elements": [
            {"identifier": s.identifier, "behavior": s.behavior,
             "params": dict(s.params), "parent": s.parent}
            for s in design.sprites
        ],
        "interactions": [
            {"index": i, "first": d.first, "second": d.second,
             "effect": d.effect, "params": dict(d.params)}
            for i, d in enumerate(design.interactions)
        ],
        "terminations": [
            {"kind": t.kind, "params": dict(t.params), "win": t.win}
            for t in design.terminations
        ],
        "level_mapping": {c: list(names) for c, names in design.level_mapping.items()},
        "unknown_items": [item.label() for item in session.unknown_items],
    }


def _score_payload(rubric_name: str, report: ScoreReport) -> dict:
    return {
        "rubric": rubric_name,
        "total": report.total,
        "max_score": report.max_score,
        "runnable": report.runnable,
        "failure": report.failure,
        "per_rule": [
            {"rule": o.rule_label, "matched": o.matched, "matched_by": o.matched_by}
            for o in report.per_rule
        ],
    }


# ── request bodies ────────────────────────────────────────────────────


class CreateSessionRequest(BaseModel):
    design: str | None = None


class AddElementRequest(BaseModel):
    revision: int
    recommendation_id: str | None = None
    behavior: str | None = None
    params: dict[str, int | float | str] = Field(default_factory=dict)


class AddInteractionRequest(BaseModel):
    revision: int
    recommendation_id: str | None = None
    first: str | None = None
    second: str | None = None
    effect: str | None = None
    params: dict[str, int | float | str] = Field(default_factory=dict)


class GradeRequest(BaseModel):
    source: str
    rubric: str = "space_invaders"


# ── application ───────────────────────────────────────────────────────


def create_app(
    catalog: Catalog,
    element_rules: RuleBase,
    interaction_rules: RuleBase,
    rubrics: dict[str, Rubric],
    session_ttl: float = DEFAULT_SESSION_TTL,
    ui_dir: str | None = None,
) -> FastAPI:
    expected = catalog.fingerprint
    for base in (element_rules, interaction_rules):
        if base.fingerprint != expected:
            raise StaleRuleBase("rule bases do not match the catalog; re-run mining")

    app = FastAPI(title="mechforge", default_response_class=ApiResponse)
    store = SessionStore(session_ttl)

    def new_session(session_id: str) -> DesignSession:
        return DesignSession(session_id, catalog, element_rules, interaction_rules)

    @app.exception_handler(ApiError)
    async def handle_api_error(request: Request, exc: ApiError):
        return exc.response()

    @app.exception_handler(RequestValidationError)
    async def handle_validation_error(request: Request, exc: RequestValidationError):
        return ApiError(400, "invalid-body", str(exc.errors())).response()

    def _translate(exc: Exception) -> ApiError:
        if isinstance(exc, ParseError):
            return ApiError(400, f"parse-error:{exc.code}", exc.message, line=exc.line)
        if isinstance(exc, StaleRecommendation):
            return ApiError(409, "stale-recommendation", str(exc))
        if isinstance(exc, MissingElements):
            return ApiError(409, "missing-elements", str(exc))
        if isinstance(exc, NotFound):
            return ApiError(404, "not-found", str(exc))
        if isinstance(exc, DesignError):
            return ApiError(400, "invalid-design", str(exc))
        if isinstance(exc, StaleRuleBase):
            return ApiError(503, "rebuild-required", str(exc))
        raise exc

    def _check_revision(session: DesignSession, revision: int) -> None:
        if revision != session.revision:
            raise ApiError(
                409, "revision-conflict",
                f"request revision {revision} does not match session revision "
                f"{session.revision}")

    def _recommend(session: DesignSession, kind: str, limit: int) -> list[Recommendation]:
        if kind == "element":
            return session.recommend_elements(limit)
        if kind == "interaction":
            return session.recommend_interactions(limit)
        raise ApiError(400, "bad-request", f"kind must be element or interaction, got {kind!r}")

    def _find_recommendation(session: DesignSession, rec_id: str) -> Recommendation:
        kind = rec_id.split(":", 1)[0]
        everything = len(catalog.element_items) + len(catalog.interaction_items)
        for rec in _recommend(session, kind, everything):
            if rec.rec_id == rec_id:
                return rec
        raise ApiError(404, "unknown-recommendation",
                       f"{rec_id!r} is not currently recommended")

    @app.get(f"{API_PREFIX}/health")
    def health():
        return {
            "status": "ok",
            "api_version": "v1",
            "catalog_fingerprint": expected,
            "corpus_size": len(catalog.games),
            "element_items": len(catalog.element_items),
            "interaction_items": len(catalog.interaction_items),
        }

    @app.post(f"{API_PREFIX}/sessions", status_code=201)
    def create_session(payload: CreateSessionRequest | None = None):
        if payload is not None and payload.design is not None:
            try:
                design = parse_description(payload.design, name="design")
            except ParseError as exc:
                raise _translate(exc)
            entry = store.create(lambda sid: DesignSession(
                sid, catalog, element_rules, interaction_rules, design=design))
        else:
            entry = store.create(new_session)
        return _design_payload(entry.session)

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/design")
    def get_design(session_id: str):
        entry = store.get(session_id)
        return _design_payload(entry.session)

    @app.get(f"{API_PREFIX}/sessions/{{session_id}}/recommendations")
    def get_recommendations(session_id: str, kind: str = "element", limit: int = 10):
        if limit < 1:
            raise ApiError(400, "bad-request", f"limit must be positive, got {limit}")
        entry = store.get(session_id)
        try:
            recs = _recommend(entry.session, kind, limit)
        except StaleRuleBase as exc:
            raise _translate(exc)
        return {
            "session_id": session_id,
            "revision": entry.session.revision,
            "kind": kind,
            "recommendations": [_recommendation_payload(r) for r in recs],
        }

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/elements")
    def add_element(session_id: str, payload: AddElementRequest):
        entry = store.get(session_id)
        with entry.lock:
            session = entry.session
            _check_revision(session, payload.revision)
            try:
                if payload.recommendation_id is not None:
                    rec = _find_recommendation(session, payload.recommendation_id)
                    if rec.kind != "element":
                        raise ApiError(400, "bad-request",
                                       f"{rec.rec_id!r} is not an element recommendation")
                    identifier = session.apply_recommendation(rec)
                elif payload.behavior is not None:
                    identifier = session.add_element(payload.behavior, payload.params)
                else:
                    raise ApiError(400, "bad-request",
                                   "provide behavior or recommendation_id")
            except (StaleRecommendation, MissingElements, DesignError) as exc:
                raise _translate(exc)
            return {"identifier": identifier, **_design_payload(session)}

    @app.delete(f"{API_PREFIX}/sessions/{{session_id}}/elements/{{name}}")
    def delete_element(session_id: str, name: str, revision: int):
        entry = store.get(session_id)
        with entry.lock:
            session = entry.session
            _check_revision(session, revision)
            try:
                session.remove_element(name)
            except NotFound as exc:
                raise _translate(exc)
            return _design_payload(session)

    @app.post(f"{API_PREFIX}/sessions/{{session_id}}/interactions")
    def add_interaction(session_id: str, payload: AddInteractionRequest):
        entry = store.get(session_id)
        with entry.lock:
            session = entry.session
            _check_revision(session, payload.revision)
            try:
                if payload.recommendation_id is not None:
                    rec = _find_recommendation(session, payload.recommendation_id)
                    if rec.kind != "interaction":
                        raise ApiError(400, "bad-request",
                                       f"{rec.rec_id!r} is not an interaction recommendation")
                    index = session.apply_recommendation(rec)
                elif payload.first and payload.second and payload.effect:
                    index = session.add_interaction(
                        payload.first, payload.second, payload.effect, payload.params)
                else:
                    raise ApiError(400, "bad-request",
                                   "provide first+second+effect or recommendation_id")
            except (StaleRecommendation, MissingElements, DesignError) as exc:
                raise _translate(exc)
            return {"index": index, **_design_payload(session)}

    @app.delete(f"{API_PREFIX}/sessions/{{session_id}}/interactions/{{index}}")
    def delete_interaction(session_id: str, index: int, revision: int):
        entry = store.get(session_id)
        with entry.lock:
            session = entry.session
            _check_revision(session, revision)
            try:
                session.remove_interaction(index)
            except NotFound as exc:
                raise _translate(exc)
            return _design_payload(session)

    @app.post(f"{API_PREFIX}/grade")
    def grade_submission(payload: GradeRequest):
        rubric = rubrics.get(payload.rubric)
        if rubric is None:
            raise ApiError(404, "unknown-rubric",
                           f"no rubric named {payload.rubric!r}")
        report = grade(payload.source, rubric)
        return _score_payload(payload.rubric, report)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app
