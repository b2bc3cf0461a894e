"""HTTP facade over :class:`TutorService`.

Bodies mirror the domain types field for field; kernel and service errors
surface as JSON with stable codes.  The app factory takes a configured
service so tests can drive it with a manual clock.
"""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from .curriculum import Phase
from .events import dumps_event
from .proofs import (
    AlreadyBackwardError,
    CompletedProblemError,
    DanglingReferenceError,
    ProofError,
)
from .rules import UnknownRuleError
from .service import ServiceError, TutorService

__all__ = ["create_app"]


class CreateSessionBody(BaseModel):
    student_id: str = Field(min_length=1)


class StepBody(BaseModel):
    rule_name: str
    parent_refs: list[str]


_ERROR_CODES = {
    UnknownRuleError: "unknown-rule",
    DanglingReferenceError: "dangling-reference",
    CompletedProblemError: "problem-completed",
    AlreadyBackwardError: "already-in-bc",
}


def _session_payload(session) -> dict:
    return {
        "session_id": session.session_id,
        "student_id": session.student_id,
        "phase": session.phase.value,
        "condition": session.condition.value,
        "problem_cursor": session.problem_cursor,
        "group_label": session.group_label.value if session.group_label else None,
    }


def create_app(service: TutorService) -> FastAPI:
    app = FastAPI(title="logictutor", docs_url=None, redoc_url=None)

    @app.exception_handler(ServiceError)
    async def on_service_error(request: Request, exc: ServiceError):
        status = 404 if exc.code == "unknown-session" else 409
        return JSONResponse(status_code=status, content={"code": exc.code, "message": str(exc)})

    @app.exception_handler(ProofError)
    async def on_proof_error(request: Request, exc: ProofError):
        code = _ERROR_CODES.get(type(exc), "proof-error")
        return JSONResponse(status_code=409, content={"code": code, "message": str(exc)})

    @app.exception_handler(UnknownRuleError)
    async def on_unknown_rule(request: Request, exc: UnknownRuleError):
        return JSONResponse(status_code=409, content={"code": "unknown-rule", "message": str(exc)})

    @app.post("/sessions")
    def create_session(body: CreateSessionBody):
        return _session_payload(service.create_session(body.student_id))

    @app.get("/sessions/{session_id}/problem")
    def get_problem(session_id: str):
        return service.get_problem(session_id)

    @app.post("/sessions/{session_id}/steps")
    def submit_step(session_id: str, body: StepBody):
        return service.submit_step(session_id, body.rule_name, body.parent_refs)

    @app.post("/sessions/{session_id}/switch")
    def switch(session_id: str):
        return service.switch(session_id)

    @app.post("/sessions/{session_id}/advance")
    def advance(session_id: str):
        return service.advance(session_id)

    @app.get("/sessions/{session_id}/events")
    def get_events(session_id: str, since: int = 0):
        records = service.get_events(session_id, since=since)
        import json

        return [json.loads(dumps_event(r)) for r in records]

    @app.get("/sessions/{session_id}/report")
    def report(session_id: str):
        return service.report(session_id)

    @app.get("/admin/analytics")
    def analytics(phase: str = "training"):
        wanted = Phase.TRAINING if phase.lower() == "training" else Phase.POSTTEST
        return service.analytics(wanted)

    return app
