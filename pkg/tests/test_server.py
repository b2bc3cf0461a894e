from __future__ import annotations

import pytest
from fastapi.testclient import TestClient

from logictutor.interventions import Condition
from logictutor.server import create_app
from logictutor.service import ManualClock, ServiceConfig, TutorService


@pytest.fixture()
def api(curriculum):
    clock = ManualClock()
    service = TutorService(
        curriculum,
        ServiceConfig(seed=1),
        clock=clock,
        assign_condition=lambda student, label, rng: Condition.EXPERIMENTAL,
    )
    client = TestClient(create_app(service))
    return client, clock


def create(client) -> str:
    response = client.post("/sessions", json={"student_id": "web"})
    assert response.status_code == 200
    body = response.json()
    assert body["phase"] == "Pretest"
    assert body["condition"] == "Unassigned"
    return body["session_id"]


def finish_problem(client, session_id: str) -> None:
    view = client.get(f"/sessions/{session_id}/problem").json()
    if view["worked_example"]:
        for _ in range(view["we_steps_total"]):
            client.post(f"/sessions/{session_id}/advance")
        client.post(f"/sessions/{session_id}/advance")
        return
    # All bundled pretest problems close with one two-premise step.
    from logictutor.formulas import parse
    from logictutor.prover import solve_from_premises

    premises = [parse(g) for g in view["givens"]]
    plan = solve_from_premises(premises, parse(view["target"]))
    for step in plan:
        response = client.post(
            f"/sessions/{session_id}/steps",
            json={"rule_name": step.rule_name, "parent_refs": list(step.parent_refs)},
        )
        assert response.json()["accepted"]
    client.post(f"/sessions/{session_id}/advance")


def test_session_problem_payload(api) -> None:
    client, _ = api
    session_id = create(client)
    view = client.get(f"/sessions/{session_id}/problem").json()
    assert view["problem_id"] == "pre_1"
    assert view["mode"] == "FC"
    assert view["givens"] == ["p -> q", "~q"]
    assert view["target"] == "~p"
    assert view["action_count"] == 0


def test_step_endpoint_accepts_and_reports(api) -> None:
    client, _ = api
    session_id = create(client)
    response = client.post(
        f"/sessions/{session_id}/steps", json={"rule_name": "MT", "parent_refs": ["g0", "g1"]}
    )
    assert response.json() == {"accepted": True, "completed": True}


def test_switch_endpoint_changes_target(api) -> None:
    client, _ = api
    session_id = create(client)
    response = client.post(f"/sessions/{session_id}/switch")
    body = response.json()
    assert body["mode"] == "BC"
    assert body["target"] == "_|_"
    view = client.get(f"/sessions/{session_id}/problem").json()
    assert view["givens"][-1] == "~~p"


def test_unknown_rule_code(api) -> None:
    client, _ = api
    session_id = create(client)
    response = client.post(
        f"/sessions/{session_id}/steps", json={"rule_name": "ZAP", "parent_refs": ["g0", "g1"]}
    )
    assert response.status_code == 409
    assert response.json()["code"] == "unknown-rule"


def test_unknown_session_404(api) -> None:
    client, _ = api
    response = client.get("/sessions/snope/problem")
    assert response.status_code == 404
    assert response.json()["code"] == "unknown-session"


def test_double_switch_conflict(api) -> None:
    client, _ = api
    session_id = create(client)
    client.post(f"/sessions/{session_id}/switch")
    response = client.post(f"/sessions/{session_id}/switch")
    assert response.status_code == 409
    assert response.json()["code"] == "already-in-bc"


def test_events_endpoint_since_cursor(api) -> None:
    client, _ = api
    session_id = create(client)
    first = client.get(f"/sessions/{session_id}/events").json()
    assert [r["event_type"] for r in first[:2]] == ["session_started", "problem_started"]
    last_seq = first[-1]["seq"]
    assert client.get(f"/sessions/{session_id}/events", params={"since": last_seq}).json() == []
    client.post(f"/sessions/{session_id}/steps", json={"rule_name": "MT", "parent_refs": ["g0", "g1"]})
    fresh = client.get(f"/sessions/{session_id}/events", params={"since": last_seq}).json()
    assert [r["event_type"] for r in fresh] == ["step_applied", "problem_completed"]


def test_prompt_delivered_via_poll_after_wait(api) -> None:
    client, clock = api
    session_id = create(client)
    finish_problem(client, session_id)
    finish_problem(client, session_id)
    # Experimental condition: two worked examples come first in training.
    view = client.get(f"/sessions/{session_id}/problem").json()
    assert view["worked_example"] is True
    finish_problem(client, session_id)  # t1_1 demonstration
    # t1_2 and t1_3 are not proper; play through to t1_4.
    finish_problem(client, session_id)
    finish_problem(client, session_id)
    view = client.get(f"/sessions/{session_id}/problem").json()
    assert view["problem_id"] == "t1_4"
    events = client.get(f"/sessions/{session_id}/events").json()
    started = [r for r in events if r["event_type"] == "problem_started"][-1]
    wait = started["payload"]["sampled_wait_s"]
    assert wait in (90.0, 180.0, 360.0)
    seq = events[-1]["seq"]
    assert client.get(f"/sessions/{session_id}/events", params={"since": seq}).json() == []
    clock.advance(wait + 2.0)
    polled = client.get(f"/sessions/{session_id}/events", params={"since": seq}).json()
    prompt_events = [r for r in polled if r["event_type"] == "prompt_shown"]
    assert len(prompt_events) == 1
    assert prompt_events[0]["payload"]["sampled_wait_s"] == wait
    assert view["prompt_pending"] is False


def test_report_endpoint_after_full_session(api) -> None:
    client, clock = api
    session_id = create(client)
    response = client.get(f"/sessions/{session_id}/report")
    assert response.status_code == 409
    while True:
        problem = client.get(f"/sessions/{session_id}/problem")
        if problem.status_code == 409:
            break
        clock.advance(3.0)
        finish_problem(client, session_id)
    report = client.get(f"/sessions/{session_id}/report").json()
    assert report["scores"]["pre"] == 100.0
    assert len(report["problems"]) == 28


def test_admin_analytics_endpoint(api) -> None:
    client, clock = api
    session_id = create(client)
    while True:
        problem = client.get(f"/sessions/{session_id}/problem")
        if problem.status_code == 409:
            break
        clock.advance(3.0)
        finish_problem(client, session_id)
    response = client.get("/admin/analytics", params={"phase": "training"})
    body = response.json()
    assert body["phase"] == "Training"
    assert "profiles" in body
