from __future__ import annotations

import pytest

from logictutor.classifier import GroupLabel
from logictutor.curriculum import Phase
from logictutor.events import EventType
from logictutor.interventions import Condition
from logictutor.service import ManualClock, ServiceConfig, ServiceError, TutorService, group_key


def make_service(curriculum, condition: Condition | None = None, seed: int = 0):
    clock = ManualClock()
    assign = (lambda student, label, rng: condition) if condition is not None else None
    service = TutorService(curriculum, ServiceConfig(seed=seed), clock=clock, assign_condition=assign)
    return service, clock


def solve_current_problem(service: TutorService, session_id: str) -> None:
    """Drive the current problem to completion with prover steps."""
    from logictutor.formulas import parse
    from logictutor.prover import solve_from_premises

    view = service.get_problem(session_id)
    premises = [parse(g) for g in view["givens"]]
    nodes = [parse(n["formula"]) for n in view["nodes"]]
    plan = solve_from_premises(premises + nodes, parse(view["target"]))
    assert plan is not None
    offset = len(premises)
    existing = len(nodes)
    for step in plan:
        refs = []
        for ref in step.parent_refs:
            kind, index = ref[0], int(ref[1:])
            if kind == "g" and index >= offset:
                refs.append(f"n{index - offset}")
            elif kind == "g":
                refs.append(ref)
            else:
                refs.append(f"n{existing + index}")
        outcome = service.submit_step(session_id, step.rule_name, refs)
        assert outcome["accepted"]


def complete_pretest(service: TutorService, session_id: str) -> None:
    for _ in range(2):
        solve_current_problem(service, session_id)
        service.advance(session_id)


def test_create_session_initial_state(curriculum) -> None:
    service, _ = make_service(curriculum)
    session = service.create_session("alice")
    assert session.phase is Phase.PRETEST
    assert session.problem_cursor == 0
    assert session.condition is Condition.UNASSIGNED
    events = service.get_events(session.session_id)
    assert events[0].event_type == EventType.SESSION_STARTED
    assert events[1].event_type == EventType.PROBLEM_STARTED


def test_duplicate_active_session_rejected(curriculum) -> None:
    service, _ = make_service(curriculum)
    service.create_session("alice")
    with pytest.raises(ServiceError, match="active session"):
        service.create_session("alice")


def test_premature_condition_assignment_guarded(curriculum) -> None:
    service, _ = make_service(curriculum)
    session = service.create_session("alice")
    with pytest.raises(ServiceError):
        service._assign_condition(session)


def test_step_and_completion_events(curriculum) -> None:
    service, _ = make_service(curriculum)
    session = service.create_session("alice")
    outcome = service.submit_step(session.session_id, "MT", ["g0", "g1"])
    assert outcome == {"accepted": True, "completed": True}
    types = [r.event_type for r in service.get_events(session.session_id)]
    assert types[-2:] == [EventType.STEP_APPLIED, EventType.PROBLEM_COMPLETED]


def test_rejected_step_event(curriculum) -> None:
    service, _ = make_service(curriculum)
    session = service.create_session("alice")
    outcome = service.submit_step(session.session_id, "MP", ["g0", "g1"])
    assert outcome["accepted"] is False
    assert service.get_events(session.session_id)[-1].event_type == EventType.STEP_REJECTED


def test_advance_requires_completion(curriculum) -> None:
    service, _ = make_service(curriculum)
    session = service.create_session("alice")
    with pytest.raises(ServiceError, match="finish the proof"):
        service.advance(session.session_id)


def test_condition_assigned_after_pretest(curriculum) -> None:
    service, _ = make_service(curriculum, seed=3)
    session = service.create_session("rote_like")
    complete_pretest(service, session.session_id)
    assert session.phase is Phase.TRAINING
    assert session.condition in (Condition.EXPERIMENTAL, Condition.CONTROL)
    assert session.group_label is GroupLabel.ROTE
    phase_events = [r for r in session.events if r.event_type == EventType.PHASE_ADVANCED]
    assert phase_events[0].payload["to_phase"] == "Training"
    assert phase_events[0].payload["condition"] == session.condition.value


def test_selective_label_routes_to_original(curriculum) -> None:
    service, clock = make_service(curriculum)
    session = service.create_session("switchy")
    # Switch early on problem 1, then solve in BC.
    service.switch(session.session_id)
    solve_current_problem(service, session.session_id)
    service.advance(session.session_id)
    solve_current_problem(service, session.session_id)
    service.advance(session.session_id)
    assert session.group_label is GroupLabel.SELECTIVE
    assert session.condition is Condition.SELECTIVE_ORIGINAL


def test_switch_during_we_playback_rejected(curriculum) -> None:
    service, _ = make_service(curriculum, condition=Condition.EXPERIMENTAL)
    session = service.create_session("alice")
    complete_pretest(service, session.session_id)
    view = service.get_problem(session.session_id)
    assert view["worked_example"] is True
    with pytest.raises(ServiceError) as info:
        service.switch(session.session_id)
    assert info.value.code == "we-playback-active"
    with pytest.raises(ServiceError) as info:
        service.submit_step(session.session_id, "MP", ["g0", "g1"])
    assert info.value.code == "we-playback-active"


def test_we_playback_reveals_and_completes(curriculum) -> None:
    service, _ = make_service(curriculum, condition=Condition.EXPERIMENTAL)
    session = service.create_session("alice")
    complete_pretest(service, session.session_id)
    view = service.get_problem(session.session_id)
    total = view["we_steps_total"]
    assert total == 3  # the level-1 demonstration script
    for i in range(total):
        outcome = service.advance(session.session_id)
        assert outcome["we_steps_revealed"] == i + 1
    events = [r.event_type for r in service.get_events(session.session_id)]
    assert events.count(EventType.WE_STEP_REVEALED) == 3
    assert events[-1] == EventType.PROBLEM_COMPLETED
    # One more advance moves on to the next training problem.
    moved = service.advance(session.session_id)
    assert moved["problem_id"] == "t1_2"


def test_control_sessions_have_no_interventions(curriculum) -> None:
    service, _ = make_service(curriculum, condition=Condition.CONTROL)
    session = service.create_session("bob")
    complete_pretest(service, session.session_id)
    view = service.get_problem(session.session_id)
    assert view["worked_example"] is False  # t1_1 plays as a normal problem
    # Finish the whole session and check the log for intervention events.
    while session.phase is not Phase.DONE:
        view = service.get_problem(session.session_id)
        solve_current_problem(service, session.session_id)
        service.advance(session.session_id)
    types = [r.event_type for r in session.events]
    assert EventType.PROMPT_SHOWN not in types
    assert EventType.WE_STEP_REVEALED not in types


def test_prompt_shown_once_when_wait_crosses(curriculum) -> None:
    service, clock = make_service(curriculum, condition=Condition.EXPERIMENTAL, seed=1)
    session = service.create_session("alice")
    complete_pretest(service, session.session_id)
    # Skip the two worked examples to reach a promptable proper problem.
    while True:
        view = service.get_problem(session.session_id)
        if view["worked_example"]:
            for _ in range(view["we_steps_total"]):
                service.advance(session.session_id)
            service.advance(session.session_id)
            continue
        problem = curriculum.by_id(view["problem_id"])
        if problem.proper_for_bc:
            break
        solve_current_problem(service, session.session_id)
        service.advance(session.session_id)
    started = [r for r in session.events if r.event_type == EventType.PROBLEM_STARTED][-1]
    wait = started.payload["sampled_wait_s"]
    assert wait in (90.0, 180.0, 360.0)
    # Before the wait: no prompt on poll.
    before = service.get_events(session.session_id)
    assert all(r.event_type != EventType.PROMPT_SHOWN for r in before)
    clock.advance(wait + 1.0)
    after = service.get_events(session.session_id, since=before[-1].seq)
    assert any(r.event_type == EventType.PROMPT_SHOWN for r in after)
    # Further polls and mutations do not re-prompt.
    clock.advance(1000.0)
    service.get_events(session.session_id)
    service.submit_step(session.session_id, "MP", ["g0", "g0"])
    prompts = [r for r in session.events if r.event_type == EventType.PROMPT_SHOWN]
    assert len(prompts) == 1
    assert prompts[0].payload["sampled_wait_s"] == wait


def test_report_requires_done_session(curriculum) -> None:
    service, _ = make_service(curriculum, condition=Condition.CONTROL)
    session = service.create_session("carol")
    with pytest.raises(ServiceError, match="completed session"):
        service.report(session.session_id)


def test_full_session_report_and_phase_order(curriculum) -> None:
    service, clock = make_service(curriculum, condition=Condition.CONTROL)
    session = service.create_session("dave")
    while session.phase is not Phase.DONE:
        view = service.get_problem(session.session_id)
        clock.advance(5.0)
        solve_current_problem(service, session.session_id)
        service.advance(session.session_id)
    report = service.report(session.session_id)
    # A flawless run maxes both tests; the gain is then undefined.
    assert report["scores"]["pre"] == 100.0
    assert report["scores"]["post"] == 100.0
    assert report["nlg"] is None
    phases = [r.payload["to_phase"] for r in session.events if r.event_type == EventType.PHASE_ADVANCED]
    assert phases == ["Training", "Posttest"]
    assert session.events[-1].event_type == EventType.SESSION_COMPLETED


def test_group_key_names() -> None:
    assert group_key(GroupLabel.ROTE, Condition.EXPERIMENTAL) == "Rote_Exp"
    assert group_key(GroupLabel.DABBLER, Condition.CONTROL) == "Dabbler_Ctrl"
    assert group_key(GroupLabel.SELECTIVE, Condition.SELECTIVE_ORIGINAL) == "Selective"
