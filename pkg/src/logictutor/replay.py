"""Rebuild sessions from their event logs.

The event log is the single source of truth: grading and analytics always
recompute from records rather than trusting cached state.  ``replay_problem``
drives every logged step back through the proof kernel, so a log that
replays cleanly is also a machine-checked proof transcript.
"""

from __future__ import annotations

from dataclasses import dataclass

from .curriculum import CurriculumConfig, Phase
from .events import EventRecord, EventType
from .proofs import ProofState, apply_step, start_problem, switch_strategy
from .scoring import (
    DEFAULT_WEIGHTS,
    DegeneratePretestError,
    ScoreWeights,
    nlg,
    problem_score,
    test_score,
)

__all__ = ["ProblemOutcome", "ReplayError", "split_by_problem", "replay_problem", "session_report"]


class ReplayError(ValueError):
    pass


@dataclass(frozen=True)
class ProblemOutcome:
    problem_id: str
    phase: Phase
    completed: bool
    elapsed_s: float
    accepted: int
    rejected: int
    switched: bool
    switch_action_index: int | None
    was_worked_example: bool


def split_by_problem(events: list[EventRecord]) -> list[tuple[str, list[EventRecord]]]:
    """Per-problem event slices in presentation order."""
    out: list[tuple[str, list[EventRecord]]] = []
    current: list[EventRecord] | None = None
    for record in events:
        if record.event_type == EventType.PROBLEM_STARTED:
            current = []
            out.append((record.problem_id, current))
        if current is not None and record.problem_id == out[-1][0]:
            current.append(record)
    return out


def replay_problem(
    problem_events: list[EventRecord], curriculum: CurriculumConfig
) -> tuple[ProblemOutcome, ProofState]:
    """Re-derive one problem's final proof state by replaying its events.

    Raises :class:`ReplayError` if any logged step fails to reproduce
    (wrong acceptance, wrong formula, switch in the wrong mode, ...).
    """
    if not problem_events or problem_events[0].event_type != EventType.PROBLEM_STARTED:
        raise ReplayError("problem slice must begin with a problem_started record")
    started = problem_events[0]
    problem = curriculum.by_id(started.problem_id)
    state = start_problem(problem)
    was_we = bool(started.payload.get("worked_example", False))
    if was_we:
        state = switch_strategy(state, elapsed_s=0.0)
    completed_record = None
    switch_index: int | None = None
    for record in problem_events[1:]:
        if record.event_type == EventType.STEP_APPLIED:
            before = len(state.nodes)
            state = apply_step(
                state,
                record.payload["rule_name"],
                list(record.payload["parent_refs"]),
                timestamp_ms=record.timestamp_ms,
            )
            if len(state.nodes) != before + 1:
                raise ReplayError(
                    f"{problem.id}: logged step_applied seq={record.seq} replays as a rejection"
                )
            if record.payload["action_index"] != state.nodes[-1].action_index:
                raise ReplayError(f"{problem.id}: action index mismatch at seq={record.seq}")
        elif record.event_type == EventType.STEP_REJECTED:
            before = state.rejected_attempts
            state = apply_step(
                state,
                record.payload["rule_name"],
                list(record.payload["parent_refs"]),
                timestamp_ms=record.timestamp_ms,
            )
            if state.rejected_attempts != before + 1:
                raise ReplayError(
                    f"{problem.id}: logged step_rejected seq={record.seq} replays as accepted"
                )
        elif record.event_type == EventType.STRATEGY_SWITCHED:
            state = switch_strategy(state, record.payload["elapsed_s"])
            switch_index = record.payload["action_index"]
            if state.switch_record is None or state.switch_record.action_index != switch_index:
                raise ReplayError(f"{problem.id}: switch action index mismatch")
        elif record.event_type == EventType.WE_STEP_REVEALED:
            state = apply_step(
                state,
                record.payload["rule_name"],
                list(record.payload["parent_refs"]),
                timestamp_ms=record.timestamp_ms,
            )
        elif record.event_type == EventType.PROBLEM_COMPLETED:
            completed_record = record
    if completed_record is not None and not state.completed:
        raise ReplayError(f"{problem.id}: log claims completion but replay is incomplete")
    if completed_record is not None:
        elapsed = float(completed_record.payload["elapsed_s"])
    elif len(problem_events) > 1:
        elapsed = (problem_events[-1].timestamp_ms - started.timestamp_ms) / 1000.0
    else:
        elapsed = 0.0
    outcome = ProblemOutcome(
        problem_id=problem.id,
        phase=problem.phase,
        completed=completed_record is not None,
        elapsed_s=elapsed,
        accepted=state.accepted_steps,
        rejected=state.rejected_attempts,
        switched=state.switch_record is not None and not was_we,
        switch_action_index=switch_index,
        was_worked_example=was_we,
    )
    return outcome, state


def session_report(
    events: list[EventRecord],
    curriculum: CurriculumConfig,
    weights: ScoreWeights = DEFAULT_WEIGHTS,
) -> dict:
    """Scores and gain for one session, recomputed from the log alone."""
    slices = split_by_problem(events)
    outcomes = [replay_problem(chunk, curriculum)[0] for _, chunk in slices]
    per_problem = []
    section_scores: dict[Phase, list[float]] = {
        Phase.PRETEST: [],
        Phase.POSTTEST: [],
        Phase.TRAINING: [],
    }
    iso_scores: list[float] = []
    for outcome in outcomes:
        problem = curriculum.by_id(outcome.problem_id)
        score = problem_score(
            completed=outcome.completed,
            elapsed_s=outcome.elapsed_s,
            accepted=outcome.accepted,
            rejected=outcome.rejected,
            proof_length=outcome.accepted,
            par_time_s=problem.par_time_s,
            reference_length=problem.reference_length,
            weights=weights,
        )
        per_problem.append(
            {
                "problem_id": outcome.problem_id,
                "phase": outcome.phase.value,
                "completed": outcome.completed,
                "elapsed_s": outcome.elapsed_s,
                "accepted": outcome.accepted,
                "rejected": outcome.rejected,
                "switched": outcome.switched,
                "switch_action_index": outcome.switch_action_index,
                "worked_example": outcome.was_worked_example,
                "score": score.value,
            }
        )
        section_scores[outcome.phase].append(score.value)
        if problem.isomorphic_to is not None:
            iso_scores.append(score.value)
    pre = test_score(section_scores[Phase.PRETEST]) if section_scores[Phase.PRETEST] else None
    post = test_score(section_scores[Phase.POSTTEST]) if section_scores[Phase.POSTTEST] else None
    iso_post = test_score(iso_scores) if iso_scores else None

    def gain(before: float | None, after: float | None) -> float | None:
        if before is None or after is None:
            return None
        try:
            return nlg(before, after)
        except DegeneratePretestError:
            return None

    meta: dict = {}
    for record in events:
        if record.event_type == EventType.PHASE_ADVANCED and "condition" in record.payload:
            meta["condition"] = record.payload["condition"]
            meta["group_label"] = record.payload["group_label"]
        if record.event_type == EventType.SESSION_STARTED:
            meta["student_id"] = record.payload["student_id"]
            meta["session_id"] = record.session_id
    return {
        **meta,
        "scores": {"pre": pre, "post": post, "iso_post": iso_post},
        "nlg": gain(pre, post),
        "iso_nlg": gain(pre, iso_post),
        "problems": per_problem,
    }
