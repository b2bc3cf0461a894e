"""Session lifecycle, condition assignment, event logging, and prompt delivery.

One :class:`TutorService` owns many student sessions.  All mutations to a
session are serialized under a per-session lock; every state change appends
events with strictly increasing sequence numbers, and anything downstream
(scores, analytics, the UI) is derived from those records.

The wall clock is injectable: tests and the simulation harness drive a
manual clock, the HTTP server uses real time.  Prompt eligibility is
re-evaluated on every mutation and on every event poll, so a client that
polls sees the prompt within one poll interval of the sampled wait
elapsing.
"""

from __future__ import annotations

import itertools
import random
import threading
import time
from dataclasses import dataclass, field

from .classifier import GroupLabel, extract_features, rule_baseline
from .curriculum import CurriculumConfig, Phase, Problem
from .events import EventRecord, EventType
from .interventions import (
    Condition,
    DEFAULT_PROMPT_POLICY,
    DEFAULT_PROMPT_TEXT,
    PromptPolicy,
    sample_wait,
    should_prompt,
)
from .proofs import ProofState, apply_step, start_problem, switch_strategy
from .formulas import format_formula
from .replay import session_report, split_by_problem
from .analytics import SwitchBehavior, classify_switch, group_switch_profile, one_way_anova
from .scoring import DEFAULT_WEIGHTS, ScoreWeights

__all__ = [
    "ManualClock",
    "SystemClock",
    "ServiceConfig",
    "ServiceError",
    "Session",
    "TutorService",
    "group_key",
]


class ServiceError(Exception):
    """Service-level contract violation with a stable error code."""

    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class SystemClock:
    def now_ms(self) -> int:
        return int(time.time() * 1000)


class ManualClock:
    """Deterministic clock for tests and simulations."""

    def __init__(self, start_ms: int = 0):
        self._now_ms = start_ms

    def now_ms(self) -> int:
        return self._now_ms

    def advance(self, seconds: float) -> None:
        self._now_ms += int(round(seconds * 1000))


@dataclass(frozen=True)
class ServiceConfig:
    split_ratio: float = 0.6  # probability a Rote/Dabbler lands in Experimental
    prompt_text: str = DEFAULT_PROMPT_TEXT
    prompt_policy: PromptPolicy = DEFAULT_PROMPT_POLICY
    score_weights: ScoreWeights = DEFAULT_WEIGHTS
    seed: int = 0
    host: str = "127.0.0.1"
    port: int = 8420


@dataclass
class Session:
    session_id: str
    student_id: str
    phase: Phase = Phase.PRETEST
    problem_cursor: int = 0
    condition: Condition = Condition.UNASSIGNED
    group_label: GroupLabel | None = None
    proof_state: ProofState | None = None
    sampled_wait_s: float | None = None
    prompt_pending: bool = False
    prompt_shown: bool = False
    we_playback: bool = False
    we_cursor: int = 0
    problem_started_ms: int = 0
    started_at_ms: int = 0
    events: list[EventRecord] = field(default_factory=list)
    seq: int = 0
    rng: random.Random = field(default_factory=random.Random)
    lock: threading.Lock = field(default_factory=threading.Lock)


def group_key(label: GroupLabel, condition: Condition) -> str:
    """Analysis group name, e.g. Rote_Exp, Dabbler_Ctrl, Selective."""
    if condition is Condition.SELECTIVE_ORIGINAL:
        return "Selective"
    suffix = "Exp" if condition is Condition.EXPERIMENTAL else "Ctrl"
    return f"{label.value}_{suffix}"


class TutorService:
    def __init__(
        self,
        curriculum: CurriculumConfig,
        config: ServiceConfig | None = None,
        clock=None,
        classify=None,
        assign_condition=None,
    ):
        self.curriculum = curriculum
        self.config = config or ServiceConfig()
        self.clock = clock or SystemClock()
        # classify(pretest_events) -> GroupLabel; the rule baseline is the
        # default assignment mechanism, a trained forest can be dropped in.
        self.classify = classify or (lambda events: rule_baseline(extract_features(events)))
        # assign_condition(student_id, label, rng) -> Condition overrides the
        # default randomization; experiment runs use it to force conditions.
        self.assign_condition_fn = assign_condition
        self._sessions: dict[str, Session] = {}
        self._active_by_student: dict[str, str] = {}
        self._ids = itertools.count(1)
        self._registry_lock = threading.Lock()

    # -- helpers -----------------------------------------------------------

    def _phase_problems(self, phase: Phase) -> tuple[Problem, ...]:
        if phase is Phase.PRETEST:
            return self.curriculum.pretest
        if phase is Phase.TRAINING:
            return self.curriculum.training
        if phase is Phase.POSTTEST:
            return self.curriculum.posttest
        return ()

    def _current_problem(self, session: Session) -> Problem:
        problems = self._phase_problems(session.phase)
        if session.problem_cursor >= len(problems):
            raise ServiceError("no-active-problem", "no active problem in this phase")
        return problems[session.problem_cursor]

    def _emit(self, session: Session, event_type: str, problem_id: str | None, payload: dict) -> None:
        session.seq += 1
        session.events.append(
            EventRecord(
                seq=session.seq,
                timestamp_ms=self.clock.now_ms(),
                session_id=session.session_id,
                problem_id=problem_id,
                event_type=event_type,
                payload=payload,
            )
        )

    def _elapsed_s(self, session: Session) -> float:
        return (self.clock.now_ms() - session.problem_started_ms) / 1000.0

    def _start_current_problem(self, session: Session) -> None:
        problem = self._current_problem(session)
        state = start_problem(problem)
        variant = self.curriculum.variant(session.condition)
        session.we_playback = (
            session.condition is Condition.EXPERIMENTAL
            and variant.we_enabled
            and problem.worked_example is not None
        )
        session.we_cursor = 0
        session.prompt_shown = False
        session.prompt_pending = False
        session.sampled_wait_s = None
        session.problem_started_ms = self.clock.now_ms()
        if session.we_playback:
            # Demonstrations run in BC from the start; no switch event is
            # logged because no student action occurred.
            state = switch_strategy(state, elapsed_s=0.0)
        elif (
            session.phase is Phase.TRAINING
            and session.condition is Condition.EXPERIMENTAL
            and variant.prompts_enabled
            and problem.proper_for_bc
        ):
            session.sampled_wait_s = sample_wait(self.config.prompt_policy, session.rng)
        session.proof_state = state
        self._emit(
            session,
            EventType.PROBLEM_STARTED,
            problem.id,
            {
                "phase": session.phase.value,
                "level": problem.level,
                "ordinal": problem.ordinal,
                "proper_for_bc": problem.proper_for_bc,
                "worked_example": session.we_playback,
                "sampled_wait_s": session.sampled_wait_s,
            },
        )

    def _check_prompt(self, session: Session) -> None:
        if (
            session.phase is not Phase.TRAINING
            or session.we_playback
            or session.sampled_wait_s is None
            or session.proof_state is None
        ):
            return
        decision = should_prompt(
            session.proof_state,
            self._elapsed_s(session),
            session.condition,
            self._current_problem(session),
            session.sampled_wait_s,
            session.prompt_shown,
        )
        if decision.show:
            session.prompt_shown = True
            session.prompt_pending = True
            self._emit(
                session,
                EventType.PROMPT_SHOWN,
                self._current_problem(session).id,
                {
                    "elapsed_s": self._elapsed_s(session),
                    "sampled_wait_s": session.sampled_wait_s,
                    "text": self.config.prompt_text,
                },
            )

    def _complete_problem(self, session: Session) -> None:
        self._emit(
            session,
            EventType.PROBLEM_COMPLETED,
            self._current_problem(session).id,
            {"elapsed_s": self._elapsed_s(session)},
        )

    def _pretest_events(self, session: Session) -> list[EventRecord]:
        pretest_ids = {p.id for p in self.curriculum.pretest}
        return [r for r in session.events if r.problem_id in pretest_ids]

    def _assign_condition(self, session: Session) -> None:
        if session.condition is not Condition.UNASSIGNED:
            raise ServiceError("already-assigned", "condition already assigned")
        if session.phase is not Phase.PRETEST or session.problem_cursor < len(self.curriculum.pretest):
            raise ServiceError("premature-assignment", "pretest is not complete")
        label = self.classify(self._pretest_events(session))
        session.group_label = label
        if self.assign_condition_fn is not None:
            session.condition = self.assign_condition_fn(session.student_id, label, session.rng)
        elif label is GroupLabel.SELECTIVE:
            session.condition = Condition.SELECTIVE_ORIGINAL
        elif session.rng.random() < self.config.split_ratio:
            session.condition = Condition.EXPERIMENTAL
        else:
            session.condition = Condition.CONTROL

    # -- public operations --------------------------------------------------

    def create_session(self, student_id: str) -> Session:
        with self._registry_lock:
            active = self._active_by_student.get(student_id)
            if active is not None and self._sessions[active].phase is not Phase.DONE:
                raise ServiceError("duplicate-session", f"student {student_id} has an active session")
            session = Session(
                session_id=f"s{next(self._ids):04d}",
                student_id=student_id,
                rng=random.Random(f"{self.config.seed}:{student_id}"),
                started_at_ms=self.clock.now_ms(),
            )
            self._sessions[session.session_id] = session
            self._active_by_student[student_id] = session.session_id
        with session.lock:
            self._emit(session, EventType.SESSION_STARTED, None, {"student_id": student_id})
            self._start_current_problem(session)
        return session

    def _get(self, session_id: str) -> Session:
        try:
            return self._sessions[session_id]
        except KeyError:
            raise ServiceError("unknown-session", f"no session {session_id}") from None

    def get_session(self, session_id: str) -> Session:
        return self._get(session_id)

    def get_problem(self, session_id: str) -> dict:
        session = self._get(session_id)
        with session.lock:
            if session.phase is Phase.DONE:
                raise ServiceError("session-done", "session is complete")
            self._check_prompt(session)
            problem = self._current_problem(session)
            state = session.proof_state
            assert state is not None
            script = problem.worked_example
            return {
                "session_id": session.session_id,
                "phase": session.phase.value,
                "condition": session.condition.value,
                "problem_id": problem.id,
                "level": problem.level,
                "ordinal": problem.ordinal,
                "mode": state.mode.value,
                "givens": [format_formula(f) for f in state.working_premises],
                "conclusion": format_formula(state.conclusion),
                "target": format_formula(state.target),
                "nodes": [
                    {
                        "formula": format_formula(node.formula),
                        "rule_name": node.rule_name,
                        "parent_refs": list(node.parent_refs),
                        "action_index": node.action_index,
                    }
                    for node in state.nodes
                ],
                "action_count": state.action_count,
                "rejected_attempts": state.rejected_attempts,
                "completed": state.completed,
                "worked_example": session.we_playback,
                "we_steps_total": len(script.steps) if session.we_playback and script else 0,
                "we_steps_revealed": session.we_cursor,
                "we_commentary": (
                    script.steps[session.we_cursor].commentary
                    if session.we_playback and script and session.we_cursor < len(script.steps)
                    else None
                ),
                "prompt_pending": session.prompt_pending,
            }

    def submit_step(self, session_id: str, rule_name: str, parent_refs: list[str]) -> dict:
        session = self._get(session_id)
        with session.lock:
            if session.phase is Phase.DONE:
                raise ServiceError("session-done", "session is complete")
            if session.we_playback:
                raise ServiceError("we-playback-active", "worked examples only accept advance")
            state = session.proof_state
            assert state is not None
            if state.completed:
                raise ServiceError("problem-completed", "problem already completed; advance")
            self._check_prompt(session)
            problem = self._current_problem(session)
            new_state = apply_step(state, rule_name, parent_refs, timestamp_ms=self.clock.now_ms())
            accepted = len(new_state.nodes) > len(state.nodes)
            session.proof_state = new_state
            if accepted:
                node = new_state.nodes[-1]
                self._emit(
                    session,
                    EventType.STEP_APPLIED,
                    problem.id,
                    {
                        "rule_name": rule_name,
                        "parent_refs": list(parent_refs),
                        "formula": format_formula(node.formula),
                        "action_index": node.action_index,
                        "elapsed_s": self._elapsed_s(session),
                    },
                )
                if new_state.completed:
                    self._complete_problem(session)
            else:
                self._emit(
                    session,
                    EventType.STEP_REJECTED,
                    problem.id,
                    {
                        "rule_name": rule_name,
                        "parent_refs": list(parent_refs),
                        "action_index": new_state.action_count,
                        "elapsed_s": self._elapsed_s(session),
                    },
                )
            self._check_prompt(session)
            return {"accepted": accepted, "completed": new_state.completed}

    def switch(self, session_id: str) -> dict:
        session = self._get(session_id)
        with session.lock:
            if session.phase is Phase.DONE:
                raise ServiceError("session-done", "session is complete")
            if session.we_playback:
                raise ServiceError("we-playback-active", "worked examples only accept advance")
            state = session.proof_state
            assert state is not None
            elapsed = self._elapsed_s(session)
            new_state = switch_strategy(state, elapsed)
            session.proof_state = new_state
            assert new_state.switch_record is not None
            self._emit(
                session,
                EventType.STRATEGY_SWITCHED,
                self._current_problem(session).id,
                {
                    "action_index": new_state.switch_record.action_index,
                    "elapsed_s": elapsed,
                },
            )
            session.prompt_pending = False
            return {"mode": new_state.mode.value, "target": format_formula(new_state.target)}

    def advance(self, session_id: str) -> dict:
        session = self._get(session_id)
        with session.lock:
            if session.phase is Phase.DONE:
                raise ServiceError("session-done", "session is complete")
            self._check_prompt(session)
            if session.we_playback:
                return self._advance_worked_example(session)
            state = session.proof_state
            assert state is not None
            if not state.completed:
                raise ServiceError("problem-incomplete", "finish the proof before advancing")
            return self._advance_problem(session)

    def _advance_worked_example(self, session: Session) -> dict:
        problem = self._current_problem(session)
        script = problem.worked_example
        assert script is not None and session.proof_state is not None
        if session.we_cursor < len(script.steps):
            step = script.steps[session.we_cursor]
            state = apply_step(
                session.proof_state,
                step.rule_name,
                list(step.parent_refs),
                timestamp_ms=self.clock.now_ms(),
            )
            if len(state.nodes) == len(session.proof_state.nodes):
                raise ServiceError("we-script-invalid", "scripted step was rejected by the kernel")
            session.proof_state = state
            session.we_cursor += 1
            self._emit(
                session,
                EventType.WE_STEP_REVEALED,
                problem.id,
                {
                    "step_index": session.we_cursor - 1,
                    "rule_name": step.rule_name,
                    "parent_refs": list(step.parent_refs),
                    "formula": format_formula(step.result),
                    "commentary": step.commentary,
                },
            )
            if session.we_cursor == len(script.steps):
                if not state.completed:
                    raise ServiceError("we-script-invalid", "script ended without completing")
                self._complete_problem(session)
            return {
                "worked_example": True,
                "we_steps_revealed": session.we_cursor,
                "we_steps_total": len(script.steps),
                "completed": session.proof_state.completed,
            }
        return self._advance_problem(session)

    def _advance_problem(self, session: Session) -> dict:
        problems = self._phase_problems(session.phase)
        session.problem_cursor += 1
        if session.problem_cursor < len(problems):
            self._start_current_problem(session)
            return {"phase": session.phase.value, "problem_id": self._current_problem(session).id}
        if session.phase is Phase.PRETEST:
            self._assign_condition(session)
            session.phase = Phase.TRAINING
            session.problem_cursor = 0
            assert session.group_label is not None
            self._emit(
                session,
                EventType.PHASE_ADVANCED,
                None,
                {
                    "to_phase": session.phase.value,
                    "condition": session.condition.value,
                    "group_label": session.group_label.value,
                },
            )
            self._start_current_problem(session)
        elif session.phase is Phase.TRAINING:
            session.phase = Phase.POSTTEST
            session.problem_cursor = 0
            self._emit(session, EventType.PHASE_ADVANCED, None, {"to_phase": session.phase.value})
            self._start_current_problem(session)
        else:
            session.phase = Phase.DONE
            session.proof_state = None
            self._emit(session, EventType.SESSION_COMPLETED, None, {})
            return {"phase": session.phase.value, "problem_id": None}
        return {"phase": session.phase.value, "problem_id": self._current_problem(session).id}

    def get_events(self, session_id: str, since: int = 0) -> list[EventRecord]:
        session = self._get(session_id)
        with session.lock:
            if session.phase is not Phase.DONE:
                self._check_prompt(session)
            return [r for r in session.events if r.seq > since]

    def report(self, session_id: str) -> dict:
        session = self._get(session_id)
        with session.lock:
            if session.phase is not Phase.DONE:
                raise ServiceError("incomplete-session", "report requires a completed session")
            return session_report(session.events, self.curriculum, self.config.score_weights)

    def analytics(self, phase: Phase) -> dict:
        """Switch profiles and a homogeneity test over all completed sessions."""
        done = [s for s in self._sessions.values() if s.phase is Phase.DONE]
        labeled_problem_logs: list[tuple[str, list]] = []
        per_student_early: dict[str, list[float]] = {}
        phase_ids = {p.id for p in self._phase_problems(phase)}
        for session in done:
            assert session.group_label is not None
            key = group_key(session.group_label, session.condition)
            early = 0
            total = 0
            for problem_id, chunk in split_by_problem(session.events):
                if problem_id not in phase_ids:
                    continue
                labeled_problem_logs.append((key, chunk))
                total += 1
                if classify_switch(chunk) is SwitchBehavior.EARLY_SWITCH:
                    early += 1
            if total:
                per_student_early.setdefault(key, []).append(early / total)
        profiles = group_switch_profile(labeled_problem_logs)
        result: dict = {
            "phase": phase.value,
            "profiles": {
                key: {
                    "pct_no": profile.pct_no,
                    "pct_early": profile.pct_early,
                    "pct_late": profile.pct_late,
                    "problems": profile.problems,
                }
                for key, profile in sorted(profiles.items())
            },
            "per_student_early_fraction": {
                key: values for key, values in sorted(per_student_early.items())
            },
        }
        eligible = [v for v in per_student_early.values() if len(v) >= 2]
        if len(eligible) >= 2:
            anova = one_way_anova(eligible)
            result["early_fraction_anova"] = {
                "F": anova.statistic,
                "df": list(anova.df),
                "p_value": anova.p_value,
                "eta_squared": anova.effect_size,
            }
        return result

    def sessions(self) -> list[Session]:
        return list(self._sessions.values())
