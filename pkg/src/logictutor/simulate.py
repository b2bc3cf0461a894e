"""Simulated students: parameterized behavior policies driven end to end.

Each policy fixes how a student behaves on one problem: whether and when
they switch to BC, whether they comply with a prompt, how fast they act,
and how often they fumble.  Correct steps come from the reference prover;
mistakes are injected as deliberately mismatched rule applications and
redundant derivations.  Every emitted action goes through the real service
layer, so simulated logs are indistinguishable in format and invariants
from live ones.

A switching student commits to the switch up front: they mark time until
the planned action index (rejected fumbles and harmless derivations), flip
to BC, and then solve.  This keeps observed per-problem switch rates equal
to the policy parameters regardless of how short the proof is.

Preset policies encode the three metacognitive groups plus the
post-intervention behavior an experimental Rote student settles into.  The
Dabbler preset schedules its two pretest switches antithetically (exactly
one of the two problems, chosen uniformly): the per-problem rate stays 0.5
while strategy-awareness is always observable in the two-problem pretest
window, which is what makes early classification meaningful at all.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import yaml

from .analytics import chi_square_2x2, StatResult
from .classifier import GroupLabel
from .curriculum import CurriculumConfig, Phase
from .events import EventRecord, EventType
from .formulas import Not, format_formula, parse
from .interventions import Condition
from .proofs import Mode
from .prover import solve_from_premises
from .replay import session_report
from .service import ManualClock, ServiceConfig, TutorService, group_key

__all__ = [
    "StudentPolicy",
    "PRESETS",
    "PopulationGroup",
    "PopulationSpec",
    "PolicyStuckError",
    "ExperimentResult",
    "run_session",
    "run_pretest",
    "run_experiment",
    "load_population_spec",
]


class PolicyStuckError(RuntimeError):
    """The prover found no proof for a problem the policy must solve: corpus bug."""


@dataclass(frozen=True)
class StudentPolicy:
    name: str
    p_switch_proper: float
    p_switch_improper: float
    switch_timing: str  # "early" (well inside 30 actions) or "late" (past 30)
    prompt_compliance: float
    latency_mean_s: float
    latency_jitter_s: float
    error_rate: float
    junk_step_rate: float
    stall_rate: float
    pretest_antithetic: bool = False
    responsive_variant: str | None = None  # behavior adopted in Experimental training/posttest


PRESETS: dict[str, StudentPolicy] = {
    "rote": StudentPolicy(
        name="rote",
        p_switch_proper=0.0,
        p_switch_improper=0.0,
        switch_timing="late",
        prompt_compliance=0.0,
        latency_mean_s=28.0,
        latency_jitter_s=10.0,
        error_rate=0.35,
        junk_step_rate=0.4,
        stall_rate=0.25,
        responsive_variant="rote_exp_post",
    ),
    "dabbler": StudentPolicy(
        name="dabbler",
        p_switch_proper=0.5,
        p_switch_improper=0.5,
        switch_timing="late",
        prompt_compliance=0.3,
        latency_mean_s=16.0,
        latency_jitter_s=6.0,
        error_rate=0.25,
        junk_step_rate=0.3,
        stall_rate=0.2,
        pretest_antithetic=True,
    ),
    "selective": StudentPolicy(
        name="selective",
        p_switch_proper=0.9,
        p_switch_improper=0.05,
        switch_timing="early",
        prompt_compliance=0.5,
        latency_mean_s=9.0,
        latency_jitter_s=3.0,
        error_rate=0.1,
        junk_step_rate=0.1,
        stall_rate=0.1,
    ),
    "rote_exp_post": StudentPolicy(
        name="rote_exp_post",
        p_switch_proper=0.85,
        p_switch_improper=0.05,
        switch_timing="early",
        prompt_compliance=0.9,
        latency_mean_s=18.0,
        latency_jitter_s=6.0,
        error_rate=0.2,
        junk_step_rate=0.25,
        stall_rate=0.15,
    ),
}


@dataclass(frozen=True)
class PopulationGroup:
    policy: str
    count: int
    condition: str | None = None  # forced condition, or None for classifier-driven


@dataclass(frozen=True)
class PopulationSpec:
    groups: tuple[PopulationGroup, ...]
    master_seed: int = 0

    def __post_init__(self) -> None:
        for group in self.groups:
            if group.count <= 0:
                raise ValueError("population counts must be positive")
            if group.policy not in PRESETS:
                raise ValueError(f"unknown policy preset: {group.policy}")


def load_population_spec(path) -> PopulationSpec:
    with open(path, "r", encoding="utf-8") as handle:
        raw = yaml.safe_load(handle)
    groups = tuple(
        PopulationGroup(
            policy=g["policy"], count=int(g["count"]), condition=g.get("condition")
        )
        for g in raw["groups"]
    )
    return PopulationSpec(groups=groups, master_seed=int(raw.get("master_seed", 0)))


# ---------------------------------------------------------------------------
# Single-student driver
# ---------------------------------------------------------------------------


class _StudentDriver:
    def __init__(
        self,
        service: TutorService,
        clock: ManualClock,
        policy: StudentPolicy,
        curriculum: CurriculumConfig,
        rng: random.Random,
        student_id: str,
    ):
        self.service = service
        self.clock = clock
        self.policy = policy
        self.curriculum = curriculum
        self.rng = rng
        self.student_id = student_id
        self.session_id = ""
        self.condition = Condition.UNASSIGNED
        self.last_seen_seq = 0
        self.pretest_switch_slot: int | None = None
        self.pretest_index = 0

    # -- behavior pieces ----------------------------------------------------

    def _effective_policy(self, phase: Phase) -> StudentPolicy:
        if (
            self.policy.responsive_variant is not None
            and self.condition is Condition.EXPERIMENTAL
            and phase in (Phase.TRAINING, Phase.POSTTEST)
        ):
            return PRESETS[self.policy.responsive_variant]
        return self.policy

    def _latency(self, policy: StudentPolicy) -> float:
        low = max(0.5, policy.latency_mean_s - policy.latency_jitter_s)
        high = policy.latency_mean_s + policy.latency_jitter_s
        return self.rng.uniform(low, high)

    def _planned_switch(self, policy: StudentPolicy, proper: bool, phase: Phase) -> int | None:
        if phase is Phase.PRETEST and policy.pretest_antithetic:
            if self.pretest_switch_slot is None:
                self.pretest_switch_slot = self.rng.randrange(2)
            wants = self.pretest_index == self.pretest_switch_slot
        else:
            p = policy.p_switch_proper if proper else policy.p_switch_improper
            wants = self.rng.random() < p
        if not wants:
            return None
        if policy.switch_timing == "early":
            return 1 + min(int(self.rng.expovariate(0.5)), 24)
        return 31 + min(int(self.rng.expovariate(0.4)), 14)

    def _poll_prompt(self) -> bool:
        """Fetch new events; True if a prompt arrived in this poll."""
        new = self.service.get_events(self.session_id, since=self.last_seen_seq)
        if new:
            self.last_seen_seq = new[-1].seq
        return any(r.event_type == EventType.PROMPT_SHOWN for r in new)

    def _submit_fumble(self, policy: StudentPolicy) -> None:
        # A same-premise contradiction or self modus ponens never matches.
        rule = "CONTRA" if self.rng.random() < 0.5 else "MP"
        self.clock.advance(self._latency(policy))
        outcome = self.service.submit_step(self.session_id, rule, ["g0", "g0"])
        assert not outcome["accepted"]

    def _safe_junk_step(self, view: dict, policy: StudentPolicy) -> bool:
        """Derive a harmless double negation; False if it would hit the target."""
        given_index = self.rng.randrange(len(view["givens"]))
        derived = Not(Not(parse(view["givens"][given_index])))
        if format_formula(derived) == view["target"]:
            return False
        self.clock.advance(self._latency(policy))
        outcome = self.service.submit_step(self.session_id, "DN_I", [f"g{given_index}"])
        assert outcome["accepted"]
        return True

    def _mark_time(self, policy: StudentPolicy, view: dict) -> None:
        if self.rng.random() < 0.5 and self._safe_junk_step(view, policy):
            return
        self._submit_fumble(policy)

    def _solution_steps(self, view: dict) -> list[tuple[str, list[str]]]:
        """Prover plan from the current premises and nodes to the target."""
        premises = [parse(text) for text in view["givens"]]
        nodes = [parse(node["formula"]) for node in view["nodes"]]
        target = parse(view["target"])
        plan = solve_from_premises(premises + nodes, target)
        if plan is None:
            raise PolicyStuckError(
                f"no proof found for {view['problem_id']} in mode {view['mode']}"
            )
        steps: list[tuple[str, list[str]]] = []
        n_premises = len(premises)
        n_existing = len(nodes)
        for i, step in enumerate(plan):
            refs = []
            for ref in step.parent_refs:
                kind, index = ref[0], int(ref[1:])
                if kind == "g" and index >= n_premises:
                    refs.append(f"n{index - n_premises}")
                elif kind == "g":
                    refs.append(ref)
                else:
                    refs.append(f"n{n_existing + index}")
            steps.append((step.rule_name, refs))
        return steps

    # -- problem loops -------------------------------------------------------

    def _play_worked_example(self, view: dict, policy: StudentPolicy) -> None:
        total = view["we_steps_total"]
        for _ in range(total):
            self.clock.advance(self._latency(policy))
            self.service.advance(self.session_id)

    def _play_problem(self, view: dict, phase: Phase) -> None:
        policy = self._effective_policy(phase)
        problem = self.curriculum.by_id(view["problem_id"])
        planned = self._planned_switch(policy, problem.proper_for_bc, phase)
        if phase is Phase.PRETEST:
            self.pretest_index += 1
        if self.rng.random() < policy.stall_rate:
            self.clock.advance(self.rng.uniform(200.0, 500.0))
        mode = Mode(view["mode"])
        completed = bool(view["completed"])
        action_count = int(view["action_count"])
        prompt_ignored = False
        plan: list[tuple[str, list[str]]] | None = None
        while not completed:
            if mode is Mode.FC and not prompt_ignored and self._poll_prompt():
                if self.rng.random() < policy.prompt_compliance:
                    self.clock.advance(self._latency(policy))
                    self.service.switch(self.session_id)
                    mode = Mode.BC
                    planned = None
                    plan = None
                    continue
                prompt_ignored = True
            if planned is not None and mode is Mode.FC:
                view = self.service.get_problem(self.session_id)
                action_count = int(view["action_count"])
                if action_count + 1 >= planned:
                    self.clock.advance(self._latency(policy))
                    self.service.switch(self.session_id)
                    mode = Mode.BC
                    planned = None
                    plan = None
                    continue
                self._mark_time(policy, view)
                continue
            if plan is None:
                view = self.service.get_problem(self.session_id)
                plan = self._solution_steps(view)
            if not plan:
                raise PolicyStuckError(f"empty plan on {view['problem_id']}")
            if self.rng.random() < policy.error_rate:
                self._submit_fumble(policy)
                continue
            if self.rng.random() < policy.junk_step_rate:
                view = self.service.get_problem(self.session_id)
                plan_before = plan
                if self._safe_junk_step(view, policy):
                    plan = None  # node indices shifted; replan
                    continue
                plan = plan_before
            rule_name, refs = plan.pop(0)
            self.clock.advance(self._latency(policy))
            outcome = self.service.submit_step(self.session_id, rule_name, refs)
            if not outcome["accepted"]:
                raise PolicyStuckError(
                    f"prover step {rule_name} rejected on {view['problem_id']}"
                )
            completed = outcome["completed"]

    # -- session loop ---------------------------------------------------------

    def play(self, stop_after_pretest: bool = False) -> list[EventRecord]:
        session = self.service.create_session(self.student_id)
        self.session_id = session.session_id
        problems_played = 0
        while True:
            view = self.service.get_problem(self.session_id)
            phase = Phase(view["phase"])
            self.condition = Condition(view["condition"])
            if view["worked_example"]:
                self._play_worked_example(view, self._effective_policy(phase))
            else:
                self._play_problem(view, phase)
            problems_played += 1
            if stop_after_pretest and problems_played == len(self.curriculum.pretest):
                break
            self.service.advance(self.session_id)
            if self.service.get_session(self.session_id).phase is Phase.DONE:
                break
        return self.service.get_events(self.session_id, since=0)


# ---------------------------------------------------------------------------
# Entry points
# ---------------------------------------------------------------------------


def _forced_assigner(forced: dict[str, Condition]):
    def assign(student_id: str, label: GroupLabel, rng: random.Random) -> Condition:
        if student_id in forced:
            return forced[student_id]
        if label is GroupLabel.SELECTIVE:
            return Condition.SELECTIVE_ORIGINAL
        return Condition.EXPERIMENTAL if rng.random() < 0.6 else Condition.CONTROL

    return assign


def run_session(
    policy: StudentPolicy,
    curriculum: CurriculumConfig,
    condition: Condition | None,
    seed: int,
    student_id: str = "student",
) -> list[EventRecord]:
    """One full pretest-training-posttest session; byte-identical per seed."""
    clock = ManualClock()
    forced = {student_id: condition} if condition is not None else {}
    service = TutorService(
        curriculum,
        ServiceConfig(seed=seed),
        clock=clock,
        assign_condition=_forced_assigner(forced) if forced else None,
    )
    rng = random.Random(f"{seed}:{student_id}:policy")
    driver = _StudentDriver(service, clock, policy, curriculum, rng, student_id)
    return driver.play()


def run_pretest(
    policy: StudentPolicy,
    curriculum: CurriculumConfig,
    seed: int,
    student_id: str = "student",
) -> list[EventRecord]:
    """Only the two pretest problems; the cheap path for classifier work."""
    clock = ManualClock()
    service = TutorService(curriculum, ServiceConfig(seed=seed), clock=clock)
    rng = random.Random(f"{seed}:{student_id}:policy")
    driver = _StudentDriver(service, clock, policy, curriculum, rng, student_id)
    return driver.play(stop_after_pretest=True)


@dataclass
class ExperimentResult:
    students: list[dict]
    logs: dict[str, list[EventRecord]]
    report: dict
    chi_square: StatResult | None = None


def run_experiment(spec: PopulationSpec, curriculum: CurriculumConfig) -> ExperimentResult:
    """Simulate a full study population and aggregate the analytics."""
    clock = ManualClock()
    forced: dict[str, Condition] = {}
    roster: list[tuple[str, StudentPolicy]] = []
    for group_index, group in enumerate(spec.groups):
        for i in range(group.count):
            student_id = f"{group.policy}_{group_index}_{i:03d}"
            roster.append((student_id, PRESETS[group.policy]))
            if group.condition is not None:
                forced[student_id] = Condition(group.condition)
    service = TutorService(
        curriculum,
        ServiceConfig(seed=spec.master_seed),
        clock=clock,
        assign_condition=_forced_assigner(forced) if forced else None,
    )
    students: list[dict] = []
    logs: dict[str, list[EventRecord]] = {}
    for student_id, policy in roster:
        rng = random.Random(f"{spec.master_seed}:{student_id}:policy")
        driver = _StudentDriver(service, clock, policy, curriculum, rng, student_id)
        events = driver.play()
        logs[student_id] = events
        session = service.get_session(driver.session_id)
        assert session.group_label is not None
        students.append(
            {
                "student_id": student_id,
                "policy": policy.name,
                "label": session.group_label.value,
                "condition": session.condition.value,
                "group": group_key(session.group_label, session.condition),
                "report": session_report(events, curriculum),
            }
        )
    # Condition balance over classified Rote/Dabbler students, as a 2x2 table.
    table = [[0, 0], [0, 0]]
    for student in students:
        if student["label"] == GroupLabel.SELECTIVE.value:
            continue
        if student["condition"] == Condition.EXPERIMENTAL.value:
            row = 0
        elif student["condition"] == Condition.CONTROL.value:
            row = 1
        else:
            continue
        col = 0 if student["label"] == GroupLabel.ROTE.value else 1
        table[row][col] += 1
    chi = chi_square_2x2([[float(c) for c in row] for row in table]) if min(
        sum(table[0]), sum(table[1])
    ) > 0 else None
    agreement = sum(
        1 for s in students if s["label"].lower() == _base_group(s["policy"])
    ) / len(students)
    report = {
        "population": {
            "total": len(students),
            "by_group": _count_by(students, "group"),
            "by_label": _count_by(students, "label"),
        },
        "condition_table": {"rows": ["Experimental", "Control"], "cols": ["Rote", "Dabbler"], "counts": table},
        "chi_square": None
        if chi is None
        else {"statistic": chi.statistic, "df": list(chi.df), "p_value": chi.p_value},
        "label_policy_agreement": agreement,
        "training": service.analytics(Phase.TRAINING),
        "posttest": service.analytics(Phase.POSTTEST),
        "scores": _score_summary(students),
    }
    return ExperimentResult(students=students, logs=logs, report=report, chi_square=chi)


def _base_group(policy_name: str) -> str:
    return {"rote": "rote", "dabbler": "dabbler", "selective": "selective", "rote_exp_post": "rote"}[
        policy_name
    ]


def _count_by(students: list[dict], key: str) -> dict[str, int]:
    out: dict[str, int] = {}
    for student in students:
        out[student[key]] = out.get(student[key], 0) + 1
    return dict(sorted(out.items()))


def _score_summary(students: list[dict]) -> dict:
    out: dict[str, dict] = {}
    for student in students:
        bucket = out.setdefault(
            student["group"], {"pre": [], "post": [], "iso_post": [], "nlg": []}
        )
        scores = student["report"]["scores"]
        bucket["pre"].append(scores["pre"])
        bucket["post"].append(scores["post"])
        bucket["iso_post"].append(scores["iso_post"])
        if student["report"]["nlg"] is not None:
            bucket["nlg"].append(student["report"]["nlg"])
    summary = {}
    for group, bucket in sorted(out.items()):
        summary[group] = {
            name: (sum(values) / len(values) if values else None)
            for name, values in bucket.items()
        }
    return summary
