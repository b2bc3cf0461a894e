"""Problem corpus: schema, loading, validation, and the bundled curriculum.

A curriculum file is YAML with formulas as plain text in the package
grammar.  The layout is fixed by the study protocol: 2 pretest problems,
20 training problems in five levels of four, and 6 posttest problems of
which exactly 2 are isomorphic to the pretest pair.  Worked examples are
scripted BC demonstrations attached to the first problems of training
levels 1 and 2; whether they play depends on the session's condition
variant, not on the corpus.

Every load runs the structural checks; :func:`validate_problem` also runs
the semantic ones (entailment, solvability in both modes, reference-length
consistency) via the truth-table oracle and the bounded reference prover.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import yaml

from .formulas import Formula, entails, format_formula, parse, satisfiable
from .interventions import Condition
from .proofs import Mode, apply_step, start_problem, switch_strategy
from .prover import MAX_DEPTH_LIMIT, solve

__all__ = [
    "Phase",
    "WorkedExampleStep",
    "WorkedExampleScript",
    "Problem",
    "ConditionVariant",
    "CurriculumConfig",
    "CurriculumError",
    "ValidationReport",
    "load_curriculum",
    "default_curriculum",
    "validate_problem",
    "validate_curriculum",
    "solve",
]


class Phase(str, Enum):
    PRETEST = "Pretest"
    TRAINING = "Training"
    POSTTEST = "Posttest"
    DONE = "Done"


class CurriculumError(ValueError):
    pass


@dataclass(frozen=True)
class WorkedExampleStep:
    rule_name: str
    parent_refs: tuple[str, ...]
    result: Formula
    commentary: str


@dataclass(frozen=True)
class WorkedExampleScript:
    strategy: Mode
    steps: tuple[WorkedExampleStep, ...]


@dataclass(frozen=True)
class Problem:
    id: str
    phase: Phase
    givens: tuple[Formula, ...]
    conclusion: Formula
    proper_for_bc: bool
    par_time_s: float
    reference_length: int
    level: int | None = None
    ordinal: int | None = None
    worked_example: WorkedExampleScript | None = None
    isomorphic_to: str | None = None


@dataclass(frozen=True)
class ConditionVariant:
    we_enabled: bool
    prompts_enabled: bool


@dataclass(frozen=True)
class CurriculumConfig:
    problems: tuple[Problem, ...]
    condition_variants: dict[Condition, ConditionVariant]

    @property
    def pretest(self) -> tuple[Problem, ...]:
        return tuple(p for p in self.problems if p.phase is Phase.PRETEST)

    @property
    def training(self) -> tuple[Problem, ...]:
        ordered = [p for p in self.problems if p.phase is Phase.TRAINING]
        return tuple(sorted(ordered, key=lambda p: (p.level, p.ordinal)))

    @property
    def posttest(self) -> tuple[Problem, ...]:
        return tuple(p for p in self.problems if p.phase is Phase.POSTTEST)

    def sequence(self) -> tuple[Problem, ...]:
        """Problems in strict presentation order across the three phases."""
        return self.pretest + self.training + self.posttest

    def by_id(self, problem_id: str) -> Problem:
        for p in self.problems:
            if p.id == problem_id:
                return p
        raise KeyError(problem_id)

    def variant(self, condition: Condition) -> ConditionVariant:
        if condition is Condition.EXPERIMENTAL:
            return self.condition_variants[Condition.EXPERIMENTAL]
        return self.condition_variants[Condition.CONTROL]


@dataclass
class ValidationReport:
    problem_id: str
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


def _parse_formula(text, context: str) -> Formula:
    if not isinstance(text, str):
        raise CurriculumError(f"{context}: formula must be a string, got {text!r}")
    try:
        return parse(text)
    except ValueError as exc:
        raise CurriculumError(f"{context}: {exc}") from exc


def _parse_worked_example(raw, context: str) -> WorkedExampleScript:
    strategy = raw.get("strategy", "BC")
    if strategy != "BC":
        raise CurriculumError(f"{context}: worked examples demonstrate BC only")
    steps = []
    for i, step in enumerate(raw.get("steps", [])):
        steps.append(
            WorkedExampleStep(
                rule_name=step["rule"],
                parent_refs=tuple(step["refs"]),
                result=_parse_formula(step["result"], f"{context} step {i}"),
                commentary=step.get("commentary", ""),
            )
        )
    if not steps:
        raise CurriculumError(f"{context}: worked example has no steps")
    return WorkedExampleScript(strategy=Mode.BC, steps=tuple(steps))


def _parse_problem(raw, index: int) -> Problem:
    context = f"problem[{index}]"
    try:
        problem_id = raw["id"]
        phase = Phase(raw["phase"])
        givens = tuple(_parse_formula(g, f"{context}.givens") for g in raw["givens"])
        conclusion = _parse_formula(raw["conclusion"], f"{context}.conclusion")
    except (KeyError, ValueError) as exc:
        raise CurriculumError(f"{context}: {exc}") from exc
    worked_example = None
    if "worked_example" in raw and raw["worked_example"] is not None:
        if phase is not Phase.TRAINING:
            raise CurriculumError(f"{context}: worked examples belong to Training problems")
        worked_example = _parse_worked_example(raw["worked_example"], context)
    level = raw.get("level")
    ordinal = raw.get("ordinal")
    if phase is Phase.TRAINING:
        if level not in (1, 2, 3, 4, 5) or ordinal not in (1, 2, 3, 4):
            raise CurriculumError(f"{context}: training problems need level 1-5 and ordinal 1-4")
    return Problem(
        id=problem_id,
        phase=phase,
        givens=givens,
        conclusion=conclusion,
        proper_for_bc=bool(raw.get("proper_for_bc", False)),
        par_time_s=float(raw.get("par_time_s", 300.0)),
        reference_length=int(raw["reference_length"]),
        level=level,
        ordinal=ordinal,
        worked_example=worked_example,
        isomorphic_to=raw.get("isomorphic_to"),
    )


def _check_structure(config: CurriculumConfig) -> None:
    pre, training, post = config.pretest, config.training, config.posttest
    if len(pre) != 2:
        raise CurriculumError(f"expected 2 pretest problems, found {len(pre)}")
    if len(training) != 20:
        raise CurriculumError(f"expected 20 training problems, found {len(training)}")
    if len(post) != 6:
        raise CurriculumError(f"expected 6 posttest problems, found {len(post)}")
    slots = {(p.level, p.ordinal) for p in training}
    expected_slots = {(lvl, ordn) for lvl in range(1, 6) for ordn in range(1, 5)}
    if slots != expected_slots:
        raise CurriculumError("training problems must fill levels 1-5 x ordinals 1-4 exactly")
    ids = [p.id for p in config.problems]
    if len(set(ids)) != len(ids):
        raise CurriculumError("duplicate problem ids")
    pretest_ids = {p.id for p in pre}
    iso = [p for p in post if p.isomorphic_to is not None]
    if len(iso) != 2 or {p.isomorphic_to for p in iso} != pretest_ids:
        raise CurriculumError(
            "exactly 2 posttest problems must be isomorphic to the 2 pretest problems"
        )
    for p in config.problems:
        if p.phase is not Phase.POSTTEST and p.isomorphic_to is not None:
            raise CurriculumError(f"{p.id}: only posttest problems may declare isomorphic_to")
        if p.conclusion in p.givens:
            raise CurriculumError(f"{p.id}: conclusion already among the givens")
    we_slots = {(p.level, p.ordinal) for p in training if p.worked_example is not None}
    if we_slots != {(1, 1), (2, 1)}:
        raise CurriculumError(
            "worked examples must sit exactly on training slots (1,1) and (2,1)"
        )


def load_curriculum(path: str | Path) -> CurriculumConfig:
    """Load and structurally validate a curriculum file."""
    with open(path, "r", encoding="utf-8") as handle:
        raw = yaml.safe_load(handle)
    return _load_from_raw(raw)


def _load_from_raw(raw) -> CurriculumConfig:
    if not isinstance(raw, dict) or "problems" not in raw:
        raise CurriculumError("curriculum document must contain a 'problems' list")
    problems = tuple(_parse_problem(p, i) for i, p in enumerate(raw["problems"]))
    variants_raw = raw.get("condition_variants", {})
    variants = {
        Condition.EXPERIMENTAL: ConditionVariant(
            we_enabled=bool(variants_raw.get("Experimental", {}).get("we_enabled", True)),
            prompts_enabled=bool(variants_raw.get("Experimental", {}).get("prompts_enabled", True)),
        ),
        Condition.CONTROL: ConditionVariant(
            we_enabled=bool(variants_raw.get("Control", {}).get("we_enabled", False)),
            prompts_enabled=bool(variants_raw.get("Control", {}).get("prompts_enabled", False)),
        ),
    }
    config = CurriculumConfig(problems=problems, condition_variants=variants)
    _check_structure(config)
    for problem in config.problems:
        if not entails(list(problem.givens), problem.conclusion):
            raise CurriculumError(f"{problem.id}: givens do not entail the conclusion")
    return config


def default_curriculum() -> CurriculumConfig:
    """The corpus bundled with the package."""
    source = resources.files("logictutor").joinpath("data/default_curriculum.yaml")
    with resources.as_file(source) as path:
        return load_curriculum(path)


def _replay_worked_example(problem: Problem) -> list[str]:
    failures = []
    state = switch_strategy(start_problem(problem), elapsed_s=0.0)
    script = problem.worked_example
    assert script is not None
    for i, step in enumerate(script.steps):
        before = len(state.nodes)
        state = apply_step(state, step.rule_name, list(step.parent_refs))
        if len(state.nodes) == before:
            failures.append(f"worked example step {i} ({step.rule_name}) was rejected")
            return failures
        if state.nodes[-1].formula != step.result:
            failures.append(
                f"worked example step {i} derives "
                f"{format_formula(state.nodes[-1].formula)}, "
                f"script declares {format_formula(step.result)}"
            )
    if not state.completed:
        failures.append("worked example does not complete the BC proof")
    return failures


def validate_problem(problem: Problem, depth_limit: int = MAX_DEPTH_LIMIT) -> ValidationReport:
    """Full semantic validation of one problem; the report carries all failures."""
    report = ValidationReport(problem_id=problem.id)
    if problem.conclusion in problem.givens:
        report.failures.append("conclusion already among the givens")
    if not satisfiable(list(problem.givens)):
        report.failures.append("givens are inconsistent")
    if not entails(list(problem.givens), problem.conclusion):
        report.failures.append("givens do not entail the conclusion")
        return report
    fc_proof = solve(problem, Mode.FC, depth_limit)
    bc_proof = solve(problem, Mode.BC, depth_limit)
    if fc_proof is None:
        report.failures.append(f"FC unsolvable within depth {depth_limit}")
    if bc_proof is None:
        report.failures.append(f"BC unsolvable within depth {depth_limit}")
    if fc_proof is not None and bc_proof is not None:
        found = min(len(fc_proof), len(bc_proof))
        if found != problem.reference_length:
            report.failures.append(
                f"reference_length is {problem.reference_length}, prover found {found}"
            )
    if problem.worked_example is not None:
        report.failures.extend(_replay_worked_example(problem))
    return report


def validate_curriculum(
    config: CurriculumConfig, depth_limit: int = MAX_DEPTH_LIMIT
) -> list[ValidationReport]:
    """Validate every problem; structural checks already ran at load time."""
    return [validate_problem(p, depth_limit) for p in config.problems]
