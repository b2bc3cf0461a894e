"""One problem's proof state: step acceptance, the FC -> BC switch, completion.

Forward chaining (FC) derives the problem's conclusion from the givens.
Backward chaining (BC) here means proof by contradiction: the negation of
the conclusion joins the working premises and the target becomes the
contradiction constant.  The switch is one-way and at most once per problem.

An *action* is an accepted step, a rejected attempt, or the switch itself;
actions are numbered from 1.  This definition feeds the switch-behavior
taxonomy downstream, so every mutation here keeps ``action_count`` exact.

States are values: every operation returns a new state.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field, replace
from enum import Enum

from .formulas import BOTTOM, Formula, Not
from .rules import (
    ArityMismatchError,
    PatternMismatchError,
    apply_rule,
    rule_by_name,
)

__all__ = [
    "Mode",
    "ProofState",
    "DerivedNode",
    "SwitchRecord",
    "ProofError",
    "DanglingReferenceError",
    "CompletedProblemError",
    "AlreadyBackwardError",
    "start_problem",
    "apply_step",
    "switch_strategy",
    "check_completion",
]


class Mode(str, Enum):
    FC = "FC"
    BC = "BC"


class ProofError(Exception):
    pass


class DanglingReferenceError(ProofError):
    def __init__(self, ref: str):
        super().__init__(f"reference {ref!r} does not resolve to a premise or earlier node")
        self.ref = ref


class CompletedProblemError(ProofError):
    def __init__(self) -> None:
        super().__init__("the problem is already completed")


class AlreadyBackwardError(ProofError):
    def __init__(self) -> None:
        super().__init__("already in BC mode; the switch is one-way")


@dataclass(frozen=True)
class DerivedNode:
    formula: Formula
    rule_name: str
    parent_refs: tuple[str, ...]
    action_index: int
    timestamp_ms: int = 0


@dataclass(frozen=True)
class SwitchRecord:
    action_index: int
    elapsed_s: float


@dataclass(frozen=True)
class ProofState:
    problem_id: str
    mode: Mode
    givens: tuple[Formula, ...]
    conclusion: Formula
    target: Formula
    nodes: tuple[DerivedNode, ...] = ()
    action_count: int = 0
    accepted_steps: int = 0
    rejected_attempts: int = 0
    switch_record: SwitchRecord | None = None
    completed: bool = field(default=False)

    @property
    def working_premises(self) -> tuple[Formula, ...]:
        """Givens, extended with the negated conclusion once in BC mode."""
        if self.mode is Mode.BC:
            return self.givens + (Not(self.conclusion),)
        return self.givens


_REF_RE = re.compile(r"([gn])(\d+)")


def _resolve(state: ProofState, ref: str) -> Formula:
    m = _REF_RE.fullmatch(ref)
    if not m:
        raise DanglingReferenceError(ref)
    kind, index = m.group(1), int(m.group(2))
    pool = state.working_premises if kind == "g" else state.nodes
    if index >= len(pool):
        raise DanglingReferenceError(ref)
    item = pool[index]
    return item if kind == "g" else item.formula  # type: ignore[union-attr]


def start_problem(problem) -> ProofState:
    """Fresh FC state for a curriculum problem (``id``, ``givens``, ``conclusion``)."""
    return ProofState(
        problem_id=problem.id,
        mode=Mode.FC,
        givens=tuple(problem.givens),
        conclusion=problem.conclusion,
        target=problem.conclusion,
    )


def apply_step(
    state: ProofState,
    rule_name: str,
    parent_refs: list[str],
    timestamp_ms: int = 0,
) -> ProofState:
    """Attempt one inference step.

    A pattern or premise-count mismatch is a normal student mistake: the
    attempt is counted and rejected, and the state is otherwise unchanged.
    Unknown rules and dangling references are caller errors and raise.
    """
    if state.completed:
        raise CompletedProblemError()
    rule = rule_by_name(rule_name)
    inputs = [_resolve(state, ref) for ref in parent_refs]
    try:
        derived = apply_rule(rule, inputs)
    except (PatternMismatchError, ArityMismatchError):
        return replace(
            state,
            action_count=state.action_count + 1,
            rejected_attempts=state.rejected_attempts + 1,
        )
    node = DerivedNode(
        formula=derived,
        rule_name=rule_name,
        parent_refs=tuple(parent_refs),
        action_index=state.action_count + 1,
        timestamp_ms=timestamp_ms,
    )
    return replace(
        state,
        nodes=state.nodes + (node,),
        action_count=state.action_count + 1,
        accepted_steps=state.accepted_steps + 1,
        completed=derived == state.target,
    )


def switch_strategy(state: ProofState, elapsed_s: float) -> ProofState:
    """Switch the proof into BC mode.

    The negated conclusion is appended literally (no simplification; a
    double negation must be removed by an explicit rule application), the
    target becomes the contradiction constant, and every derived node is
    retained: the premise set only grew, so prior justifications stand.
    """
    if state.completed:
        raise CompletedProblemError()
    if state.mode is Mode.BC:
        raise AlreadyBackwardError()
    return replace(
        state,
        mode=Mode.BC,
        target=BOTTOM,
        action_count=state.action_count + 1,
        switch_record=SwitchRecord(action_index=state.action_count + 1, elapsed_s=elapsed_s),
        completed=any(node.formula == BOTTOM for node in state.nodes),
    )


def check_completion(state: ProofState) -> bool:
    """True iff some derived node structurally equals the current target."""
    return any(node.formula == state.target for node in state.nodes)
