"""When to show the BC-switch prompt and where worked examples appear.

Prompts are advisory: the decision functions never mutate proof state, and
a student is free to ignore the banner.  Each problem samples one wait from
the timing distribution at problem start; the prompt fires at most once.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from enum import Enum

from .proofs import Mode, ProofState

__all__ = [
    "Condition",
    "PromptPolicy",
    "PromptReason",
    "PromptDecision",
    "DEFAULT_PROMPT_POLICY",
    "DEFAULT_PROMPT_TEXT",
    "sample_wait",
    "should_prompt",
    "we_placement",
]


class Condition(str, Enum):
    EXPERIMENTAL = "Experimental"
    CONTROL = "Control"
    SELECTIVE_ORIGINAL = "SelectiveOriginal"
    UNASSIGNED = "Unassigned"


DEFAULT_PROMPT_TEXT = (
    "You have been working forward for a while. This problem can be solved "
    "more easily by deriving a contradiction: consider switching to backward "
    "chaining with the yellow button."
)


@dataclass(frozen=True)
class PromptPolicy:
    """Wait-time distribution over seconds; probabilities must sum to 1."""

    wait_distribution: tuple[tuple[float, float], ...] = (
        (90.0, 0.55),
        (180.0, 0.35),
        (360.0, 0.10),
    )
    max_prompts_per_problem: int = 1

    def __post_init__(self) -> None:
        durations = [d for d, _ in self.wait_distribution]
        if len(set(durations)) != len(durations) or any(d <= 0 for d in durations):
            raise ValueError("wait durations must be positive and distinct")
        total = sum(p for _, p in self.wait_distribution)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"wait probabilities sum to {total}, expected 1.0")


DEFAULT_PROMPT_POLICY = PromptPolicy()


class PromptReason(str, Enum):
    NOT_EXPERIMENTAL = "NotExperimental"
    NOT_PROPER_PROBLEM = "NotProperProblem"
    ALREADY_BC = "AlreadyBC"
    WAIT_NOT_ELAPSED = "WaitNotElapsed"
    ALREADY_PROMPTED = "AlreadyPrompted"
    COMPLETED = "Completed"
    SHOW = "Show"


@dataclass(frozen=True)
class PromptDecision:
    show: bool
    reason: PromptReason

    def __post_init__(self) -> None:
        assert self.show == (self.reason is PromptReason.SHOW)


def sample_wait(policy: PromptPolicy, rng: random.Random) -> float:
    """Draw one wait duration; called once per problem at problem start."""
    roll = rng.random()
    cumulative = 0.0
    for duration, probability in policy.wait_distribution:
        cumulative += probability
        if roll < cumulative:
            return duration
    return policy.wait_distribution[-1][0]


def should_prompt(
    state: ProofState,
    elapsed_s: float,
    condition: Condition,
    problem,
    sampled_wait: float,
    already_prompted: bool,
) -> PromptDecision:
    """Pure prompt decision; only Experimental sessions on proper problems qualify."""
    if condition is not Condition.EXPERIMENTAL:
        return PromptDecision(False, PromptReason.NOT_EXPERIMENTAL)
    if not problem.proper_for_bc:
        return PromptDecision(False, PromptReason.NOT_PROPER_PROBLEM)
    if state.mode is not Mode.FC:
        return PromptDecision(False, PromptReason.ALREADY_BC)
    if state.completed:
        return PromptDecision(False, PromptReason.COMPLETED)
    if already_prompted:
        return PromptDecision(False, PromptReason.ALREADY_PROMPTED)
    if elapsed_s < sampled_wait:
        return PromptDecision(False, PromptReason.WAIT_NOT_ELAPSED)
    return PromptDecision(True, PromptReason.SHOW)


def we_placement(condition: Condition) -> frozenset[tuple[int, int]]:
    """(level, ordinal) slots whose problems play as worked examples."""
    if condition is Condition.EXPERIMENTAL:
        return frozenset({(1, 1), (2, 1)})
    return frozenset()
