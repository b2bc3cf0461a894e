"""Per-problem scores, test scores on [0, 100], and normalized learning gain.

A completed problem is graded on accuracy (share of accepted attempts),
time (par time over elapsed), and solution length (reference proof length
over actual), combined with configurable weights.  Uncompleted problems
score zero.  The learning gain is computed on unit-scaled scores:
``(post - pre) / sqrt(max - pre)`` with the literal maximum of 100 yields
values an order of magnitude larger than any gain reported for this kind
of instrument, so scores are divided by 100 first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "ScoreWeights",
    "ProblemScore",
    "TestScores",
    "DEFAULT_WEIGHTS",
    "DegeneratePretestError",
    "problem_score",
    "test_score",
    "nlg",
]


@dataclass(frozen=True)
class ScoreWeights:
    accuracy: float = 0.5
    time: float = 0.3
    length: float = 0.2

    def __post_init__(self) -> None:
        if abs(self.accuracy + self.time + self.length - 1.0) > 1e-12:
            raise ValueError("score weights must sum to 1")


DEFAULT_WEIGHTS = ScoreWeights()


@dataclass(frozen=True)
class ProblemScore:
    value: float
    accuracy: float
    time: float
    length: float


@dataclass(frozen=True)
class TestScores:
    pre: float
    post: float
    iso_post: float


class DegeneratePretestError(ValueError):
    pass


def problem_score(
    completed: bool,
    elapsed_s: float,
    accepted: int,
    rejected: int,
    proof_length: int,
    par_time_s: float,
    reference_length: int,
    weights: ScoreWeights = DEFAULT_WEIGHTS,
) -> ProblemScore:
    """Score one problem on [0, 100]."""
    if min(accepted, rejected, proof_length) < 0 or elapsed_s < 0:
        raise ValueError("counts and elapsed time must be non-negative")
    if par_time_s <= 0 or reference_length <= 0:
        raise ValueError("par time and reference length must be positive")
    if not completed:
        return ProblemScore(0.0, 0.0, 0.0, 0.0)
    attempts = accepted + rejected
    accuracy = accepted / attempts if attempts else 1.0
    time_component = 1.0 if elapsed_s <= 0 else min(1.0, par_time_s / elapsed_s)
    length_component = 1.0 if proof_length <= 0 else min(1.0, reference_length / proof_length)
    value = 100.0 * (
        weights.accuracy * accuracy
        + weights.time * time_component
        + weights.length * length_component
    )
    return ProblemScore(value, accuracy, time_component, length_component)


def test_score(problem_scores: list[float]) -> float:
    """Arithmetic mean of a test section's problem scores."""
    if not problem_scores:
        raise ValueError("empty test section")
    return sum(problem_scores) / len(problem_scores)


def nlg(pre: float, post: float) -> float:
    """Normalized learning gain on unit-scaled [0, 100] test scores."""
    if pre > 99.9:
        raise DegeneratePretestError(f"gain undefined for pretest {pre} (> 99.9)")
    return (post / 100.0 - pre / 100.0) / math.sqrt(1.0 - pre / 100.0)
