from __future__ import annotations

import pytest

from logictutor.scoring import (
    DegeneratePretestError,
    ScoreWeights,
    nlg,
    problem_score,
)
from logictutor.scoring import test_score as section_mean


def test_perfect_problem_scores_100() -> None:
    score = problem_score(
        completed=True,
        elapsed_s=300.0,
        accepted=3,
        rejected=0,
        proof_length=3,
        par_time_s=300.0,
        reference_length=3,
    )
    assert score.value == pytest.approx(100.0)


def test_uncompleted_problem_scores_zero() -> None:
    score = problem_score(
        completed=False,
        elapsed_s=50.0,
        accepted=2,
        rejected=5,
        proof_length=2,
        par_time_s=300.0,
        reference_length=3,
    )
    assert score.value == 0.0


def test_component_weighting_hand_case() -> None:
    # A=0.8, T=0.5, L=1.0 -> 100 * (0.4 + 0.15 + 0.2) = 75.
    score = problem_score(
        completed=True,
        elapsed_s=600.0,
        accepted=4,
        rejected=1,
        proof_length=2,
        par_time_s=300.0,
        reference_length=2,
    )
    assert score.accuracy == pytest.approx(0.8)
    assert score.time == pytest.approx(0.5)
    assert score.length == pytest.approx(1.0)
    assert score.value == pytest.approx(75.0)


def test_negative_inputs_rejected() -> None:
    with pytest.raises(ValueError):
        problem_score(True, -1.0, 1, 0, 1, 300.0, 1)
    with pytest.raises(ValueError):
        problem_score(True, 10.0, -1, 0, 1, 300.0, 1)
    with pytest.raises(ValueError):
        problem_score(True, 10.0, 1, 0, 1, 0.0, 1)


def test_score_monotone_in_elapsed_and_rejections() -> None:
    base = dict(completed=True, accepted=3, proof_length=3, par_time_s=300.0, reference_length=3)
    faster = problem_score(elapsed_s=200.0, rejected=0, **base)
    slower = problem_score(elapsed_s=900.0, rejected=0, **base)
    assert faster.value >= slower.value
    clean = problem_score(elapsed_s=200.0, rejected=0, **base)
    sloppy = problem_score(elapsed_s=200.0, rejected=4, **base)
    assert clean.value >= sloppy.value


def test_weights_must_sum_to_one() -> None:
    with pytest.raises(ValueError):
        ScoreWeights(accuracy=0.5, time=0.5, length=0.5)


def test_test_score_mean() -> None:
    assert section_mean([100.0, 50.0]) == pytest.approx(75.0)
    assert section_mean([0.0] * 6) == 0.0
    assert section_mean([80.0, 70.0, 90.0]) == pytest.approx(80.0)


def test_test_score_empty_section() -> None:
    with pytest.raises(ValueError):
        section_mean([])


def test_nlg_zero_when_no_gain() -> None:
    for value in (0.0, 25.0, 50.0, 75.0, 99.0):
        assert nlg(value, value) == pytest.approx(0.0)


def test_nlg_unit_scale_hand_case() -> None:
    # (0.774 - 0.628) / sqrt(1 - 0.628) = 0.2394
    assert nlg(62.8, 77.4) == pytest.approx(0.239, abs=0.001)


def test_nlg_degenerate_pretest() -> None:
    with pytest.raises(DegeneratePretestError):
        nlg(100.0, 100.0)
    with pytest.raises(DegeneratePretestError):
        nlg(99.95, 100.0)


def test_nlg_strictly_increasing_in_post() -> None:
    values = [nlg(50.0, post) for post in (40.0, 50.0, 60.0, 80.0, 100.0)]
    assert values == sorted(values)
    assert values[0] < 0 < values[-1]
