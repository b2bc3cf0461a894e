"""Switch-behavior taxonomy and the statistical tests used to evaluate runs.

A strategy switch within the first 30 actions of a problem counts as early
(inclusive threshold), later switches as late.  Group profiles are computed
per problem with exact rational arithmetic so that the three percentages
partition 100 before any float formatting.

The tests are the ones the evaluation needs: Pearson chi-square on a 2x2
contingency table (no continuity correction), one-way ANOVA with eta
squared, and pooled / Welch two-sample t-tests with Cohen's d.  P-values
come from the in-house survival functions in :mod:`logictutor.special`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .events import EventRecord, EventType
from .special import chi2_sf, f_sf, student_t_sf

__all__ = [
    "EARLY_SWITCH_ACTION_THRESHOLD",
    "SwitchBehavior",
    "StatResult",
    "SwitchProfile",
    "MultipleSwitchError",
    "DegenerateSampleError",
    "classify_switch",
    "group_switch_profile",
    "chi_square_2x2",
    "one_way_anova",
    "t_test",
]

EARLY_SWITCH_ACTION_THRESHOLD = 30


class SwitchBehavior(str, Enum):
    NO_SWITCH = "NoSwitch"
    EARLY_SWITCH = "EarlySwitch"
    LATE_SWITCH = "LateSwitch"


class MultipleSwitchError(ValueError):
    pass


class DegenerateSampleError(ValueError):
    pass


@dataclass(frozen=True)
class StatResult:
    statistic: float
    df: tuple[float, ...]
    p_value: float
    effect_size: float | None = None


@dataclass(frozen=True)
class SwitchProfile:
    pct_no: float
    pct_early: float
    pct_late: float
    problems: int


def classify_switch(problem_log: list[EventRecord]) -> SwitchBehavior:
    """Classify one problem's log; the switch itself counts as an action."""
    switches = [r for r in problem_log if r.event_type == EventType.STRATEGY_SWITCHED]
    if len(switches) > 1:
        raise MultipleSwitchError(
            f"{len(switches)} switch events for one problem; at most one is allowed"
        )
    if not switches:
        return SwitchBehavior.NO_SWITCH
    action_index = switches[0].payload["action_index"]
    if action_index <= EARLY_SWITCH_ACTION_THRESHOLD:
        return SwitchBehavior.EARLY_SWITCH
    return SwitchBehavior.LATE_SWITCH


def group_switch_profile(
    problem_logs: list[tuple[str, list[EventRecord]]],
) -> dict[str, SwitchProfile]:
    """Per-group switch percentages over (group label, one problem's log) pairs.

    Percentages are exact fractions of the group's problem count; they sum
    to 100 by construction.
    """
    counts: dict[str, dict[SwitchBehavior, int]] = {}
    for group, log in problem_logs:
        bucket = counts.setdefault(group, {b: 0 for b in SwitchBehavior})
        bucket[classify_switch(log)] += 1
    profiles: dict[str, SwitchProfile] = {}
    for group, bucket in counts.items():
        total = sum(bucket.values())
        if total == 0:
            continue
        pct = {b: Fraction(100) * Fraction(bucket[b], total) for b in SwitchBehavior}
        assert sum(pct.values()) == 100
        profiles[group] = SwitchProfile(
            pct_no=float(pct[SwitchBehavior.NO_SWITCH]),
            pct_early=float(pct[SwitchBehavior.EARLY_SWITCH]),
            pct_late=float(pct[SwitchBehavior.LATE_SWITCH]),
            problems=total,
        )
    return profiles


def chi_square_2x2(counts: list[list[float]]) -> StatResult:
    """Pearson chi-square on a 2x2 table, df=1, no continuity correction."""
    if len(counts) != 2 or any(len(row) != 2 for row in counts):
        raise ValueError("expected a 2x2 table")
    row_totals = [sum(row) for row in counts]
    col_totals = [counts[0][j] + counts[1][j] for j in range(2)]
    grand = sum(row_totals)
    statistic = 0.0
    for i in range(2):
        for j in range(2):
            expected = row_totals[i] * col_totals[j] / grand if grand else 0.0
            if expected <= 0:
                raise ValueError("all expected counts must be positive")
            statistic += (counts[i][j] - expected) ** 2 / expected
    return StatResult(statistic=statistic, df=(1,), p_value=chi2_sf(statistic, 1))


def one_way_anova(groups: list[list[float]]) -> StatResult:
    """One-way ANOVA; effect size is eta squared."""
    if len(groups) < 2:
        raise ValueError("at least two groups required")
    for group in groups:
        if len(group) < 2:
            raise DegenerateSampleError("each group needs at least two observations")
    n_total = sum(len(g) for g in groups)
    grand_mean = sum(sum(g) for g in groups) / n_total
    ss_between = sum(len(g) * (sum(g) / len(g) - grand_mean) ** 2 for g in groups)
    ss_within = sum(sum((x - sum(g) / len(g)) ** 2 for x in g) for g in groups)
    df_between = len(groups) - 1
    df_within = n_total - len(groups)
    ss_total = ss_between + ss_within
    if ss_within == 0:
        if ss_between == 0:
            return StatResult(0.0, (df_between, df_within), 1.0, 0.0)
        raise DegenerateSampleError("zero within-group variance")
    f_value = (ss_between / df_between) / (ss_within / df_within)
    eta_squared = ss_between / ss_total if ss_total > 0 else 0.0
    return StatResult(
        statistic=f_value,
        df=(df_between, df_within),
        p_value=f_sf(f_value, df_between, df_within),
        effect_size=eta_squared,
    )


def _mean_var(sample: list[float]) -> tuple[float, float]:
    n = len(sample)
    mean = sum(sample) / n
    var = sum((x - mean) ** 2 for x in sample) / (n - 1)
    return mean, var


def t_test(sample_a: list[float], sample_b: list[float], variant: str = "pooled") -> StatResult:
    """Two-sample t-test, two-tailed; effect size is Cohen's d (pooled SD)."""
    if variant not in ("pooled", "welch"):
        raise ValueError(f"unknown variant: {variant}")
    if len(sample_a) < 2 or len(sample_b) < 2:
        raise DegenerateSampleError("each sample needs at least two observations")
    na, nb = len(sample_a), len(sample_b)
    mean_a, var_a = _mean_var(sample_a)
    mean_b, var_b = _mean_var(sample_b)
    pooled_var = ((na - 1) * var_a + (nb - 1) * var_b) / (na + nb - 2)
    if variant == "pooled":
        se = math.sqrt(pooled_var * (1.0 / na + 1.0 / nb))
        df: float = na + nb - 2
    else:
        se = math.sqrt(var_a / na + var_b / nb)
        if se == 0:
            raise DegenerateSampleError("zero variance in both samples")
        df_num = (var_a / na + var_b / nb) ** 2
        df_den = (var_a / na) ** 2 / (na - 1) + (var_b / nb) ** 2 / (nb - 1)
        df = df_num / df_den
    if se == 0:
        raise DegenerateSampleError("zero variance in both samples")
    t_value = (mean_a - mean_b) / se
    cohens_d = (mean_a - mean_b) / math.sqrt(pooled_var) if pooled_var > 0 else 0.0
    return StatResult(
        statistic=t_value,
        df=(df,),
        p_value=student_t_sf(t_value, df),
        effect_size=cohens_d,
    )
