"""Acceptance gate: one test per primary criterion, each at its stated tolerance.

Every test prints a single machine-readable pass line once its assertions
hold; run with ``pytest -s tests/test_acceptance.py`` to see them.
"""

from __future__ import annotations

import json
import random
import time
from collections import Counter

import pytest

from logictutor.analytics import (
    SwitchBehavior,
    chi_square_2x2,
    classify_switch,
    group_switch_profile,
    one_way_anova,
    t_test,
)
from logictutor.classifier import (
    GroupLabel,
    evaluate as evaluate_forest,
    extract_features,
    train_forest,
)
from logictutor.curriculum import validate_curriculum
from logictutor.events import EventRecord, EventType, read_log, write_log
from logictutor.formulas import entails
from logictutor.interventions import DEFAULT_PROMPT_POLICY, sample_wait
from logictutor.proofs import apply_step, start_problem, switch_strategy
from logictutor.replay import session_report
from logictutor.rules import catalog, substitute
from logictutor.scoring import nlg
from logictutor.simulate import (
    PRESETS,
    PopulationGroup,
    PopulationSpec,
    run_experiment,
    run_pretest,
)

from conftest import random_formula


def ok(name: str, detail: str) -> None:
    print(f"[PASS] {name}: {detail}")


# -- criterion 1: chi-square reproduction -----------------------------------------


def test_chi_square_reproduction() -> None:
    chi_square_2x2([[35, 26], [25, 16]])  # warm the code path before timing
    start = time.perf_counter()
    result = chi_square_2x2([[35, 26], [25, 16]])
    elapsed_ms = (time.perf_counter() - start) * 1000.0
    assert result.statistic == pytest.approx(0.13, abs=0.005)
    assert result.p_value == pytest.approx(0.72, abs=0.01)
    assert elapsed_ms < 1.0
    ok(
        "chi-square reproduction",
        f"statistic={result.statistic:.4f} p={result.p_value:.4f} in {elapsed_ms:.3f} ms",
    )


# -- criterion 2: prompt-timing distribution ---------------------------------------


def test_prompt_timing_distribution() -> None:
    start = time.perf_counter()
    rng = random.Random(424242)
    draws = [sample_wait(DEFAULT_PROMPT_POLICY, rng) for _ in range(100_000)]
    elapsed = time.perf_counter() - start
    counts = Counter(draws)
    assert set(counts) <= {90.0, 180.0, 360.0}
    assert counts[90.0] / 100_000 == pytest.approx(0.55, abs=0.01)
    assert counts[180.0] / 100_000 == pytest.approx(0.35, abs=0.01)
    assert counts[360.0] / 100_000 == pytest.approx(0.10, abs=0.01)
    assert elapsed < 1.0
    ok(
        "prompt-timing distribution",
        f"90s={counts[90.0]/1000:.1f}% 180s={counts[180.0]/1000:.1f}% "
        f"360s={counts[360.0]/1000:.1f}% in {elapsed:.2f} s",
    )


# -- criterion 3: NLG contract ----------------------------------------------------


def test_nlg_contract() -> None:
    for x in (0.0, 25.0, 50.0, 75.0, 99.0):
        assert nlg(x, x) == pytest.approx(0.0, abs=1e-12)
    assert nlg(62.8, 77.4) == pytest.approx(0.239, abs=0.001)
    ok("NLG contract", f"nlg(x,x)=0 on 5 anchors; nlg(62.8,77.4)={nlg(62.8, 77.4):.4f}")


# -- criterion 4: proof-kernel soundness and corpus validation ----------------------


def test_proof_kernel_soundness_and_corpus(curriculum) -> None:
    start = time.perf_counter()
    rng = random.Random(1234)
    rules = catalog()
    pool = ["a", "b", "c"]
    from logictutor.formulas import atoms

    for _ in range(1000):
        rule = rules[rng.randrange(len(rules))]
        schema = rule.schemas[rng.randrange(len(rule.schemas))]
        metavars = set()
        for pattern in schema.premises:
            metavars |= atoms(pattern)
        bindings = {name: random_formula(rng, 2, pool) for name in sorted(metavars)}
        inputs = [substitute(pattern, bindings) for pattern in schema.premises]
        from logictutor.rules import apply_rule

        conclusion = apply_rule(rule, inputs)
        assert entails(inputs, conclusion), rule.name
    reports = validate_curriculum(curriculum)
    assert len(reports) == 28
    assert all(report.ok for report in reports), [
        (r.problem_id, r.failures) for r in reports if not r.ok
    ]
    we_count = 0
    for problem in curriculum.training:
        if problem.worked_example is None:
            continue
        we_count += 1
        state = switch_strategy(start_problem(problem), 0.0)
        for step in problem.worked_example.steps:
            state = apply_step(state, step.rule_name, list(step.parent_refs))
        assert state.completed
    assert we_count == 2
    elapsed = time.perf_counter() - start
    assert elapsed < 30.0
    ok(
        "proof-kernel soundness",
        f"1000 fuzzed applications sound; 28-problem corpus valid; "
        f"both WE scripts complete in {elapsed:.2f} s",
    )


# -- criterion 5: switch taxonomy ----------------------------------------------------


def _switch_log(action_index: int | None) -> list[EventRecord]:
    records = [EventRecord(1, 0, "s", "x", EventType.PROBLEM_STARTED, {"phase": "Training"})]
    if action_index is not None:
        records.append(
            EventRecord(
                2, 0, "s", "x", EventType.STRATEGY_SWITCHED,
                {"action_index": action_index, "elapsed_s": 0.0},
            )
        )
    return records


def test_switch_taxonomy_boundaries() -> None:
    assert classify_switch(_switch_log(None)) is SwitchBehavior.NO_SWITCH
    assert classify_switch(_switch_log(30)) is SwitchBehavior.EARLY_SWITCH
    assert classify_switch(_switch_log(31)) is SwitchBehavior.LATE_SWITCH
    logs = [("g", _switch_log(i)) for i in (None, None, None, 3, 30, 31, 77)]
    profile = group_switch_profile(logs)["g"]
    assert profile.pct_no + profile.pct_early + profile.pct_late == 100.0
    ok(
        "switch taxonomy",
        f"boundaries none/30/31 -> No/Early/Late; profile partitions to "
        f"{profile.pct_no:.2f}+{profile.pct_early:.2f}+{profile.pct_late:.2f}=100",
    )


# -- criteria 6 and 8 share one seeded experiment -------------------------------------


@pytest.fixture(scope="module")
def experiment(curriculum):
    spec = PopulationSpec(
        groups=(
            PopulationGroup(policy="rote", count=35, condition="Experimental"),
            PopulationGroup(policy="dabbler", count=26, condition="Experimental"),
            PopulationGroup(policy="rote", count=25, condition="Control"),
            PopulationGroup(policy="dabbler", count=16, condition="Control"),
            PopulationGroup(policy="selective", count=26, condition="SelectiveOriginal"),
        ),
        master_seed=20240801,
    )
    start = time.perf_counter()
    result = run_experiment(spec, curriculum)
    return result, time.perf_counter() - start


def test_fig4_shape_property(experiment) -> None:
    result, runtime = experiment
    assert runtime < 120.0
    for phase in ("training", "posttest"):
        profiles = result.report[phase]["profiles"]
        high = {"Selective", "Rote_Exp"}
        low = {"Dabbler_Exp", "Dabbler_Ctrl", "Rote_Ctrl"}
        assert high | low == set(profiles), profiles.keys()
        floor = min(profiles[g]["pct_early"] for g in high)
        ceiling = max(profiles[g]["pct_early"] for g in low)
        assert floor > ceiling, (phase, profiles)
        anova = result.report[phase]["early_fraction_anova"]
        assert anova["p_value"] < 0.001
        assert anova["df"][0] == 4  # five behaviour groups
    chi = result.chi_square
    assert chi is not None
    assert chi.statistic == pytest.approx(0.13, abs=0.005)
    training = result.report["training"]["early_fraction_anova"]
    ok(
        "fig-4 shape property",
        f"early% ordering holds in training and posttest; "
        f"F(4,123)={training['F']:.1f} p={training['p_value']:.2e}; "
        f"condition balance chi2={chi.statistic:.3f}; ran in {runtime:.1f} s",
    )


def test_replay_determinism_and_f_equals_t_squared(experiment, curriculum, tmp_path) -> None:
    result, _ = experiment
    students = result.students[:100]
    assert len(students) == 100
    for student in students:
        events = result.logs[student["student_id"]]
        path = tmp_path / f"{student['student_id']}.jsonl"
        write_log(events, path)
        rebuilt = session_report(read_log(path), curriculum)
        live = json.dumps(student["report"], sort_keys=True).encode()
        replayed = json.dumps(rebuilt, sort_keys=True).encode()
        assert live == replayed
    rng = random.Random(555)
    for _ in range(25):
        a = [rng.gauss(0.0, 1.0) for _ in range(rng.randint(4, 20))]
        b = [rng.gauss(0.3, 1.5) for _ in range(rng.randint(4, 20))]
        f_result = one_way_anova([a, b])
        t_result = t_test(a, b, "pooled")
        assert f_result.statistic == pytest.approx(t_result.statistic**2, rel=1e-9)
    ok(
        "replay determinism",
        "100 session reports byte-identical after log round-trip; "
        "F == t^2 within 1e-9 on 25 random 2-group inputs",
    )


# -- criterion 7: classifier property ---------------------------------------------------


def test_classifier_property(curriculum) -> None:
    start = time.perf_counter()
    roster = [("rote", GroupLabel.ROTE)] * 200 + [("dabbler", GroupLabel.DABBLER)] * 150 + [
        ("selective", GroupLabel.SELECTIVE)
    ] * 150
    dataset = []
    for i, (policy, label) in enumerate(roster):
        events = run_pretest(
            PRESETS[policy], curriculum, seed=31337 + i, student_id=f"{policy}_{i}"
        )
        dataset.append((extract_features(events), label))
    train = dataset[0::2]
    held_out = dataset[1::2]
    forest = train_forest(train, n_trees=100, max_depth=6, seed=7)
    metrics = evaluate_forest(forest, held_out)
    elapsed = time.perf_counter() - start
    assert len(dataset) == 500
    assert metrics["accuracy"] >= 0.95
    assert metrics["macro_recall"] >= 0.93
    assert metrics["macro_precision"] >= 0.93
    assert elapsed < 60.0
    ok(
        "classifier property",
        f"held-out accuracy={metrics['accuracy']:.3f} "
        f"macro_recall={metrics['macro_recall']:.3f} "
        f"macro_precision={metrics['macro_precision']:.3f} in {elapsed:.1f} s",
    )
