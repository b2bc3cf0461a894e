"""Command-line entry points: serve, validate, simulate, analyze, grade, classify."""

from __future__ import annotations

import json
from pathlib import Path

import click
import yaml

from .analytics import one_way_anova, group_switch_profile
from .classifier import extract_features, load_forest, predict, rule_baseline
from .curriculum import Phase, default_curriculum, load_curriculum, validate_curriculum
from .events import read_log, write_log
from .interventions import DEFAULT_PROMPT_TEXT, PromptPolicy
from .replay import session_report, split_by_problem
from .analytics import SwitchBehavior, classify_switch
from .scoring import ScoreWeights
from .service import ServiceConfig, TutorService
from .simulate import load_population_spec, run_experiment


def _load_curriculum(path: str | None):
    return load_curriculum(path) if path else default_curriculum()


def load_service_config(path: str | None) -> ServiceConfig:
    if path is None:
        return ServiceConfig()
    with open(path, "r", encoding="utf-8") as handle:
        raw = yaml.safe_load(handle) or {}
    weights_raw = raw.get("score_weights", {})
    policy_raw = raw.get("prompt_wait_distribution")
    policy = (
        PromptPolicy(wait_distribution=tuple((float(d), float(p)) for d, p in policy_raw))
        if policy_raw
        else PromptPolicy()
    )
    return ServiceConfig(
        split_ratio=float(raw.get("split_ratio", 0.6)),
        prompt_text=raw.get("prompt_text", DEFAULT_PROMPT_TEXT),
        prompt_policy=policy,
        score_weights=ScoreWeights(
            accuracy=float(weights_raw.get("accuracy", 0.5)),
            time=float(weights_raw.get("time", 0.3)),
            length=float(weights_raw.get("length", 0.2)),
        ),
        seed=int(raw.get("seed", 0)),
        host=raw.get("host", "127.0.0.1"),
        port=int(raw.get("port", 8420)),
    )


@click.group()
def main() -> None:
    """Propositional proof tutor: engine, simulator, and analytics."""


@main.command()
@click.option("--curriculum", "curriculum_path", type=click.Path(exists=True), default=None)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
def serve(curriculum_path: str | None, config_path: str | None) -> None:
    """Run the HTTP API."""
    import uvicorn

    from .server import create_app

    config = load_service_config(config_path)
    service = TutorService(_load_curriculum(curriculum_path), config)
    uvicorn.run(create_app(service), host=config.host, port=config.port)


@main.command()
@click.option("--curriculum", "curriculum_path", type=click.Path(exists=True), default=None)
def validate(curriculum_path: str | None) -> None:
    """Load a curriculum and run the full semantic validation."""
    config = _load_curriculum(curriculum_path)
    reports = validate_curriculum(config)
    failures = 0
    for report in reports:
        status = "ok" if report.ok else "FAIL"
        click.echo(f"{report.problem_id:10} {status}")
        for failure in report.failures:
            failures += 1
            click.echo(f"    - {failure}")
    click.echo(f"{len(reports)} problems checked, {failures} failure(s)")
    if failures:
        raise SystemExit(1)


@main.command()
@click.option("--population", "population_path", type=click.Path(exists=True), required=True)
@click.option("--curriculum", "curriculum_path", type=click.Path(exists=True), default=None)
@click.option("--seed", type=int, default=None, help="Override the spec's master seed.")
@click.option("--out", "out_dir", type=click.Path(), required=True)
def simulate(population_path: str, curriculum_path: str | None, seed: int | None, out_dir: str) -> None:
    """Run a simulated experiment and write logs plus a report."""
    spec = load_population_spec(population_path)
    if seed is not None:
        spec = type(spec)(groups=spec.groups, master_seed=seed)
    curriculum = _load_curriculum(curriculum_path)
    result = run_experiment(spec, curriculum)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    labels = {}
    for student in result.students:
        write_log(result.logs[student["student_id"]], out / f"{student['student_id']}.jsonl")
        labels[student["student_id"]] = student["group"]
    (out / "labels.yaml").write_text(yaml.safe_dump(labels, sort_keys=True), encoding="utf-8")
    (out / "report.json").write_text(json.dumps(result.report, indent=2, sort_keys=True), encoding="utf-8")
    click.echo(f"wrote {len(result.students)} session logs and report.json to {out}")


@main.command()
@click.option("--logs", "logs_dir", type=click.Path(exists=True), required=True)
@click.option("--phase", type=click.Choice(["training", "posttest"]), required=True)
@click.option("--groups", "groups_path", type=click.Path(exists=True), required=True)
@click.option("--curriculum", "curriculum_path", type=click.Path(exists=True), default=None)
def analyze(logs_dir: str, phase: str, groups_path: str, curriculum_path: str | None) -> None:
    """Switch-behavior profiles and tests over a directory of event logs."""
    curriculum = _load_curriculum(curriculum_path)
    with open(groups_path, "r", encoding="utf-8") as handle:
        labels = yaml.safe_load(handle)
    wanted = Phase.TRAINING if phase == "training" else Phase.POSTTEST
    phase_ids = {
        p.id for p in (curriculum.training if wanted is Phase.TRAINING else curriculum.posttest)
    }
    labeled_logs = []
    per_student_early: dict[str, list[float]] = {}
    for log_path in sorted(Path(logs_dir).glob("*.jsonl")):
        student_id = log_path.stem
        group = labels.get(student_id)
        if group is None:
            raise click.ClickException(f"no group label for {student_id}")
        events = read_log(log_path)
        early = total = 0
        for problem_id, chunk in split_by_problem(events):
            if problem_id not in phase_ids:
                continue
            labeled_logs.append((group, chunk))
            total += 1
            if classify_switch(chunk) is SwitchBehavior.EARLY_SWITCH:
                early += 1
        if total:
            per_student_early.setdefault(group, []).append(early / total)
    profiles = group_switch_profile(labeled_logs)
    report: dict = {
        "phase": phase,
        "profiles": {
            key: {
                "pct_no": value.pct_no,
                "pct_early": value.pct_early,
                "pct_late": value.pct_late,
                "problems": value.problems,
            }
            for key, value in sorted(profiles.items())
        },
    }
    eligible = [v for v in per_student_early.values() if len(v) >= 2]
    if len(eligible) >= 2:
        anova = one_way_anova(eligible)
        report["early_fraction_anova"] = {
            "F": anova.statistic,
            "df": list(anova.df),
            "p_value": anova.p_value,
            "eta_squared": anova.effect_size,
        }
    click.echo(json.dumps(report, indent=2, sort_keys=True))


@main.command()
@click.option("--logs", "logs_path", type=click.Path(exists=True), required=True)
@click.option("--curriculum", "curriculum_path", type=click.Path(exists=True), default=None)
def grade(logs_path: str, curriculum_path: str | None) -> None:
    """Per-student test scores and gain, recomputed from event logs."""
    curriculum = _load_curriculum(curriculum_path)
    path = Path(logs_path)
    files = sorted(path.glob("*.jsonl")) if path.is_dir() else [path]
    for log_file in files:
        report = session_report(read_log(log_file), curriculum)
        click.echo(
            json.dumps(
                {
                    "student_id": report.get("student_id", log_file.stem),
                    "scores": report["scores"],
                    "nlg": report["nlg"],
                    "iso_nlg": report["iso_nlg"],
                },
                sort_keys=True,
            )
        )


@main.command()
@click.option("--pretest-logs", "logs_path", type=click.Path(exists=True), required=True)
@click.option("--model", "model_path", type=click.Path(exists=True), default=None)
def classify(logs_path: str, model_path: str | None) -> None:
    """Assign metacognitive groups from pretest logs."""
    forest = load_forest(model_path) if model_path else None
    path = Path(logs_path)
    files = sorted(path.glob("*.jsonl")) if path.is_dir() else [path]
    for log_file in files:
        events = read_log(log_file)
        # The pretest is always the first two problems; whole-session logs
        # are sliced down so either kind of file works here.
        slices = split_by_problem(events)[:2]
        features = extract_features([r for _, chunk in slices for r in chunk])
        if forest is not None:
            label, shares = predict(forest, features)
            payload = {
                "student_id": log_file.stem,
                "label": label.value,
                "probabilities": {k.value: v for k, v in shares.items()},
            }
        else:
            payload = {"student_id": log_file.stem, "label": rule_baseline(features).value}
        click.echo(json.dumps(payload, sort_keys=True))


if __name__ == "__main__":
    main()
