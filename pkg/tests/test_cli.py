from __future__ import annotations

import json

import yaml
from click.testing import CliRunner

from logictutor.cli import main


def test_validate_default_curriculum() -> None:
    runner = CliRunner()
    result = runner.invoke(main, ["validate"])
    assert result.exit_code == 0, result.output
    assert "28 problems checked, 0 failure(s)" in result.output


def test_simulate_grade_classify_analyze_round_trip(tmp_path) -> None:
    runner = CliRunner()
    spec_path = tmp_path / "population.yaml"
    spec_path.write_text(
        yaml.safe_dump(
            {
                "master_seed": 99,
                "groups": [
                    {"policy": "rote", "count": 3, "condition": "Experimental"},
                    {"policy": "dabbler", "count": 3, "condition": "Control"},
                    {"policy": "selective", "count": 3, "condition": "SelectiveOriginal"},
                ],
            }
        ),
        encoding="utf-8",
    )
    out_dir = tmp_path / "run"
    result = runner.invoke(
        main, ["simulate", "--population", str(spec_path), "--out", str(out_dir)]
    )
    assert result.exit_code == 0, result.output
    logs = sorted(out_dir.glob("*.jsonl"))
    assert len(logs) == 9
    report = json.loads((out_dir / "report.json").read_text())
    assert report["population"]["total"] == 9

    graded = runner.invoke(main, ["grade", "--logs", str(out_dir)])
    assert graded.exit_code == 0, graded.output
    lines = [json.loads(line) for line in graded.output.strip().splitlines()]
    assert len(lines) == 9
    assert all("scores" in line for line in lines)

    classified = runner.invoke(main, ["classify", "--pretest-logs", str(out_dir)])
    assert classified.exit_code == 0, classified.output
    labels = {json.loads(line)["student_id"]: json.loads(line)["label"] for line in classified.output.strip().splitlines()}
    assert set(labels.values()) == {"Rote", "Dabbler", "Selective"}

    analyzed = runner.invoke(
        main,
        [
            "analyze",
            "--logs",
            str(out_dir),
            "--phase",
            "training",
            "--groups",
            str(out_dir / "labels.yaml"),
        ],
    )
    assert analyzed.exit_code == 0, analyzed.output
    body = json.loads(analyzed.output)
    assert body["phase"] == "training"
    assert set(body["profiles"]) == {"Rote_Exp", "Dabbler_Ctrl", "Selective"}


def test_validate_rejects_broken_curriculum(tmp_path) -> None:
    import yaml
    from importlib import resources

    source = resources.files("logictutor").joinpath("data/default_curriculum.yaml")
    raw = yaml.safe_load(source.read_text(encoding="utf-8"))
    raw["problems"][2]["reference_length"] = 9
    bad = tmp_path / "bad.yaml"
    bad.write_text(yaml.safe_dump(raw), encoding="utf-8")
    runner = CliRunner()
    result = runner.invoke(main, ["validate", "--curriculum", str(bad)])
    assert result.exit_code == 1
    assert "reference_length" in result.output
