from __future__ import annotations

import json
import subprocess
import sys

import pytest

from hoprank.cli import EXIT_ANALYSIS, EXIT_IO, EXIT_OK, EXIT_VALIDATION, main
from hoprank.dataio import dataset_to_json

from conftest import rich_dataset, scenario_file, small_dataset, write_json


@pytest.fixture()
def dataset_files(tmp_path):
    bundle = tmp_path / "bundle.json"
    bundle.write_text(json.dumps(dataset_to_json(small_dataset())), encoding="utf-8")
    return [str(bundle)]


def test_validate_ok(dataset_files, capsys):
    assert main(["validate", *dataset_files]) == EXIT_OK
    out = capsys.readouterr().out
    assert "ok: 3 AVs, 3 hops, 2 experts, 2 ranking sheets, 2 responses" in out
    assert "dataset hash: " in out


def test_validate_reports_violations(tmp_path, capsys):
    scen = scenario_file(tmp_path)
    resp = write_json(
        tmp_path / "resp.json",
        {
            "format_version": "1",
            "responses": [
                {"expert_id": "e1", "hop_id": "h1", "question_id": "q-overall", "lo": 9, "hi": 3}
            ],
        },
    )
    assert main(["validate", str(scen), str(resp)]) == EXIT_VALIDATION
    err = capsys.readouterr().err
    assert "dataset invalid:" in err
    assert "lo > hi" in err


def test_validate_malformed_file(tmp_path, capsys):
    bad = tmp_path / "x.json"
    bad.write_text("{oops", encoding="utf-8")
    assert main(["validate", str(bad)]) == EXIT_VALIDATION
    assert "invalid JSON" in capsys.readouterr().err


def test_validate_missing_file(capsys):
    assert main(["validate", "/nope/missing.json"]) == EXIT_IO
    assert "no such file" in capsys.readouterr().err


def test_report_writes_directory(dataset_files, tmp_path, capsys):
    out_dir = tmp_path / "out"
    code = main(
        ["report", *dataset_files, "--out", str(out_dir), "--seed", "5", "--trials", "20"]
    )
    assert code == EXIT_OK
    out = capsys.readouterr().out
    assert f"report written to {out_dir}" in out
    assert "sections:" in out
    assert (out_dir / "report.json").exists()
    assert (out_dir / "consensus.csv").exists()
    assert "unavailable:" not in out


def test_report_method_subset(dataset_files, tmp_path):
    out_dir = tmp_path / "out"
    code = main(
        [
            "report",
            *dataset_files,
            "--out",
            str(out_dir),
            "--trials",
            "10",
            "--methods",
            "mean:mid,sum:max",
        ]
    )
    assert code == EXIT_OK


def test_report_rejects_bad_method(dataset_files, tmp_path, capsys):
    code = main(
        ["report", *dataset_files, "--out", str(tmp_path / "o"), "--methods", "median:mid"]
    )
    assert code == EXIT_ANALYSIS
    assert "median" in capsys.readouterr().err


def test_report_rejects_bad_thresholds(dataset_files, tmp_path, capsys):
    code = main(
        ["report", *dataset_files, "--out", str(tmp_path / "o"), "--thresholds", "0.7"]
    )
    assert code == EXIT_ANALYSIS
    assert "two comma-separated numbers" in capsys.readouterr().err


def test_derive_prints_ranking(tmp_path, capsys):
    bundle = tmp_path / "rich.json"
    bundle.write_text(json.dumps(dataset_to_json(rich_dataset())), encoding="utf-8")
    assert main(["derive", str(bundle), "--expert", "e1", "--method", "mean:mid"]) == EXIT_OK
    out = capsys.readouterr().out.splitlines()
    assert out[0] == "av_id,rank"
    assert out[1:] == ["av1,1", "av2,2", "av3,3"]


def test_derive_unknown_expert(dataset_files, capsys):
    code = main(["derive", *dataset_files, "--expert", "zz", "--method", "mean:mid"])
    assert code == EXIT_ANALYSIS
    assert "unknown expert 'zz'" in capsys.readouterr().err


def test_derive_with_missing_answers(dataset_files, capsys):
    code = main(["derive", *dataset_files, "--expert", "e1", "--method", "mean:mid"])
    assert code == EXIT_ANALYSIS
    assert "has no overall response" in capsys.readouterr().err


def test_baseline_prints_csv(capsys):
    assert main(["baseline", "--m", "4", "--n", "6", "--trials", "25", "--seed", "9"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "m,n,trials,seed,mean_w,sd_w,min_w,max_w"
    cells = lines[1].split(",")
    assert cells[:4] == ["4", "6", "25", "9"]
    mean_w = float(cells[4])
    assert 0.0 < mean_w < 1.0


def test_baseline_rejects_zero_trials(capsys):
    assert main(["baseline", "--trials", "0"]) == EXIT_ANALYSIS
    assert "trials" in capsys.readouterr().err


def test_serve_missing_file(tmp_path, capsys):
    code = main(["serve", "/nope/scenario.json", "--store", str(tmp_path / "s")])
    assert code == EXIT_IO


def test_console_script_round_trip(dataset_files, tmp_path):
    result = subprocess.run(
        [sys.executable, "-m", "hoprank.cli", "validate", *dataset_files],
        capture_output=True,
        text=True,
    )
    assert result.returncode == 0
    assert result.stdout.startswith("ok: 3 AVs")
