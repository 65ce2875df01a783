from __future__ import annotations

import json

import pytest

from hoprank.dataio import Dataset
from hoprank.report import (
    ALL_METHODS,
    SECTIONS,
    ReportConfig,
    random_baseline,
    run_report,
)

from conftest import expert, rich_dataset, sheet

FAST = ReportConfig(baseline_trials=50)


# -- section computation -----------------------------------------------------


def test_rich_dataset_supports_every_section():
    report = run_report(rich_dataset(), FAST)
    assert report.unavailable == {}
    assert report.sections_present() == list(SECTIONS)
    assert set(report.matrices) == {"set", "A", "B"}
    assert len(report.methods_by_expert["e1"]) == len(ALL_METHODS)


def test_sample_supports_every_section(sample):
    report = run_report(sample, FAST)
    assert report.unavailable == {}
    assert report.cohort_w.m == 39 and report.cohort_w.n == 10
    assert 0.0 < report.cohort_w.w < 1.0
    assert report.baseline.mean_w < report.cohort_w.w


def test_seed_falls_back_to_provenance():
    report = run_report(rich_dataset(), FAST)
    assert report.seed == 11
    override = run_report(rich_dataset(), ReportConfig(seed=99, baseline_trials=50))
    assert override.seed == 99


def test_no_responses_only_methods_unavailable():
    ds = rich_dataset()
    stripped = Dataset(
        scenario=ds.scenario, experts=ds.experts, rankings=ds.rankings, responses=()
    )
    report = run_report(stripped, FAST)
    assert set(report.unavailable) == {"methods"}
    assert "no responses" in report.unavailable["methods"]
    assert report.consensus is not None and report.baseline is not None


def test_no_rankings_disables_ranking_sections():
    ds = rich_dataset()
    stripped = Dataset(
        scenario=ds.scenario, experts=ds.experts, rankings=(), responses=ds.responses
    )
    report = run_report(stripped, FAST)
    assert set(report.unavailable) == set(SECTIONS)
    assert report.unavailable["consensus"] == "no ranking sheets in the dataset"
    assert report.unavailable["baseline"] == "fewer than two ranking sheets"
    assert "no ranking sheets" in report.unavailable["methods"]


def test_missing_reference_expert_disables_scatter_only():
    ds = rich_dataset()
    no_ref = Dataset(
        scenario=ds.scenario,
        experts=(expert("e1", "A"), expert("e2", "A"), expert("e3", "B")),
        rankings=ds.rankings,
        responses=ds.responses,
    )
    report = run_report(no_ref, FAST)
    assert set(report.unavailable) == {"scatter"}
    assert "reference expert" in report.unavailable["scatter"]


def test_reference_expert_without_sheet():
    ds = rich_dataset()
    shrunk = Dataset(
        scenario=ds.scenario,
        experts=ds.experts,
        rankings=ds.rankings[1:],
        responses=ds.responses,
    )
    report = run_report(shrunk, FAST)
    assert "scatter" in report.unavailable
    assert "'e1' has no ranking sheet" in report.unavailable["scatter"]


def test_undeclared_expert_breaks_groups_only():
    ds = rich_dataset()
    extra = Dataset(
        scenario=ds.scenario,
        experts=ds.experts,
        rankings=ds.rankings + (sheet("ghost", 3, 2, 1),),
        responses=ds.responses,
    )
    report = run_report(extra, FAST)
    assert "groups" in report.unavailable
    assert "ghost" in report.unavailable["groups"]
    assert report.consensus is not None


# -- rendering ---------------------------------------------------------------

EXPECTED_FILES = sorted(f"{s}.csv" for s in SECTIONS) + ["report.json", "summary.md"]


def test_rendered_files(tmp_path):
    run_report(rich_dataset(), FAST, out_dir=tmp_path)
    assert sorted(p.name for p in tmp_path.iterdir()) == sorted(EXPECTED_FILES)


def test_every_csv_cites_hash_and_seed(tmp_path):
    report = run_report(rich_dataset(), FAST, out_dir=tmp_path)
    preamble = f"# dataset_hash={report.dataset_hash} seed={report.seed}\n"
    for path in tmp_path.glob("*.csv"):
        assert path.read_text(encoding="utf-8").startswith(preamble), path.name


def test_reports_are_byte_identical(tmp_path):
    run_report(rich_dataset(), FAST, out_dir=tmp_path / "a")
    run_report(rich_dataset(), FAST, out_dir=tmp_path / "b")
    for name in EXPECTED_FILES:
        a = (tmp_path / "a" / name).read_bytes()
        b = (tmp_path / "b" / name).read_bytes()
        assert a == b, name
        assert b"\r" not in a, name


def test_methods_table_shape(tmp_path):
    run_report(rich_dataset(), FAST, out_dir=tmp_path)
    lines = (tmp_path / "methods.csv").read_text(encoding="utf-8").splitlines()
    assert lines[1] == "operator,statistic,e1,e2,e3,mean"
    assert len(lines) == 2 + len(ALL_METHODS)
    first = lines[2].split(",")
    for cell in first[2:]:
        float(cell)  # every rho cell parses back


def test_matrices_table_lists_set_before_groups(tmp_path):
    run_report(rich_dataset(), FAST, out_dir=tmp_path)
    lines = (tmp_path / "matrices.csv").read_text(encoding="utf-8").splitlines()
    scopes = [line.split(",")[0] for line in lines[2:]]
    assert scopes == ["set"] * 3 + ["A"] * 3 + ["B"] * 3


def test_report_json_round_trips(tmp_path):
    report = run_report(rich_dataset(), FAST, out_dir=tmp_path)
    payload = json.loads((tmp_path / "report.json").read_text(encoding="utf-8"))
    assert payload["dataset_hash"] == report.dataset_hash
    assert payload["seed"] == report.seed
    assert payload["unavailable"] == {}
    assert set(payload["sections"]) == set(SECTIONS)
    assert payload["sections"]["baseline"]["trials"] == 50


def test_summary_mentions_unavailable_sections(tmp_path):
    ds = rich_dataset()
    stripped = Dataset(
        scenario=ds.scenario, experts=ds.experts, rankings=ds.rankings, responses=()
    )
    run_report(stripped, FAST, out_dir=tmp_path)
    text = (tmp_path / "summary.md").read_text(encoding="utf-8")
    assert "## Unavailable sections" in text
    assert "- methods:" in text
    assert sorted(p.name for p in tmp_path.glob("*.csv")) == sorted(
        f"{s}.csv" for s in SECTIONS if s != "methods"
    )


def test_summary_contains_headline_tables(tmp_path):
    run_report(rich_dataset(), FAST, out_dir=tmp_path)
    text = (tmp_path / "summary.md").read_text(encoding="utf-8")
    for heading in (
        "# Analysis summary",
        "## Consensus ranking",
        "## Groups",
        "## Outliers",
        "## Hop-derived rankings vs elicited rankings",
        "## Random baseline",
    ):
        assert heading in text


# -- random baseline ---------------------------------------------------------


def test_baseline_is_deterministic():
    a = random_baseline(m=6, n=10, trials=40, seed=7)
    assert a == random_baseline(m=6, n=10, trials=40, seed=7)
    assert a != random_baseline(m=6, n=10, trials=40, seed=8)


def test_baseline_shape_and_bounds():
    stats = random_baseline(m=5, n=8, trials=60, seed=3)
    assert (stats.m, stats.n, stats.trials, stats.seed) == (5, 8, 60, 3)
    assert 0.0 <= stats.min_w <= stats.mean_w <= stats.max_w <= 1.0
    assert stats.sd_w >= 0.0


def test_baseline_rejects_zero_trials():
    with pytest.raises(ValueError, match="trials"):
        random_baseline(m=5, n=8, trials=0, seed=3)


def test_large_random_cohorts_show_low_concordance():
    stats = random_baseline(m=10, n=10, trials=100, seed=123)
    assert stats.mean_w < 0.2


def test_report_defaults_run_all_methods(sample):
    report = run_report(sample, FAST)
    assert set(report.method_means) == {m.key for m in ALL_METHODS}
    best = max(
        (v, k) for k, v in report.method_means.items() if v is not None
    )
    assert best[1] == "mean:mid"


def test_sample_outliers_match_designed_discordants(sample):
    report = run_report(sample, FAST)
    weak = {o.expert_id for o in report.outliers if o.label == "weak"}
    assert weak <= {"b6", "e5", "f7", "f8", "g5"}
    assert len(weak) >= 3
