"""Analysis reports: every consensus/agreement/derivation artifact for a
dataset, rendered as machine-readable CSV tables plus one summary document.

Reports carry no timestamps and iterate in stable orders, so the same dataset
and seed always produce byte-identical files. Every table cites the dataset
hash and the seed in a leading ``#`` comment line.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from .aggregation import OPERATORS, STATISTICS, AggregationMethod
from .consensus import (
    AgreementMatrix,
    GroupStats,
    MethodResult,
    OutlierLabel,
    OutlierThresholds,
    ScatterPoint,
    agreement_matrix,
    classify_outliers,
    cohort_concordance,
    cohort_method_comparison,
    expert_agreement,
    group_mean_ranking,
    group_vs_set,
    mean_ranks,
    scatter_distances,
)
from .dataio import Dataset, dataset_hash
from .model import Ranking
from .rankstats import AgreementStats, ConcordanceStat, kendall_w, random_rankings

ALL_METHODS = tuple(AggregationMethod(op, stat) for op in OPERATORS for stat in STATISTICS)

SECTIONS = (
    "consensus",
    "agreement",
    "groups",
    "outliers",
    "matrices",
    "scatter",
    "methods",
    "baseline",
)


@dataclass(frozen=True)
class ReportConfig:
    methods: tuple[AggregationMethod, ...] = ALL_METHODS
    thresholds: OutlierThresholds = OutlierThresholds()
    seed: int | None = None
    baseline_trials: int = 1000


@dataclass(frozen=True)
class BaselineStats:
    """Kendall's W over repeated uniform-random cohorts of the same shape."""

    m: int
    n: int
    trials: int
    seed: int
    mean_w: float
    sd_w: float
    min_w: float
    max_w: float


@dataclass
class AnalysisReport:
    dataset_hash: str
    seed: int
    scenario_id: str
    consensus: Ranking | None = None
    mean_ranks: dict[str, float] | None = None
    cohort_w: ConcordanceStat | None = None
    agreement: dict[str, AgreementStats] | None = None
    groups: list[GroupStats] | None = None
    outliers: list[OutlierLabel] | None = None
    matrices: dict[str, AgreementMatrix] | None = None
    scatter: list[ScatterPoint] | None = None
    methods_by_expert: dict[str, list[MethodResult]] | None = None
    method_means: dict[str, float | None] | None = None
    baseline: BaselineStats | None = None
    unavailable: dict[str, str] = None  # type: ignore[assignment]

    def __post_init__(self) -> None:
        if self.unavailable is None:
            self.unavailable = {}

    def sections_present(self) -> list[str]:
        return [s for s in SECTIONS if s not in self.unavailable]

    def to_json(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "dataset_hash": self.dataset_hash,
            "seed": self.seed,
            "scenario_id": self.scenario_id,
            "unavailable": dict(sorted(self.unavailable.items())),
            "sections": {},
        }
        sections = out["sections"]
        if self.consensus is not None:
            sections["consensus"] = {
                "mean_ranks": self.mean_ranks,
                "ranks": dict(sorted(self.consensus.ranks.items())),
                "cohort_w": None
                if self.cohort_w is None
                else {"w": self.cohort_w.w, "m": self.cohort_w.m, "n": self.cohort_w.n},
            }
        if self.agreement is not None:
            sections["agreement"] = {
                e: {"rho": s.rho, "footrule": s.footrule} for e, s in self.agreement.items()
            }
        if self.groups is not None:
            sections["groups"] = [
                {
                    "group_id": g.group_id,
                    "size": g.size,
                    "mean_rho": g.mean_rho,
                    "w": g.w,
                    "rho_vs_set": g.rho_vs_set,
                }
                for g in self.groups
            ]
        if self.outliers is not None:
            sections["outliers"] = [
                {"expert_id": o.expert_id, "rho": o.rho, "label": o.label}
                for o in self.outliers
            ]
        if self.matrices is not None:
            sections["matrices"] = {
                scope: {
                    "av_ids": list(m.av_ids),
                    "consensus_ranks": list(m.consensus_ranks),
                    "counts": [list(row) for row in m.counts],
                }
                for scope, m in self.matrices.items()
            }
        if self.scatter is not None:
            sections["scatter"] = [
                {
                    "expert_id": p.expert_id,
                    "group_id": p.group_id,
                    "d_consensus": p.d_consensus,
                    "d_reference": p.d_reference,
                }
                for p in self.scatter
            ]
        if self.methods_by_expert is not None:
            sections["methods"] = {
                "per_expert": {
                    e: [
                        {"method": r.method.key, "rho": r.rho, "error": r.error}
                        for r in results
                    ]
                    for e, results in self.methods_by_expert.items()
                },
                "means": self.method_means,
            }
        if self.baseline is not None:
            b = self.baseline
            sections["baseline"] = {
                "m": b.m,
                "n": b.n,
                "trials": b.trials,
                "seed": b.seed,
                "mean_w": b.mean_w,
                "sd_w": b.sd_w,
                "min_w": b.min_w,
                "max_w": b.max_w,
            }
        return out


def random_baseline(m: int, n: int, trials: int, seed: int) -> BaselineStats:
    """W statistics over ``trials`` independent uniform-random cohorts."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    child_seeds = rng.integers(0, 2**63 - 1, size=trials)
    ws = []
    for s in child_seeds:
        sheets = random_rankings(m, n, int(s))
        ws.append(kendall_w([sheet.to_ranking() for sheet in sheets]).w)
    arr = np.asarray(ws)
    return BaselineStats(
        m=m,
        n=n,
        trials=trials,
        seed=seed,
        mean_w=float(arr.mean()),
        sd_w=float(arr.std()),
        min_w=float(arr.min()),
        max_w=float(arr.max()),
    )


def run_report(
    dataset: Dataset, config: ReportConfig = ReportConfig(), out_dir: str | Path | None = None
) -> AnalysisReport:
    """Compute every section the dataset supports; sections that cannot be
    computed are recorded under ``unavailable`` with the reason, and the rest
    are still produced. With ``out_dir`` set, renders one CSV per table plus
    ``report.json`` and ``summary.md``.
    """
    seed = config.seed if config.seed is not None else (dataset.provenance.seed or 0)
    report = AnalysisReport(
        dataset_hash=dataset_hash(dataset),
        seed=seed,
        scenario_id=dataset.scenario.id,
    )

    sheets = list(dataset.rankings)
    if not sheets:
        for section in ("consensus", "agreement", "groups", "outliers", "matrices", "scatter"):
            report.unavailable[section] = "no ranking sheets in the dataset"
    else:
        try:
            report.mean_ranks = mean_ranks(sheets)
            report.consensus = group_mean_ranking(sheets)
            report.cohort_w = cohort_concordance(sheets)
        except Exception as exc:
            report.unavailable["consensus"] = str(exc)

    if report.consensus is not None:
        _section(report, "agreement", lambda: _compute_agreement(report, sheets))
        _section(report, "groups", lambda: _compute_groups(report, dataset, sheets))
        _section(report, "outliers", lambda: _compute_outliers(report, config))
        _section(report, "matrices", lambda: _compute_matrices(report, dataset, sheets))
        _section(report, "scatter", lambda: _compute_scatter(report, dataset, sheets))
    elif sheets:
        for section in ("agreement", "groups", "outliers", "matrices", "scatter"):
            report.unavailable.setdefault(section, "consensus unavailable")

    overall = [
        r
        for r in dataset.responses
        if r.question_id == dataset.scenario.overall_question().id
    ]
    if not overall:
        report.unavailable["methods"] = "no responses to the overall question"
    elif not sheets:
        report.unavailable["methods"] = "no ranking sheets to compare derived rankings against"
    else:
        _section(report, "methods", lambda: _compute_methods(report, dataset, sheets, config))

    if len(sheets) < 2:
        report.unavailable["baseline"] = "fewer than two ranking sheets"
    else:
        _section(
            report,
            "baseline",
            lambda: _compute_baseline(report, dataset, sheets, config, seed),
        )

    if out_dir is not None:
        render_report(report, dataset, Path(out_dir))
    return report


def _section(report: AnalysisReport, name: str, compute) -> None:
    try:
        compute()
    except Exception as exc:
        report.unavailable[name] = str(exc)


def _compute_agreement(report: AnalysisReport, sheets) -> None:
    report.agreement = expert_agreement(sheets, report.consensus)


def _compute_groups(report: AnalysisReport, dataset: Dataset, sheets) -> None:
    by_group = dataset.sheets_by_group()
    if not by_group:
        raise ValueError("no experts declared, so sheets cannot be grouped")
    covered = {s.expert_id for g in by_group.values() for s in g}
    missing = sorted({s.expert_id for s in sheets} - covered)
    if missing:
        raise ValueError(f"ranking sheets from undeclared experts: {', '.join(missing)}")
    report.groups = group_vs_set(by_group, report.consensus)


def _compute_outliers(report: AnalysisReport, config: ReportConfig) -> None:
    if report.agreement is None:
        raise ValueError("agreement unavailable")
    rhos = {e: s.rho for e, s in report.agreement.items()}
    report.outliers = classify_outliers(rhos, config.thresholds)


def _compute_matrices(report: AnalysisReport, dataset: Dataset, sheets) -> None:
    matrices = {"set": agreement_matrix(sheets, report.consensus)}
    for group_id, group_sheets in dataset.sheets_by_group().items():
        matrices[group_id] = agreement_matrix(group_sheets, group_mean_ranking(group_sheets))
    report.matrices = matrices


def _compute_scatter(report: AnalysisReport, dataset: Dataset, sheets) -> None:
    reference = dataset.reference_expert()
    if reference is None:
        raise ValueError("no reference expert flagged")
    reference_sheet = next((s for s in sheets if s.expert_id == reference.id), None)
    if reference_sheet is None:
        raise ValueError(f"reference expert {reference.id!r} has no ranking sheet")
    groups = {e.id: e.group_id for e in dataset.experts}
    report.scatter = scatter_distances(sheets, report.consensus, reference_sheet, groups)


def _compute_methods(report: AnalysisReport, dataset: Dataset, sheets, config: ReportConfig) -> None:
    per_expert, means = cohort_method_comparison(
        sheets, dataset.responses, dataset.scenario, config.methods
    )
    report.methods_by_expert = per_expert
    report.method_means = means


def _compute_baseline(
    report: AnalysisReport, dataset: Dataset, sheets, config: ReportConfig, seed: int
) -> None:
    report.baseline = random_baseline(
        m=len(sheets),
        n=len(dataset.scenario.avs),
        trials=config.baseline_trials,
        seed=seed,
    )


# -- rendering --------------------------------------------------------------


def _cell(value: Any) -> Any:
    if value is None:
        return ""
    if isinstance(value, float):
        return repr(float(value))
    return value


def _write_table(
    path: Path, preamble: str, header: Sequence[str], rows: Sequence[Sequence[Any]]
) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        fh.write(preamble)
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([_cell(v) for v in row])


def render_report(report: AnalysisReport, dataset: Dataset, out_dir: Path) -> list[Path]:
    """Write report.json, summary.md, and one CSV per available table.
    Returns the paths written."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    preamble = f"# dataset_hash={report.dataset_hash} seed={report.seed}\n"
    written: list[Path] = []

    def table(name: str, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> None:
        path = out_dir / f"{name}.csv"
        _write_table(path, preamble, header, rows)
        written.append(path)

    av_names = {a.id: a.name for a in dataset.scenario.avs}

    if report.consensus is not None:
        order = sorted(report.consensus.ranks, key=lambda a: (report.consensus.ranks[a], a))
        table(
            "consensus",
            ["av_id", "av_name", "mean_rank", "consensus_rank"],
            [
                [a, av_names.get(a, ""), report.mean_ranks[a], report.consensus.ranks[a]]
                for a in order
            ],
        )

    if report.agreement is not None:
        groups_of = {e.id: e.group_id for e in dataset.experts}
        table(
            "agreement",
            ["expert_id", "group_id", "rho", "footrule"],
            [
                [e, groups_of.get(e, ""), s.rho, s.footrule]
                for e, s in report.agreement.items()
            ],
        )

    if report.groups is not None:
        table(
            "groups",
            ["group_id", "size", "mean_rho", "w", "rho_vs_set"],
            [[g.group_id, g.size, g.mean_rho, g.w, g.rho_vs_set] for g in report.groups],
        )

    if report.outliers is not None:
        table(
            "outliers",
            ["expert_id", "rho", "label"],
            [[o.expert_id, o.rho, o.label] for o in report.outliers],
        )

    if report.matrices is not None:
        n = max(m.n for m in report.matrices.values())
        header = ["scope", "av_id", "consensus_rank"] + [f"rank_{r}" for r in range(1, n + 1)]
        rows = []
        for scope in sorted(report.matrices, key=lambda s: (s != "set", s)):
            m = report.matrices[scope]
            for av_id, crank, counts in zip(m.av_ids, m.consensus_ranks, m.counts):
                rows.append([scope, av_id, crank, *counts])
        table("matrices", header, rows)

    if report.scatter is not None:
        table(
            "scatter",
            ["expert_id", "group_id", "d_consensus", "d_reference"],
            [
                [p.expert_id, p.group_id, p.d_consensus, p.d_reference]
                for p in report.scatter
            ],
        )

    if report.methods_by_expert is not None:
        experts = sorted(report.methods_by_expert)
        header = ["operator", "statistic", *experts, "mean"]
        rows = []
        by_key: dict[str, dict[str, MethodResult]] = {}
        for e, results in report.methods_by_expert.items():
            for r in results:
                by_key.setdefault(r.method.key, {})[e] = r
        for method in _methods_in_order(report):
            cells = [by_key.get(method.key, {}).get(e) for e in experts]
            rows.append(
                [
                    method.operator,
                    method.statistic,
                    *[None if c is None else c.rho for c in cells],
                    (report.method_means or {}).get(method.key),
                ]
            )
        table("methods", header, rows)

    if report.baseline is not None:
        b = report.baseline
        table(
            "baseline",
            ["m", "n", "trials", "seed", "mean_w", "sd_w", "min_w", "max_w"],
            [[b.m, b.n, b.trials, b.seed, b.mean_w, b.sd_w, b.min_w, b.max_w]],
        )

    json_path = out_dir / "report.json"
    json_path.write_text(
        json.dumps(report.to_json(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    written.append(json_path)

    summary_path = out_dir / "summary.md"
    summary_path.write_text(_summary_text(report, dataset), encoding="utf-8")
    written.append(summary_path)
    return written


def _methods_in_order(report: AnalysisReport) -> list[AggregationMethod]:
    seen: dict[str, AggregationMethod] = {}
    for results in (report.methods_by_expert or {}).values():
        for r in results:
            seen.setdefault(r.method.key, r.method)
    return [m for m in ALL_METHODS if m.key in seen] + [
        m for k, m in sorted(seen.items()) if m not in ALL_METHODS
    ]


def _fmt(value: float | None, digits: int = 4) -> str:
    if value is None:
        return "n/a"
    return f"{value:.{digits}f}"


def _summary_text(report: AnalysisReport, dataset: Dataset) -> str:
    lines = [
        "# Analysis summary",
        "",
        f"- Scenario: `{report.scenario_id}`",
        f"- Dataset hash: `{report.dataset_hash}`",
        f"- Seed: {report.seed}",
        f"- Experts: {len(dataset.experts)}; ranking sheets: {len(dataset.rankings)}; "
        f"interval responses: {len(dataset.responses)}",
        "",
    ]
    if report.consensus is not None:
        lines.append("## Consensus ranking")
        lines.append("")
        if report.cohort_w is not None:
            lines.append(
                f"Cohort concordance W = {_fmt(report.cohort_w.w)} "
                f"(m={report.cohort_w.m}, n={report.cohort_w.n})."
            )
            lines.append("")
        av_names = {a.id: a.name for a in dataset.scenario.avs}
        order = sorted(report.consensus.ranks, key=lambda a: (report.consensus.ranks[a], a))
        lines.append("| rank | AV | mean rank |")
        lines.append("| --- | --- | --- |")
        for a in order:
            lines.append(
                f"| {report.consensus.ranks[a]:g} | {a} ({av_names.get(a, '')}) "
                f"| {_fmt(report.mean_ranks[a], 2)} |"
            )
        lines.append("")
    if report.groups is not None:
        lines.append("## Groups")
        lines.append("")
        lines.append("| group | size | mean rho | W | rho vs set |")
        lines.append("| --- | --- | --- | --- | --- |")
        for g in report.groups:
            lines.append(
                f"| {g.group_id} | {g.size} | {_fmt(g.mean_rho)} | {_fmt(g.w)} "
                f"| {_fmt(g.rho_vs_set)} |"
            )
        lines.append("")
    if report.outliers is not None:
        weak = [o.expert_id for o in report.outliers if o.label == "weak"]
        strong = [o.expert_id for o in report.outliers if o.label == "strong"]
        lines.append("## Outliers")
        lines.append("")
        lines.append(f"- {len(strong)} experts agree strongly with the consensus.")
        lines.append(
            f"- {len(weak)} experts fall below the weak-agreement cutoff"
            + (f": {', '.join(weak)}." if weak else ".")
        )
        lines.append("")
    if report.method_means is not None:
        lines.append("## Hop-derived rankings vs elicited rankings (cohort mean rho)")
        lines.append("")
        lines.append("| operator | statistic | mean rho |")
        lines.append("| --- | --- | --- |")
        for method in _methods_in_order(report):
            lines.append(
                f"| {method.operator} | {method.statistic} "
                f"| {_fmt(report.method_means.get(method.key))} |"
            )
        lines.append("")
    if report.baseline is not None:
        b = report.baseline
        lines.append("## Random baseline")
        lines.append("")
        lines.append(
            f"{b.trials} uniform-random cohorts of {b.m} rankings over {b.n} items: "
            f"mean W = {_fmt(b.mean_w)} (sd {_fmt(b.sd_w)}, min {_fmt(b.min_w)}, "
            f"max {_fmt(b.max_w)})."
        )
        lines.append("")
    if report.unavailable:
        lines.append("## Unavailable sections")
        lines.append("")
        for section, reason in sorted(report.unavailable.items()):
            lines.append(f"- {section}: {reason}")
        lines.append("")
    return "\n".join(lines) + "\n"
