"""Group-level analysis: consensus rankings, agreement, outliers, scatter
distances, agreement matrices, and derived-vs-elicited method comparison.

The consensus of a cohort is the ranking of per-AV mean ranks; every agreement
figure is computed against that consensus (or a group's own consensus, where a
group view is asked for).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

from .aggregation import AggregationMethod, MissingResponseError, derive_ranking
from .model import IntervalResponse, Ranking, RankingSheet, Scenario
from .rankstats import AgreementStats, ConcordanceStat, footrule, kendall_w, ranks_from_scores, spearman_rho

AnyRanking = Union[Ranking, RankingSheet]


@dataclass(frozen=True)
class OutlierThresholds:
    """Rho cutoffs: above ``strong`` is a strong agree-er, below ``weak`` an
    outlier, anything else neutral."""

    strong: float = 0.7
    weak: float = 0.3

    def __post_init__(self) -> None:
        if not (-1.0 <= self.weak <= self.strong <= 1.0):
            raise ValueError(f"thresholds must satisfy -1 <= weak <= strong <= 1, got {self}")


@dataclass(frozen=True)
class OutlierLabel:
    expert_id: str
    rho: float | None
    label: str  # strong | neutral | weak


@dataclass(frozen=True)
class AgreementMatrix:
    """Per-AV counts of how many experts assigned each rank 1..n.

    Rows follow the consensus order (easiest first); ``counts[i][r-1]`` is the
    number of experts who put ``av_ids[i]`` at rank r.
    """

    av_ids: tuple[str, ...]
    consensus_ranks: tuple[float, ...]
    counts: tuple[tuple[int, ...], ...]

    @property
    def n(self) -> int:
        return len(self.av_ids)


@dataclass(frozen=True)
class ScatterPoint:
    expert_id: str
    group_id: str
    d_consensus: float
    d_reference: float


@dataclass(frozen=True)
class MethodResult:
    """Derived-vs-elicited correlation for one (expert, method) pair; ``error``
    is set instead of ``rho`` when the derivation was impossible."""

    method: AggregationMethod
    rho: float | None
    error: str | None = None


@dataclass(frozen=True)
class GroupStats:
    group_id: str
    size: int
    mean_rho: float | None
    w: float | None
    rho_vs_set: float | None


def _common_items(rankings: Sequence[AnyRanking]) -> list[str]:
    items = sorted(rankings[0].ranks)
    for r in rankings[1:]:
        if set(r.ranks) != set(items):
            raise ValueError("rankings cover different item sets")
    return items


def group_mean_ranking(rankings: Sequence[AnyRanking]) -> Ranking:
    """Consensus ranking: mean rank per AV, re-ranked ascending with average
    ranks for ties."""
    if not rankings:
        raise ValueError("no rankings to aggregate")
    items = _common_items(rankings)
    means = {
        item: sum(float(r.ranks[item]) for r in rankings) / len(rankings) for item in items
    }
    return ranks_from_scores(means, direction="ascending")


def mean_ranks(rankings: Sequence[AnyRanking]) -> dict[str, float]:
    """Raw per-AV mean ranks (the scores behind the consensus ranking)."""
    if not rankings:
        raise ValueError("no rankings to aggregate")
    items = _common_items(rankings)
    return {
        item: sum(float(r.ranks[item]) for r in rankings) / len(rankings) for item in items
    }


def expert_agreement(
    sheets: Sequence[RankingSheet], consensus: Ranking
) -> dict[str, AgreementStats]:
    """Rho and footrule of each expert against the consensus, keyed and ordered
    by expert id."""
    out: dict[str, AgreementStats] = {}
    for sheet in sorted(sheets, key=lambda s: s.expert_id):
        out[sheet.expert_id] = AgreementStats(
            rho=spearman_rho(sheet, consensus),
            footrule=footrule(sheet, consensus),
        )
    return out


def classify_outliers(
    rhos: Mapping[str, float | None],
    thresholds: OutlierThresholds = OutlierThresholds(),
) -> list[OutlierLabel]:
    """Label every expert strong/neutral/weak by their rho against the group.

    An undefined rho (None) is labelled neutral: such an expert can be neither
    singled out as an outlier nor as a strong agree-er.
    """
    labels = []
    for expert_id in sorted(rhos):
        rho = rhos[expert_id]
        if rho is None:
            label = "neutral"
        elif rho > thresholds.strong:
            label = "strong"
        elif rho < thresholds.weak:
            label = "weak"
        else:
            label = "neutral"
        labels.append(OutlierLabel(expert_id=expert_id, rho=rho, label=label))
    return labels


def agreement_matrix(sheets: Sequence[RankingSheet], consensus: Ranking) -> AgreementMatrix:
    """How many experts assigned each rank to each AV, rows in consensus order."""
    if not sheets:
        raise ValueError("no ranking sheets")
    items = _common_items(list(sheets) + [consensus])
    n = len(items)
    order = sorted(items, key=lambda item: (consensus.ranks[item], item))
    counts = []
    for item in order:
        row = [0] * n
        for sheet in sheets:
            rank = int(sheet.ranks[item])
            row[rank - 1] += 1
        counts.append(tuple(row))
    return AgreementMatrix(
        av_ids=tuple(order),
        consensus_ranks=tuple(float(consensus.ranks[item]) for item in order),
        counts=tuple(counts),
    )


def scatter_distances(
    sheets: Sequence[RankingSheet],
    consensus: Ranking,
    reference: RankingSheet,
    groups: Mapping[str, str],
) -> list[ScatterPoint]:
    """Footrule distance of every expert from the consensus and from the
    reference expert's sheet, ordered by expert id."""
    points = []
    for sheet in sorted(sheets, key=lambda s: s.expert_id):
        points.append(
            ScatterPoint(
                expert_id=sheet.expert_id,
                group_id=groups.get(sheet.expert_id, ""),
                d_consensus=footrule(sheet, consensus),
                d_reference=footrule(sheet, reference),
            )
        )
    return points


def method_comparison(
    sheet: RankingSheet,
    responses: Iterable[IntervalResponse],
    scenario: Scenario,
    methods: Sequence[AggregationMethod],
) -> list[MethodResult]:
    """Rho between the ranking derived from an expert's hop ratings and the
    ranking they actually gave, once per method. Missing hop answers become
    per-method error entries rather than aborting the table."""
    responses = list(responses)
    results = []
    for method in methods:
        try:
            derived = derive_ranking(responses, scenario, method, sheet.expert_id)
        except MissingResponseError as exc:
            results.append(MethodResult(method=method, rho=None, error=str(exc)))
            continue
        results.append(MethodResult(method=method, rho=spearman_rho(derived, sheet)))
    return results


def cohort_method_comparison(
    sheets: Sequence[RankingSheet],
    responses: Iterable[IntervalResponse],
    scenario: Scenario,
    methods: Sequence[AggregationMethod],
) -> tuple[dict[str, list[MethodResult]], dict[str, float | None]]:
    """Per-expert method table plus the cross-expert mean rho per method.

    The mean for a method is taken over the experts whose rho is defined; it is
    None when no expert produced one.
    """
    responses = list(responses)
    per_expert: dict[str, list[MethodResult]] = {}
    for sheet in sorted(sheets, key=lambda s: s.expert_id):
        per_expert[sheet.expert_id] = method_comparison(sheet, responses, scenario, methods)
    means: dict[str, float | None] = {}
    for i, method in enumerate(methods):
        rhos = [
            results[i].rho
            for results in per_expert.values()
            if results[i].rho is not None
        ]
        means[method.key] = sum(rhos) / len(rhos) if rhos else None
    return per_expert, means


def group_vs_set(
    sheets_by_group: Mapping[str, Sequence[RankingSheet]],
    set_consensus: Ranking,
) -> list[GroupStats]:
    """Per-group agreement statistics against the whole cohort.

    For each group: the rho of the group's own consensus against the set
    consensus, the mean rho of members against the group consensus, and the
    group's Kendall W. Groups of one member get no W (undefined for m < 2).
    """
    stats = []
    for group_id in sorted(sheets_by_group):
        sheets = list(sheets_by_group[group_id])
        if not sheets:
            raise ValueError(f"group {group_id!r} is empty")
        group_consensus = group_mean_ranking(sheets)
        member_rhos = [
            rho
            for sheet in sheets
            if (rho := spearman_rho(sheet, group_consensus)) is not None
        ]
        w: float | None
        if len(sheets) >= 2:
            w = kendall_w(sheets).w
        else:
            w = None
        stats.append(
            GroupStats(
                group_id=group_id,
                size=len(sheets),
                mean_rho=sum(member_rhos) / len(member_rhos) if member_rhos else None,
                w=w,
                rho_vs_set=spearman_rho(group_consensus, set_consensus),
            )
        )
    return stats


def cohort_concordance(sheets: Sequence[RankingSheet]) -> ConcordanceStat | None:
    """Kendall's W of the whole cohort; None when fewer than two sheets."""
    if len(sheets) < 2:
        return None
    return kendall_w(sheets)
