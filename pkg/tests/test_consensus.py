from __future__ import annotations

from itertools import permutations, product

import numpy as np
import pytest

from hoprank.aggregation import AggregationMethod
from hoprank.consensus import (
    OutlierThresholds,
    agreement_matrix,
    classify_outliers,
    cohort_concordance,
    cohort_method_comparison,
    expert_agreement,
    group_mean_ranking,
    group_vs_set,
    mean_ranks,
    method_comparison,
    scatter_distances,
)
from hoprank.model import Ranking, RankingSheet
from hoprank.rankstats import random_rankings, spearman_rho
from hoprank.synth import concordant_cohort

from conftest import sheet, single_path_scenario, tiny_scenario


# -- group_mean_ranking ------------------------------------------------------


def test_mean_of_identical_sheets_is_that_ranking():
    sheets = [sheet(f"e{k}", 2, 3, 1) for k in range(4)]
    consensus = group_mean_ranking(sheets)
    assert consensus.ranks == {"av1": 2.0, "av2": 3.0, "av3": 1.0}


def test_opposed_pair_means_collapse_to_full_tie():
    consensus = group_mean_ranking([sheet("e1", 1, 2, 3), sheet("e2", 3, 2, 1)])
    assert consensus.ranks == {"av1": 2.0, "av2": 2.0, "av3": 2.0}


def test_partial_tie_gets_average_ranks():
    consensus = group_mean_ranking([sheet("e1", 1, 2, 3), sheet("e2", 2, 1, 3)])
    assert consensus.ranks == {"av1": 1.5, "av2": 1.5, "av3": 3.0}


def test_single_sheet_is_unchanged():
    consensus = group_mean_ranking([sheet("e1", 3, 1, 2)])
    assert consensus.ranks == {"av1": 3.0, "av2": 1.0, "av3": 2.0}


def test_duplicating_the_cohort_leaves_consensus_unchanged():
    sheets = random_rankings(5, 8, seed=41)
    once = group_mean_ranking(sheets)
    twice = group_mean_ranking(sheets + sheets)
    assert once.ranks == twice.ranks


def test_mean_ranks_are_plain_averages():
    means = mean_ranks([sheet("e1", 1, 2, 3), sheet("e2", 2, 1, 3)])
    assert means == {"av1": 1.5, "av2": 1.5, "av3": 3.0}


def test_appending_consensus_copy_never_lowers_agreement():
    # exhaustive over small cohorts; skips pairs whose consensus is degenerate
    for n, m in [(3, 2), (3, 3), (4, 2)]:
        items = tuple(f"i{k}" for k in range(n))
        perms = list(permutations(range(1, n + 1)))
        for combo in product(perms, repeat=m):
            sheets = [
                RankingSheet(expert_id=f"e{j}", ranks=dict(zip(items, p)))
                for j, p in enumerate(combo)
            ]
            consensus = group_mean_ranking(sheets)
            grown = group_mean_ranking(sheets + [consensus])
            for s in sheets:
                before = spearman_rho(s, consensus)
                after = spearman_rho(s, grown)
                if before is None or after is None:
                    continue
                assert after >= before - 1e-12


# -- expert_agreement --------------------------------------------------------


def test_agreement_with_self_is_perfect():
    sheets = [sheet("e1", 1, 2, 3, 4, 5, 6, 7, 8, 9, 10)]
    consensus = group_mean_ranking(sheets)
    stats = expert_agreement(sheets, consensus)
    assert stats["e1"].rho == pytest.approx(1.0)
    assert stats["e1"].footrule == 0.0


def test_agreement_of_reversed_expert():
    consensus = Ranking(ranks={f"av{i + 1}": float(i + 1) for i in range(10)})
    reversed_sheet = sheet("e1", *range(10, 0, -1))
    stats = expert_agreement([reversed_sheet], consensus)
    assert stats["e1"].rho == pytest.approx(-1.0)
    assert stats["e1"].footrule == 50.0


def test_concordant_cohort_agrees_strongly():
    sheets = concordant_cohort(m=6, n=10, seed=13)
    consensus = group_mean_ranking(sheets)
    stats = expert_agreement(sheets, consensus)
    assert len(stats) == 6
    assert all(s.rho is not None and s.rho >= 0.7 for s in stats.values())


# -- classify_outliers -------------------------------------------------------


def test_outlier_thresholds():
    labels = classify_outliers({"a": 0.9152, "b": 0.2121, "c": 0.5})
    by_id = {o.expert_id: o.label for o in labels}
    assert by_id == {"a": "strong", "b": "weak", "c": "neutral"}


def test_outlier_boundaries_are_exclusive():
    labels = classify_outliers({"hi": 0.7, "lo": 0.3})
    assert {o.expert_id: o.label for o in labels} == {"hi": "neutral", "lo": "neutral"}


def test_outlier_custom_thresholds():
    labels = classify_outliers({"a": 0.5}, OutlierThresholds(strong=0.4, weak=0.1))
    assert labels[0].label == "strong"
    with pytest.raises(ValueError):
        OutlierThresholds(strong=0.2, weak=0.5)


def test_outliers_partition_the_cohort():
    rng = np.random.default_rng(19)
    rhos = {f"e{k}": float(rng.uniform(-1, 1)) for k in range(30)}
    rhos["none"] = None
    labels = classify_outliers(rhos)
    assert sorted(o.expert_id for o in labels) == sorted(rhos)
    assert all(o.label in {"strong", "neutral", "weak"} for o in labels)
    assert {o.expert_id: o for o in labels}["none"].label == "neutral"


# -- agreement_matrix --------------------------------------------------------


def test_matrix_single_voter():
    sheets = [sheet("e1", 2, 1, 3)]
    matrix = agreement_matrix(sheets, group_mean_ranking(sheets))
    assert matrix.av_ids == ("av2", "av1", "av3")
    assert all(sum(row) == 1 for row in matrix.counts)


def test_matrix_identical_sheets_is_diagonal():
    sheets = [sheet(f"e{k}", 1, 2, 3) for k in range(5)]
    matrix = agreement_matrix(sheets, group_mean_ranking(sheets))
    assert matrix.av_ids == ("av1", "av2", "av3")
    assert matrix.counts == ((5, 0, 0), (0, 5, 0), (0, 0, 5))


def test_matrix_rows_sum_to_cohort_size():
    sheets = random_rankings(12, 6, seed=3)
    matrix = agreement_matrix(sheets, group_mean_ranking(sheets))
    assert all(sum(row) == 12 for row in matrix.counts)


def test_matrix_uniform_rankings_spread_evenly():
    m, n = 3000, 5
    sheets = random_rankings(m, n, seed=8)
    matrix = agreement_matrix(sheets, group_mean_ranking(sheets))
    expected = m / n
    sd = (m * (1 / n) * (1 - 1 / n)) ** 0.5
    for row in matrix.counts:
        for count in row:
            assert abs(count - expected) < 6 * sd


# -- scatter_distances -------------------------------------------------------


def test_scatter_reference_distance_zero_for_reference():
    sheets = [sheet("ref", 1, 2, 3), sheet("e2", 2, 1, 3)]
    consensus = group_mean_ranking(sheets)
    points = scatter_distances(sheets, consensus, sheets[0], {"ref": "A", "e2": "A"})
    by_id = {p.expert_id: p for p in points}
    assert by_id["ref"].d_reference == 0.0
    assert by_id["e2"].d_reference == 2.0


def test_scatter_consensus_distance_zero_when_identical():
    sheets = [sheet("e1", 1, 2, 3)]
    consensus = group_mean_ranking(sheets)
    points = scatter_distances(sheets, consensus, sheets[0], {"e1": "A"})
    assert points[0].d_consensus == 0.0


def test_scatter_worked_example():
    expert_sheet = sheet("e1", 1, 2, 3)
    reference = sheet("ref", 3, 2, 1)
    consensus = Ranking(ranks={"av1": 1.0, "av2": 2.0, "av3": 3.0})
    points = scatter_distances([expert_sheet], consensus, reference, {"e1": "A"})
    assert (points[0].d_consensus, points[0].d_reference) == (0.0, 4.0)


def test_scatter_points_carry_group_ids():
    sheets = [sheet("e1", 1, 2, 3), sheet("e2", 2, 1, 3)]
    consensus = group_mean_ranking(sheets)
    points = scatter_distances(sheets, consensus, sheets[0], {"e1": "A", "e2": "B"})
    assert [p.group_id for p in points] == ["A", "B"]


# -- method_comparison -------------------------------------------------------


def test_method_comparison_consistent_expert_scores_one():
    from hoprank.model import IntervalResponse

    scenario = tiny_scenario()
    # av1 easy, av2 middling, av3 hard; the elicited sheet says the same
    responses = [
        IntervalResponse(expert_id="e1", hop_id=h, question_id="q-overall", lo=lo, hi=hi)
        for h, (lo, hi) in {"h1": (10, 20), "h2": (40, 50), "h3": (70, 80)}.items()
    ]
    elicited = sheet("e1", 1, 2, 3)
    results = method_comparison(
        elicited, responses, scenario, [AggregationMethod("mean", "mid")]
    )
    assert results[0].error is None
    assert results[0].rho == pytest.approx(1.0, abs=1e-12)


def test_method_comparison_round_trip_on_many_avs(sample):
    expert_id = "d2"
    elicited = next(s for s in sample.rankings if s.expert_id == expert_id)
    responses = [r for r in sample.responses if r.expert_id == expert_id]
    methods = [AggregationMethod("mean", "mid"), AggregationMethod("sum", "min")]
    derived_rho = {
        r.method.key: r.rho
        for r in method_comparison(elicited, responses, sample.scenario, methods)
    }
    assert set(derived_rho) == {"mean:mid", "sum:min"}
    assert all(v is not None and -1.0 <= v <= 1.0 for v in derived_rho.values())


def test_method_comparison_missing_data_becomes_error_entries():
    scenario = single_path_scenario()
    elicited = RankingSheet(expert_id="e1", ranks={"av1": 1})
    results = method_comparison(elicited, [], scenario, list((AggregationMethod("mean", "mid"),)))
    assert results[0].rho is None
    assert "h2" in results[0].error


def test_cohort_comparison_reports_means(sample):
    methods = [AggregationMethod("mean", "mid"), AggregationMethod("max", "max")]
    per_expert, means = cohort_method_comparison(
        sample.rankings, sample.responses, sample.scenario, methods
    )
    assert set(per_expert) == {s.expert_id for s in sample.rankings}
    assert set(means) == {"mean:mid", "max:max"}
    assert means["mean:mid"] > 0.7
    assert all(-1.0 <= v <= 1.0 for v in means.values())


# -- group_vs_set ------------------------------------------------------------


def test_whole_set_as_single_group():
    sheets = random_rankings(6, 5, seed=2)
    consensus = group_mean_ranking(sheets)
    (stats,) = group_vs_set({"all": sheets}, consensus)
    assert stats.group_id == "all"
    assert stats.size == 6
    assert stats.rho_vs_set == pytest.approx(1.0)


def test_identical_group_statistics():
    sheets = [sheet(f"e{k}", 1, 2, 3, 4) for k in range(4)]
    consensus = group_mean_ranking(sheets)
    (stats,) = group_vs_set({"g": sheets}, consensus)
    assert stats.w == pytest.approx(1.0)
    assert stats.mean_rho == pytest.approx(1.0)


def test_tighter_group_has_higher_w():
    tight = concordant_cohort(m=5, n=8, seed=101, max_swaps=1, expert_prefix="t")
    loose = random_rankings(5, 8, seed=55, expert_prefix="l")
    consensus = group_mean_ranking(tight + loose)
    stats = {g.group_id: g for g in group_vs_set({"tight": tight, "loose": loose}, consensus)}
    assert stats["tight"].w > stats["loose"].w


def test_empty_group_is_rejected():
    sheets = [sheet("e1", 1, 2, 3)]
    consensus = group_mean_ranking(sheets)
    with pytest.raises(ValueError):
        group_vs_set({"a": sheets, "b": []}, consensus)


def test_singleton_group_has_no_w():
    sheets = [sheet("e1", 1, 2, 3), sheet("e2", 2, 1, 3)]
    consensus = group_mean_ranking(sheets)
    stats = {g.group_id: g for g in group_vs_set({"a": [sheets[0]], "b": [sheets[1]]}, consensus)}
    assert stats["a"].w is None


def test_cohort_concordance_small_cohorts():
    assert cohort_concordance([sheet("e1", 1, 2, 3)]) is None
    stat = cohort_concordance([sheet("e1", 1, 2, 3), sheet("e2", 1, 2, 3)])
    assert stat.w == pytest.approx(1.0)
