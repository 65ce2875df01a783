"""Interval statistics, OWA weight schemes, and hop-to-AV difficulty scoring.

An attack vector's difficulty is aggregated from the interval answers its
constituent hops received on the overall-difficulty question: pick one
statistic of each interval (min, mid, or max), then combine the per-occurrence
values with an operator. The OWA operators sort the values in descending order
and apply a decreasing weight vector, so harder hops dominate without the
heavy tie production of a plain maximum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Literal, Mapping, Sequence

from .model import AttackVector, IntervalResponse, Ranking, Scenario
from .rankstats import ranks_from_scores

OPERATORS = ("sum", "min", "mean", "max", "owa-linear", "owa-geometric")
STATISTICS = ("min", "mid", "max")

OwaScheme = Literal["linear", "geometric"]


class MissingResponseError(ValueError):
    """An AV score needs an overall answer for a hop the expert never rated."""

    def __init__(self, expert_id: str, av_id: str, hop_id: str):
        self.expert_id = expert_id
        self.av_id = av_id
        self.hop_id = hop_id
        super().__init__(
            f"expert {expert_id!r} has no overall response for hop {hop_id!r} "
            f"required by AV {av_id!r}"
        )


@dataclass(frozen=True)
class IntervalStats:
    """Endpoints and midpoint of one interval answer."""

    lo: float
    mid: float
    hi: float


@dataclass(frozen=True)
class OwaWeights:
    """Descending weight vector; w[0] applies to the largest sorted value."""

    w: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "w", tuple(float(x) for x in self.w))
        if len(self.w) < 1:
            raise ValueError("weights are empty")
        if any(x < 0 for x in self.w):
            raise ValueError("weights must be non-negative")
        if abs(sum(self.w) - 1.0) > 1e-9:
            raise ValueError(f"weights sum to {sum(self.w)}, expected 1")

    def __len__(self) -> int:
        return len(self.w)


@dataclass(frozen=True)
class AggregationMethod:
    """(operator, interval statistic) pair identifying one scoring method."""

    operator: str
    statistic: str

    def __post_init__(self) -> None:
        if self.operator not in OPERATORS:
            raise ValueError(f"unknown operator {self.operator!r}")
        if self.statistic not in STATISTICS:
            raise ValueError(f"unknown statistic {self.statistic!r}")

    @classmethod
    def parse(cls, key: str) -> "AggregationMethod":
        """Parse an ``operator:statistic`` key such as ``mean:mid``."""
        op, sep, stat = key.partition(":")
        if not sep:
            raise ValueError(f"method {key!r} is not of the form operator:statistic")
        return cls(operator=op.strip(), statistic=stat.strip())

    @property
    def key(self) -> str:
        return f"{self.operator}:{self.statistic}"

    def __str__(self) -> str:
        return self.key


def interval_stats(response: IntervalResponse) -> IntervalStats:
    lo = float(response.lo)
    hi = float(response.hi)
    return IntervalStats(lo=lo, mid=(lo + hi) / 2.0, hi=hi)


def owa_weights(scheme: OwaScheme, n: int) -> OwaWeights:
    """Generate a decreasing weight vector of length n.

    linear:    w_i = (n - i + 1) / (n*(n+1)/2)
    geometric: w_i proportional to 2^-i, normalized to sum 1
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if scheme == "linear":
        total = n * (n + 1) / 2
        return OwaWeights(w=tuple((n - i) / total for i in range(n)))
    if scheme == "geometric":
        raw = [2.0 ** -(i + 1) for i in range(n)]
        total = sum(raw)
        return OwaWeights(w=tuple(x / total for x in raw))
    raise ValueError(f"unknown OWA scheme {scheme!r}")


def owa(weights: OwaWeights, values: Sequence[float]) -> float:
    """Ordered weighted average: sort values descending, dot with the weights."""
    if len(weights) != len(values):
        raise ValueError(f"{len(weights)} weights for {len(values)} values")
    vals = sorted((float(v) for v in values), reverse=True)
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("values must be finite")
    return sum(w * v for w, v in zip(weights.w, vals))


def _statistic_value(stats: IntervalStats, statistic: str) -> float:
    if statistic == "min":
        return stats.lo
    if statistic == "mid":
        return stats.mid
    if statistic == "max":
        return stats.hi
    raise ValueError(f"unknown statistic {statistic!r}")


def _apply_operator(operator: str, values: Sequence[float]) -> float:
    if operator == "sum":
        return float(sum(values))
    if operator == "min":
        return float(min(values))
    if operator == "mean":
        return float(sum(values) / len(values))
    if operator == "max":
        return float(max(values))
    if operator == "owa-linear":
        return owa(owa_weights("linear", len(values)), values)
    if operator == "owa-geometric":
        return owa(owa_weights("geometric", len(values)), values)
    raise ValueError(f"unknown operator {operator!r}")


def av_score(
    method: AggregationMethod,
    responses: Iterable[IntervalResponse] | Mapping[str, IntervalResponse],
    av: AttackVector,
) -> float:
    """Difficulty score of one AV from one expert's overall-question responses.

    ``responses`` holds a single expert's answers, either as an iterable or
    keyed by hop id. Every occurrence in the AV's hop path contributes one
    value (and one OWA weight slot), so repeated hops count repeatedly.
    """
    if isinstance(responses, Mapping):
        by_hop = dict(responses)
    else:
        by_hop = {r.hop_id: r for r in responses}
    expert_id = next((r.expert_id for r in by_hop.values()), "?")
    values = []
    for hop_id in av.hop_path:
        if hop_id not in by_hop:
            raise MissingResponseError(expert_id, av.id, hop_id)
        values.append(_statistic_value(interval_stats(by_hop[hop_id]), method.statistic))
    if not values:
        raise ValueError(f"AV {av.id!r} has an empty hop path")
    return _apply_operator(method.operator, values)


def overall_responses(
    responses: Iterable[IntervalResponse], scenario: Scenario, expert_id: str
) -> dict[str, IntervalResponse]:
    """One expert's answers to the scenario's overall question, keyed by hop."""
    overall_id = scenario.overall_question().id
    return {
        r.hop_id: r
        for r in responses
        if r.expert_id == expert_id and r.question_id == overall_id
    }


def derive_ranking(
    responses: Iterable[IntervalResponse],
    scenario: Scenario,
    method: AggregationMethod,
    expert_id: str,
) -> Ranking:
    """Rank the scenario's AVs from one expert's hop ratings.

    Scores every AV with ``method`` and ranks ascending, so the lowest
    difficulty score gets rank 1 (easiest). Ties receive average ranks.
    """
    by_hop = overall_responses(responses, scenario, expert_id)
    if not by_hop:
        # carry the expert id into the error even when nothing was answered
        if scenario.avs and scenario.avs[0].hop_path:
            raise MissingResponseError(expert_id, scenario.avs[0].id, scenario.avs[0].hop_path[0])
        raise ValueError("scenario has no AVs to rank")
    scores = {av.id: av_score(method, by_hop, av) for av in scenario.avs}
    return ranks_from_scores(scores, direction="ascending")
