"""Rank-order statistics: ranks from scores, Spearman's rho, Kendall's W,
footrule distance, and seeded random-ranking baselines.

Rho is computed as the Pearson product-moment correlation of the two rank
vectors, which handles tied (average) ranks and reduces to the classical
1 - 6*sum(d^2) / (n*(n^2-1)) form when both inputs are tie-free permutations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal, Mapping, Sequence, Union

import numpy as np
from scipy.stats import rankdata

from .model import Ranking, RankingSheet

RankingLike = Union[Ranking, RankingSheet, Mapping[str, float]]

Direction = Literal["ascending", "descending"]


@dataclass(frozen=True)
class AgreementStats:
    """Agreement of one ranking against another: correlation plus the summed
    per-item rank distance. ``rho`` is None when either rank vector has zero
    variance (all items tied), where the correlation is undefined."""

    rho: float | None
    footrule: float


@dataclass(frozen=True)
class ConcordanceStat:
    """Kendall's coefficient of concordance for m rankings of n items."""

    w: float
    m: int
    n: int


def _ranks(r: RankingLike) -> dict[str, float]:
    if isinstance(r, (Ranking, RankingSheet)):
        return {k: float(v) for k, v in r.ranks.items()}
    return {k: float(v) for k, v in r.items()}


def _aligned(a: RankingLike, b: RankingLike) -> tuple[list[float], list[float]]:
    ra, rb = _ranks(a), _ranks(b)
    if set(ra) != set(rb):
        raise ValueError("rankings cover different item sets")
    keys = sorted(ra)
    return [ra[k] for k in keys], [rb[k] for k in keys]


def ranks_from_scores(scores: Mapping[str, float], direction: Direction = "ascending") -> Ranking:
    """Convert scores to a ranking, tied scores receiving average ranks.

    Ascending gives rank 1 to the lowest score; descending gives rank 1 to the
    highest. Non-finite scores are rejected.
    """
    if not scores:
        raise ValueError("scores are empty")
    items = sorted(scores)
    values = np.array([float(scores[k]) for k in items])
    if not np.all(np.isfinite(values)):
        raise ValueError("scores must be finite")
    if direction == "descending":
        values = -values
    elif direction != "ascending":
        raise ValueError(f"unknown direction {direction!r}")
    ranked = rankdata(values, method="average")
    return Ranking(ranks={k: float(r) for k, r in zip(items, ranked)})


def spearman_rho(a: RankingLike, b: RankingLike) -> float | None:
    """Spearman rank correlation between two rankings over the same items.

    Returns None when either rank vector is constant (the correlation is
    undefined); raises on mismatched item sets or fewer than two items.
    """
    va, vb = _aligned(a, b)
    n = len(va)
    if n < 2:
        raise ValueError("need at least 2 items")
    mean_a = sum(va) / n
    mean_b = sum(vb) / n
    da = [x - mean_a for x in va]
    db = [x - mean_b for x in vb]
    ss_a = sum(x * x for x in da)
    ss_b = sum(x * x for x in db)
    if ss_a == 0.0 or ss_b == 0.0:
        return None
    rho = sum(x * y for x, y in zip(da, db)) / math.sqrt(ss_a * ss_b)
    return max(-1.0, min(1.0, rho))


def footrule(a: RankingLike, b: RankingLike) -> float:
    """Sum of absolute per-item rank differences; zero iff the rankings agree."""
    va, vb = _aligned(a, b)
    return float(sum(abs(x - y) for x, y in zip(va, vb)))


def _tie_correction(values: Sequence[float]) -> float:
    # sum of t^3 - t over groups of tied values
    counts: dict[float, int] = {}
    for v in values:
        counts[v] = counts.get(v, 0) + 1
    return float(sum(t**3 - t for t in counts.values() if t > 1))


def kendall_w(rankings: Sequence[RankingLike]) -> ConcordanceStat:
    """Kendall's W across m >= 2 rankings of the same items, with the standard
    tie correction: W = 12*S / (m^2*(n^3 - n) - m*sum(T_j))."""
    if len(rankings) < 2:
        raise ValueError("need at least 2 rankings")
    maps = [_ranks(r) for r in rankings]
    keys = sorted(maps[0])
    for m_ in maps[1:]:
        if set(m_) != set(keys):
            raise ValueError("rankings cover different item sets")
    m = len(maps)
    n = len(keys)
    sums = [sum(rm[k] for rm in maps) for k in keys]
    mean = sum(sums) / n
    s = sum((x - mean) ** 2 for x in sums)
    correction = sum(_tie_correction([rm[k] for k in keys]) for rm in maps)
    denom = m * m * (n**3 - n) - m * correction
    if denom <= 0:
        raise ValueError("concordance undefined: degenerate rankings")
    w = 12.0 * s / denom
    return ConcordanceStat(w=max(0.0, min(1.0, w)), m=m, n=n)


def random_rankings(
    m: int,
    n: int,
    seed: int,
    items: Sequence[str] | None = None,
    expert_prefix: str = "r",
) -> list[RankingSheet]:
    """m independent uniform permutations of 1..n, deterministic per seed."""
    if m < 1 or n < 1:
        raise ValueError("m and n must be >= 1")
    if items is None:
        items = [f"av{i + 1}" for i in range(n)]
    elif len(items) != n:
        raise ValueError("items length must equal n")
    rng = np.random.default_rng(seed)
    sheets = []
    for i in range(m):
        perm = rng.permutation(n) + 1
        sheets.append(
            RankingSheet(
                expert_id=f"{expert_prefix}{i + 1}",
                ranks={item: int(r) for item, r in zip(items, perm)},
            )
        )
    return sheets
