"""Domain types for elicitation scenarios, experts, rankings, and interval answers.

All types are immutable value objects. Constructors do not enforce the
dataset-level invariants; ``validate_scenario`` reports violations as data so
that a loader can surface every problem in one pass instead of failing on the
first.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence


@dataclass(frozen=True)
class Hop:
    """A single attack element, the unit experts rate with intervals."""

    id: str
    name: str
    description: str = ""


@dataclass(frozen=True)
class AttackVector:
    """An end-to-end attack, composed of an ordered path of hops.

    The same hop may appear more than once in ``hop_path``; each occurrence
    counts separately during aggregation.
    """

    id: str
    name: str
    hop_path: tuple[str, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hop_path", tuple(self.hop_path))


@dataclass(frozen=True)
class Question:
    """One question asked about every hop. Exactly one per scenario is the
    overall-difficulty question used for scoring."""

    id: str
    text: str
    is_overall: bool = False


@dataclass(frozen=True)
class Scenario:
    id: str
    avs: tuple[AttackVector, ...]
    hops: tuple[Hop, ...]
    questions: tuple[Question, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "avs", tuple(self.avs))
        object.__setattr__(self, "hops", tuple(self.hops))
        object.__setattr__(self, "questions", tuple(self.questions))

    @property
    def av_ids(self) -> tuple[str, ...]:
        return tuple(av.id for av in self.avs)

    @property
    def hop_by_id(self) -> dict[str, Hop]:
        return {h.id: h for h in self.hops}

    @property
    def av_by_id(self) -> dict[str, AttackVector]:
        return {a.id: a for a in self.avs}

    def overall_question(self) -> Question:
        """The question flagged ``is_overall``. Requires a validated scenario."""
        flagged = [q for q in self.questions if q.is_overall]
        if len(flagged) != 1:
            raise ValueError(
                f"scenario {self.id!r} has {len(flagged)} overall questions, expected 1"
            )
        return flagged[0]


@dataclass(frozen=True)
class Expert:
    id: str
    group_id: str
    is_reference: bool = False


@dataclass(frozen=True)
class RankingSheet:
    """One expert's elicited ranking: a tie-free permutation of 1..n over AV ids."""

    expert_id: str
    ranks: Mapping[str, int]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranks", dict(self.ranks))

    def to_ranking(self) -> "Ranking":
        return Ranking(ranks={k: float(v) for k, v in self.ranks.items()})


@dataclass(frozen=True)
class Ranking:
    """A possibly tied ranking: rank values sum to n(n+1)/2, ties carry the
    average of the positions they span."""

    ranks: Mapping[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ranks", dict(self.ranks))

    def __len__(self) -> int:
        return len(self.ranks)


@dataclass(frozen=True)
class IntervalResponse:
    """An expert's interval answer to one question about one hop, on a 0-100
    scale. The interval width carries the expert's uncertainty."""

    expert_id: str
    hop_id: str
    question_id: str
    lo: float
    hi: float


@dataclass(frozen=True)
class Violation:
    """A single invariant violation, located by a dataset path."""

    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def _check_unique(ids: Sequence[str], path: str, kind: str, out: list[Violation]) -> None:
    seen: set[str] = set()
    for i, item_id in enumerate(ids):
        if item_id in seen:
            out.append(Violation(f"{path}[{i}]", f"duplicate {kind} id {item_id!r}"))
        seen.add(item_id)


def _is_permutation(values: Sequence[float], n: int) -> bool:
    try:
        ints = sorted(int(v) for v in values)
    except (TypeError, ValueError):
        return False
    if any(float(v) != int(v) for v in values):
        return False
    return ints == list(range(1, n + 1))


def validate_scenario(
    scenario: Scenario,
    rankings: Iterable[RankingSheet] = (),
    responses: Iterable[IntervalResponse] = (),
    experts: Iterable[Expert] = (),
) -> list[Violation]:
    """Check every structural invariant of a dataset.

    Returns one Violation per problem, empty when the dataset is valid. Pure
    and idempotent; violations are data, not exceptions.
    """
    out: list[Violation] = []
    experts = list(experts)
    rankings = list(rankings)
    responses = list(responses)

    hop_ids = {h.id for h in scenario.hops}
    av_ids = [a.id for a in scenario.avs]
    question_ids = [q.id for q in scenario.questions]

    _check_unique(av_ids, "scenario.avs", "AV", out)
    _check_unique([h.id for h in scenario.hops], "scenario.hops", "hop", out)
    _check_unique(question_ids, "scenario.questions", "question", out)

    for i, hop in enumerate(scenario.hops):
        if not hop.id:
            out.append(Violation(f"scenario.hops[{i}]", "hop id is empty"))
    for i, q in enumerate(scenario.questions):
        if not q.text:
            out.append(Violation(f"scenario.questions[{i}]", "question text is empty"))

    overall = [q.id for q in scenario.questions if q.is_overall]
    if len(overall) != 1:
        out.append(
            Violation(
                "scenario.questions",
                f"expected exactly 1 overall question, found {len(overall)}",
            )
        )

    for i, av in enumerate(scenario.avs):
        if not av.hop_path:
            out.append(Violation(f"scenario.avs[{i}]", f"AV {av.id!r} has an empty hop path"))
        for j, hop_id in enumerate(av.hop_path):
            if hop_id not in hop_ids:
                out.append(
                    Violation(
                        f"scenario.avs[{i}].hop_path[{j}]",
                        f"AV {av.id!r} references unknown hop {hop_id!r}",
                    )
                )

    expert_ids = [e.id for e in experts]
    _check_unique(expert_ids, "experts", "expert", out)
    references = [e.id for e in experts if e.is_reference]
    if len(references) > 1:
        out.append(
            Violation("experts", f"more than one reference expert: {sorted(references)}")
        )
    known_experts = set(expert_ids)

    n = len(av_ids)
    av_id_set = set(av_ids)
    seen_sheets: set[str] = set()
    for i, sheet in enumerate(rankings):
        path = f"rankings[{i}]"
        if experts and sheet.expert_id not in known_experts:
            out.append(Violation(path, f"unknown expert {sheet.expert_id!r}"))
        if sheet.expert_id in seen_sheets:
            out.append(Violation(path, f"duplicate ranking sheet for expert {sheet.expert_id!r}"))
        seen_sheets.add(sheet.expert_id)
        if set(sheet.ranks) != av_id_set:
            out.append(Violation(path, "ranked item set does not match the scenario AV set"))
        elif not _is_permutation(list(sheet.ranks.values()), n):
            out.append(Violation(path, f"ranks are not a permutation of 1..{n}"))

    seen_responses: set[tuple[str, str, str]] = set()
    for i, r in enumerate(responses):
        path = f"responses[{i}]"
        if experts and r.expert_id not in known_experts:
            out.append(Violation(path, f"unknown expert {r.expert_id!r}"))
        if r.hop_id not in hop_ids:
            out.append(Violation(path, f"unknown hop {r.hop_id!r}"))
        if r.question_id not in set(question_ids):
            out.append(Violation(path, f"unknown question {r.question_id!r}"))
        key = (r.expert_id, r.hop_id, r.question_id)
        if key in seen_responses:
            out.append(Violation(path, f"duplicate response for {key}"))
        seen_responses.add(key)
        if not (isinstance(r.lo, (int, float)) and isinstance(r.hi, (int, float))):
            out.append(Violation(path, "interval bounds must be numbers"))
            continue
        if r.lo > r.hi:
            out.append(Violation(path, f"lo > hi ({r.lo} > {r.hi})"))
        if r.lo < 0 or r.hi > 100:
            out.append(Violation(path, f"interval [{r.lo}, {r.hi}] outside the 0-100 scale"))

    return out
