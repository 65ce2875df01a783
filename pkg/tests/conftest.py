from __future__ import annotations

import json
from pathlib import Path

import pytest

from hoprank.dataio import Dataset, Provenance, dataset_to_json
from hoprank.model import (
    AttackVector,
    Expert,
    Hop,
    IntervalResponse,
    Question,
    RankingSheet,
    Scenario,
)
from hoprank.synth import sample_dataset

# one five-hop path whose interval answers produce easily hand-checked
# aggregates: mids are 25, 40, 20.5, 40, 70
WORKED_INTERVALS = {
    "h1": (10.0, 40.0),
    "h2": (30.0, 50.0),
    "h3": (11.0, 30.0),
    "h4": (30.0, 50.0),
    "h5": (60.0, 80.0),
}
WORKED_PATH = ("h2", "h3", "h1", "h4", "h5")


def single_path_scenario() -> Scenario:
    return Scenario(
        id="worked",
        avs=(AttackVector(id="av1", name="Worked path", hop_path=WORKED_PATH),),
        hops=tuple(Hop(id=f"h{i}", name=f"hop {i}") for i in range(1, 6)),
        questions=(
            Question(id="q-overall", text="How difficult overall?", is_overall=True),
        ),
    )


def worked_responses(expert_id: str = "e1") -> tuple[IntervalResponse, ...]:
    return tuple(
        IntervalResponse(expert_id=expert_id, hop_id=h, question_id="q-overall", lo=lo, hi=hi)
        for h, (lo, hi) in WORKED_INTERVALS.items()
    )


def sheet(expert_id: str, *ranks: int, items: tuple[str, ...] | None = None) -> RankingSheet:
    if items is None:
        items = tuple(f"av{i + 1}" for i in range(len(ranks)))
    return RankingSheet(expert_id=expert_id, ranks=dict(zip(items, ranks)))


def tiny_scenario(n_avs: int = 3, n_hops: int = 3) -> Scenario:
    return Scenario(
        id="tiny",
        avs=tuple(
            AttackVector(id=f"av{i + 1}", name=f"vector {i + 1}", hop_path=(f"h{i % n_hops + 1}",))
            for i in range(n_avs)
        ),
        hops=tuple(Hop(id=f"h{i + 1}", name=f"hop {i + 1}") for i in range(n_hops)),
        questions=(
            Question(id="q-overall", text="Overall difficulty?", is_overall=True),
        ),
    )


def expert(expert_id: str, group_id: str = "A", is_reference: bool = False) -> Expert:
    return Expert(id=expert_id, group_id=group_id, is_reference=is_reference)


def small_dataset() -> Dataset:
    """Two experts, opposite rankings, one interval answer each."""
    return Dataset(
        scenario=tiny_scenario(),
        experts=(expert("e1", "A", is_reference=True), expert("e2", "B")),
        rankings=(sheet("e1", 1, 2, 3), sheet("e2", 3, 2, 1)),
        responses=(
            IntervalResponse(expert_id="e1", hop_id="h1", question_id="q-overall", lo=10.0, hi=20.0),
            IntervalResponse(expert_id="e2", hop_id="h2", question_id="q-overall", lo=42.5, hi=55.0),
        ),
        provenance=Provenance(seed=7),
    )


def rich_dataset() -> Dataset:
    """Three experts, two groups, full interval coverage: every analysis
    artifact can be computed."""
    hop_intervals = {
        "e1": {"h1": (10, 20), "h2": (40, 50), "h3": (70, 80)},
        "e2": {"h1": (15, 25), "h2": (35, 55), "h3": (60, 90)},
        "e3": {"h1": (20, 30), "h2": (45, 65), "h3": (65, 85)},
    }
    responses = tuple(
        IntervalResponse(expert_id=e, hop_id=h, question_id="q-overall", lo=lo, hi=hi)
        for e, hops in hop_intervals.items()
        for h, (lo, hi) in hops.items()
    )
    return Dataset(
        scenario=tiny_scenario(),
        experts=(expert("e1", "A", is_reference=True), expert("e2", "A"), expert("e3", "B")),
        rankings=(sheet("e1", 1, 2, 3), sheet("e2", 2, 1, 3), sheet("e3", 1, 2, 3)),
        responses=responses,
        provenance=Provenance(seed=11),
    )


def write_json(path: Path, payload) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def scenario_file(tmp_path: Path, name: str = "scenario.json", **extra) -> Path:
    bundle = dataset_to_json(small_dataset())
    payload = {
        "format_version": "1",
        "scenario": bundle["scenario"],
        "experts": bundle["experts"],
        **extra,
    }
    return write_json(tmp_path / name, payload)


@pytest.fixture(scope="session")
def sample():
    return sample_dataset()


@pytest.fixture(scope="session")
def sample_files() -> list[Path]:
    root = Path(__file__).resolve().parent.parent / "data" / "sample"
    return [root / "scenario.json", root / "rankings.csv", root / "responses.json"]
