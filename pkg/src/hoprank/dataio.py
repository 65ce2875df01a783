"""Dataset file formats: JSON documents (plus CSV import for rankings),
loading with full validation, saving, and content hashing.

A dataset is spread over one or more files. Each JSON file carries a
``format_version`` and any of the four sections (``scenario``, ``experts``,
``rankings``, ``responses``); sections from multiple files are merged, the
scenario must appear exactly once. A ``.csv`` file is read as ranking rows
``expert_id,av_id,rank``.
"""

from __future__ import annotations

import csv
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Mapping, Sequence

from .model import (
    AttackVector,
    Expert,
    Hop,
    IntervalResponse,
    Question,
    RankingSheet,
    Scenario,
    Violation,
    validate_scenario,
)

FORMAT_VERSION = "1"

_SECTION_KEYS = {"scenario", "experts", "rankings", "responses"}
_ALLOWED_KEYS = _SECTION_KEYS | {"format_version", "seed", "generator"}


class DatasetError(Exception):
    """Base class for dataset loading problems."""


class DatasetFormatError(DatasetError):
    """A file could not be parsed or does not match the schema."""


class DatasetValidationError(DatasetError):
    """The files parsed, but the dataset violates invariants."""

    def __init__(self, violations: Sequence[str]):
        self.violations = list(violations)
        lines = "\n".join(f"  - {v}" for v in self.violations)
        super().__init__(f"dataset failed validation:\n{lines}")


@dataclass(frozen=True)
class Provenance:
    source_files: tuple[str, ...] = ()
    format_version: str = FORMAT_VERSION
    seed: int | None = None


@dataclass(frozen=True)
class Dataset:
    scenario: Scenario
    experts: tuple[Expert, ...]
    rankings: tuple[RankingSheet, ...]
    responses: tuple[IntervalResponse, ...]
    provenance: Provenance = field(default=Provenance(), compare=False)

    def expert_by_id(self) -> dict[str, Expert]:
        return {e.id: e for e in self.experts}

    def sheets_by_group(self) -> dict[str, list[RankingSheet]]:
        groups: dict[str, list[RankingSheet]] = {}
        by_id = self.expert_by_id()
        for sheet in self.rankings:
            expert = by_id.get(sheet.expert_id)
            if expert is None:
                continue
            groups.setdefault(expert.group_id, []).append(sheet)
        return {g: groups[g] for g in sorted(groups)}

    def reference_expert(self) -> Expert | None:
        for expert in self.experts:
            if expert.is_reference:
                return expert
        return None


def _require(condition: bool, where: str, message: str) -> None:
    if not condition:
        raise DatasetFormatError(f"{where}: {message}")


def _as_number(value: Any, where: str) -> float:
    _require(isinstance(value, (int, float)) and not isinstance(value, bool), where, "expected a number")
    return float(value)


def _as_str(value: Any, where: str) -> str:
    _require(isinstance(value, str), where, "expected a string")
    return value


def _parse_scenario(raw: Any, where: str) -> Scenario:
    _require(isinstance(raw, dict), where, "scenario must be an object")
    avs = []
    for i, a in enumerate(raw.get("avs", [])):
        w = f"{where}.avs[{i}]"
        _require(isinstance(a, dict), w, "expected an object")
        path = a.get("hop_path", [])
        _require(isinstance(path, list), f"{w}.hop_path", "expected a list")
        avs.append(
            AttackVector(
                id=_as_str(a.get("id"), f"{w}.id"),
                name=_as_str(a.get("name", ""), f"{w}.name"),
                hop_path=tuple(_as_str(h, f"{w}.hop_path[{j}]") for j, h in enumerate(path)),
            )
        )
    hops = []
    for i, h in enumerate(raw.get("hops", [])):
        w = f"{where}.hops[{i}]"
        _require(isinstance(h, dict), w, "expected an object")
        hops.append(
            Hop(
                id=_as_str(h.get("id"), f"{w}.id"),
                name=_as_str(h.get("name", ""), f"{w}.name"),
                description=_as_str(h.get("description", ""), f"{w}.description"),
            )
        )
    questions = []
    for i, q in enumerate(raw.get("questions", [])):
        w = f"{where}.questions[{i}]"
        _require(isinstance(q, dict), w, "expected an object")
        questions.append(
            Question(
                id=_as_str(q.get("id"), f"{w}.id"),
                text=_as_str(q.get("text", ""), f"{w}.text"),
                is_overall=bool(q.get("is_overall", False)),
            )
        )
    return Scenario(
        id=_as_str(raw.get("id"), f"{where}.id"),
        avs=tuple(avs),
        hops=tuple(hops),
        questions=tuple(questions),
    )


def _parse_experts(raw: Any, where: str) -> list[Expert]:
    _require(isinstance(raw, list), where, "experts must be a list")
    out = []
    for i, e in enumerate(raw):
        w = f"{where}[{i}]"
        _require(isinstance(e, dict), w, "expected an object")
        out.append(
            Expert(
                id=_as_str(e.get("id"), f"{w}.id"),
                group_id=_as_str(e.get("group_id"), f"{w}.group_id"),
                is_reference=bool(e.get("is_reference", False)),
            )
        )
    return out


def _parse_rankings(raw: Any, where: str) -> list[RankingSheet]:
    _require(isinstance(raw, list), where, "rankings must be a list")
    out = []
    for i, r in enumerate(raw):
        w = f"{where}[{i}]"
        _require(isinstance(r, dict), w, "expected an object")
        ranks = r.get("ranks")
        _require(isinstance(ranks, dict), f"{w}.ranks", "expected an object of av_id -> rank")
        parsed = {}
        for av_id, rank in ranks.items():
            value = _as_number(rank, f"{w}.ranks[{av_id}]")
            _require(value == int(value), f"{w}.ranks[{av_id}]", "elicited ranks must be integers")
            parsed[str(av_id)] = int(value)
        out.append(RankingSheet(expert_id=_as_str(r.get("expert_id"), f"{w}.expert_id"), ranks=parsed))
    return out


def _parse_responses(raw: Any, where: str) -> list[IntervalResponse]:
    _require(isinstance(raw, list), where, "responses must be a list")
    out = []
    for i, r in enumerate(raw):
        w = f"{where}[{i}]"
        _require(isinstance(r, dict), w, "expected an object")
        out.append(
            IntervalResponse(
                expert_id=_as_str(r.get("expert_id"), f"{w}.expert_id"),
                hop_id=_as_str(r.get("hop_id"), f"{w}.hop_id"),
                question_id=_as_str(r.get("question_id"), f"{w}.question_id"),
                lo=_as_number(r.get("lo"), f"{w}.lo"),
                hi=_as_number(r.get("hi"), f"{w}.hi"),
            )
        )
    return out


def _read_csv_rankings(path: Path) -> list[RankingSheet]:
    by_expert: dict[str, dict[str, int]] = {}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        _require(
            reader.fieldnames is not None
            and {"expert_id", "av_id", "rank"} <= set(reader.fieldnames),
            str(path),
            "CSV must have columns expert_id,av_id,rank",
        )
        for lineno, row in enumerate(reader, start=2):
            where = f"{path}:{lineno}"
            expert_id = (row.get("expert_id") or "").strip()
            av_id = (row.get("av_id") or "").strip()
            _require(bool(expert_id) and bool(av_id), where, "expert_id and av_id must be non-empty")
            try:
                rank = int(row.get("rank", ""))
            except ValueError:
                raise DatasetFormatError(f"{where}: rank {row.get('rank')!r} is not an integer")
            sheet = by_expert.setdefault(expert_id, {})
            _require(av_id not in sheet, where, f"duplicate rank for ({expert_id}, {av_id})")
            sheet[av_id] = rank
    return [RankingSheet(expert_id=e, ranks=r) for e, r in sorted(by_expert.items())]


def load_dataset(paths: Sequence[str | Path]) -> Dataset:
    """Load and validate a dataset from JSON / CSV files.

    Raises DatasetFormatError on unreadable or malformed files and
    DatasetValidationError (carrying every violation, with its source file)
    when the parsed dataset breaks an invariant.
    """
    if not paths:
        raise DatasetFormatError("no input files given")
    scenario: Scenario | None = None
    experts: list[Expert] = []
    rankings: list[RankingSheet] = []
    responses: list[IntervalResponse] = []
    origins: dict[tuple[str, int], str] = {}
    seed: int | None = None
    version: str | None = None

    for path in paths:
        path = Path(path)
        if not path.exists():
            raise DatasetFormatError(f"{path}: file not found")
        if path.suffix.lower() == ".csv":
            sheets = _read_csv_rankings(path)
            for sheet in sheets:
                origins[("rankings", len(rankings))] = f"{path}"
                rankings.append(sheet)
            continue
        try:
            raw = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise DatasetFormatError(f"{path}: invalid JSON ({exc})") from exc
        _require(isinstance(raw, dict), str(path), "top level must be an object")
        unknown = set(raw) - _ALLOWED_KEYS
        _require(not unknown, str(path), f"unknown keys {sorted(unknown)}")
        file_version = raw.get("format_version")
        _require(file_version == FORMAT_VERSION, str(path),
                 f"format_version {file_version!r} not supported (expected {FORMAT_VERSION!r})")
        version = file_version
        if "seed" in raw and raw["seed"] is not None:
            _require(isinstance(raw["seed"], int), f"{path}: seed", "expected an integer")
            seed = raw["seed"]
        if "scenario" in raw:
            _require(scenario is None, str(path), "scenario defined in more than one file")
            scenario = _parse_scenario(raw["scenario"], f"{path}: scenario")
        if "experts" in raw:
            experts.extend(_parse_experts(raw["experts"], f"{path}: experts"))
        if "rankings" in raw:
            parsed = _parse_rankings(raw["rankings"], f"{path}: rankings")
            for sheet in parsed:
                origins[("rankings", len(rankings))] = f"{path}"
                rankings.append(sheet)
        if "responses" in raw:
            parsed_r = _parse_responses(raw["responses"], f"{path}: responses")
            for resp in parsed_r:
                origins[("responses", len(responses))] = f"{path}"
                responses.append(resp)

    if scenario is None:
        raise DatasetFormatError("no scenario section found in the given files")

    violations = validate_scenario(scenario, rankings, responses, experts)
    if violations:
        raise DatasetValidationError([_locate(v, origins) for v in violations])

    return Dataset(
        scenario=scenario,
        experts=tuple(experts),
        rankings=tuple(rankings),
        responses=tuple(responses),
        provenance=Provenance(
            source_files=tuple(str(p) for p in paths),
            format_version=version or FORMAT_VERSION,
            seed=seed,
        ),
    )


def _locate(violation: Violation, origins: Mapping[tuple[str, int], str]) -> str:
    for section in ("rankings", "responses"):
        prefix = f"{section}["
        if violation.path.startswith(prefix):
            index_text = violation.path[len(prefix):].split("]", 1)[0]
            try:
                origin = origins.get((section, int(index_text)))
            except ValueError:
                origin = None
            if origin:
                return f"{origin}: {violation}"
    return str(violation)


def scenario_to_json(scenario: Scenario) -> dict[str, Any]:
    return {
        "id": scenario.id,
        "avs": [
            {"id": a.id, "name": a.name, "hop_path": list(a.hop_path)} for a in scenario.avs
        ],
        "hops": [
            {"id": h.id, "name": h.name, "description": h.description} for h in scenario.hops
        ],
        "questions": [
            {"id": q.id, "text": q.text, "is_overall": q.is_overall} for q in scenario.questions
        ],
    }


def dataset_to_json(dataset: Dataset) -> dict[str, Any]:
    """The single-file bundle form of a dataset (content only, no provenance)."""
    return {
        "format_version": FORMAT_VERSION,
        "seed": dataset.provenance.seed,
        "scenario": scenario_to_json(dataset.scenario),
        "experts": [
            {"id": e.id, "group_id": e.group_id, "is_reference": e.is_reference}
            for e in dataset.experts
        ],
        "rankings": [
            {"expert_id": s.expert_id, "ranks": {k: s.ranks[k] for k in sorted(s.ranks)}}
            for s in dataset.rankings
        ],
        "responses": [
            {
                "expert_id": r.expert_id,
                "hop_id": r.hop_id,
                "question_id": r.question_id,
                "lo": r.lo,
                "hi": r.hi,
            }
            for r in dataset.responses
        ],
    }


def save_dataset(dataset: Dataset, path: str | Path) -> None:
    """Write the dataset as one bundle JSON file."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(dataset_to_json(dataset), indent=2, sort_keys=True) + "\n",
        encoding="utf-8",
    )


def dataset_hash(dataset: Dataset) -> str:
    """SHA-256 of the canonical bundle JSON; stable across load/save cycles."""
    canonical = json.dumps(dataset_to_json(dataset), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()
