#!/usr/bin/env python3
"""Regenerate the committed sample dataset under data/sample/.

The sample is split across three files to exercise every ingestion path:
scenario + expert roster as JSON, ranking sheets as CSV, interval responses
as JSON. Same seed, same bytes.
"""

from __future__ import annotations

import argparse
import csv
import json
from pathlib import Path

from hoprank.dataio import FORMAT_VERSION, dataset_to_json
from hoprank.synth import DEFAULT_SEED, sample_dataset


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=DEFAULT_SEED)
    parser.add_argument("--out", type=Path, default=Path(__file__).resolve().parent.parent / "data" / "sample")
    args = parser.parse_args()

    dataset = sample_dataset(seed=args.seed)
    bundle = dataset_to_json(dataset)
    args.out.mkdir(parents=True, exist_ok=True)

    scenario_doc = {
        "format_version": FORMAT_VERSION,
        "seed": args.seed,
        "generator": "scripts/generate_sample.py",
        "scenario": bundle["scenario"],
        "experts": bundle["experts"],
    }
    (args.out / "scenario.json").write_text(
        json.dumps(scenario_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    responses_doc = {
        "format_version": FORMAT_VERSION,
        "responses": bundle["responses"],
    }
    (args.out / "responses.json").write_text(
        json.dumps(responses_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    with open(args.out / "rankings.csv", "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["expert_id", "av_id", "rank"])
        for sheet in dataset.rankings:
            for av_id in sorted(sheet.ranks, key=lambda a: sheet.ranks[a]):
                writer.writerow([sheet.expert_id, av_id, sheet.ranks[av_id]])

    print(f"wrote scenario.json, rankings.csv, responses.json to {args.out} (seed {args.seed})")


if __name__ == "__main__":
    main()
