"""Seeded synthetic data: a full sample cohort plus small constructed
corpora used by tests and the baseline tooling.

Everything here is deterministic per seed. The sample mirrors the shape of
a realistic elicitation exercise: ten attack vectors built from a pool of
twenty six hops (paths overlap and may visit a hop twice), thirty nine
experts in seven groups of uneven size and uneven internal agreement, one
of whom is flagged as the reference ranking.
"""

from __future__ import annotations

import numpy as np

from .model import (
    AttackVector,
    Expert,
    Hop,
    IntervalResponse,
    Question,
    RankingSheet,
    Scenario,
)
from .dataio import Dataset, Provenance

DEFAULT_SEED = 1729

# hop indices per AV path; pivot hops 4 and 5 recur across paths, and a
# path may visit the same hop twice (AV2 revisits 6, AV6 revisits 16)
_HOP_PATHS = (
    (2, 3, 1, 4, 5),
    (6, 7, 6, 8, 4),
    (9,),
    (10, 11, 4, 5),
    (12, 13, 2, 3, 14, 15, 4, 5),
    (16, 16, 17, 4, 5),
    (6, 18, 4, 5),
    (19, 20, 21),
    (22, 23, 24),
    (25, 26, 1, 4, 5),
)

_AV_NAMES = (
    "Phished workstation to data store",
    "Seeded USB via front desk",
    "Direct server room entry",
    "Stolen remote-access login",
    "Watering hole on trade press",
    "Tampered supplier laptop",
    "Cloned contractor badge",
    "Wireless bridge into control LAN",
    "Shared cloud tenant pivot",
    "Building controller backdoor",
)

_HOP_NAMES = (
    "Escalate to local administrator",
    "Craft a convincing spear-phish",
    "Get the payload past mail filtering",
    "Move laterally to the target segment",
    "Stage and exfiltrate the target data",
    "Tailgate through the staffed lobby",
    "Plant a seeded USB key",
    "Get removable media to execute",
    "Force the server room door",
    "Phish remote-access credentials",
    "Defeat the second authentication factor",
    "Identify a frequently visited site",
    "Compromise the watering-hole site",
    "Fingerprint the visiting browser",
    "Serve a working browser exploit",
    "Intercept the hardware shipment",
    "Implant persistent firmware",
    "Clone a contractor access badge",
    "Locate the wireless bridge",
    "Break the wireless key",
    "Pivot onto the control network",
    "Compromise the shared cloud tenant",
    "Escape tenant isolation",
    "Abuse the directory sync link",
    "Map the building-management network",
    "Exploit the building controller",
)

_QUESTIONS = (
    ("q-skill", "How much specialist skill does this hop demand of the attacker?", False),
    ("q-cost", "How costly are the tools and access needed to attempt this hop?", False),
    ("q-detect", "How likely is the attacker to be detected while making this hop?", False),
    ("q-time", "How much time would this hop take to carry out?", False),
    ("q-overall", "Taking everything into account, how difficult is this hop for the attacker?", True),
)

# group id -> (size, group offset sd, per-expert score sd, swap range)
# D is the tight group, G the loose one; the rest sit in between
_GROUP_PROFILES = {
    "A": (5, 4.0, 6.0, (1, 3)),
    "B": (6, 5.0, 7.0, (1, 4)),
    "C": (6, 5.0, 7.0, (1, 4)),
    "D": (4, 2.0, 3.0, (0, 1)),
    "E": (5, 6.0, 8.0, (2, 5)),
    "F": (8, 6.0, 9.0, (2, 5)),
    "G": (5, 10.0, 14.0, (5, 9)),
}

# these experts ignore their own ratings and rank essentially at random
_DISCORDANT = ("b6", "e5", "f7", "f8", "g5")

_REFERENCE_EXPERT = "d1"


def sample_scenario() -> Scenario:
    """The bundled scenario: 10 AVs over 26 hops, 4 aspect questions + 1 overall."""
    hops = tuple(
        Hop(id=f"h{i + 1}", name=name) for i, name in enumerate(_HOP_NAMES)
    )
    avs = tuple(
        AttackVector(
            id=f"av{i + 1}",
            name=_AV_NAMES[i],
            hop_path=tuple(f"h{j}" for j in path),
        )
        for i, path in enumerate(_HOP_PATHS)
    )
    questions = tuple(
        Question(id=qid, text=text, is_overall=overall) for qid, text, overall in _QUESTIONS
    )
    return Scenario(id="intrusion-sample", avs=avs, hops=hops, questions=questions)


def _snap_half(x: float) -> float:
    return round(x * 2.0) / 2.0


def _interval(rng: np.random.Generator, center: float) -> tuple[float, float]:
    half = rng.uniform(3.0, 15.0)
    lo = _snap_half(max(0.0, center - half))
    hi = _snap_half(min(100.0, center + half))
    return lo, hi


def _adjacent_swaps(rng: np.random.Generator, order: list[str], count: int) -> list[str]:
    order = list(order)
    for _ in range(count):
        i = int(rng.integers(0, len(order) - 1))
        order[i], order[i + 1] = order[i + 1], order[i]
    return order


def _order_to_sheet(expert_id: str, order: list[str]) -> RankingSheet:
    return RankingSheet(expert_id=expert_id, ranks={av: i + 1 for i, av in enumerate(order)})


def sample_dataset(seed: int = DEFAULT_SEED) -> Dataset:
    """Generate the full 39-expert cohort.

    Each expert carries a latent difficulty per hop (a shared base plus a
    group offset plus personal noise), answers every question for every hop
    as an interval around that latent value, and ranks the AVs by the mean
    midpoint along each path before group-dependent swap noise is applied.
    A handful of designated experts rank at random instead, so the cohort
    contains genuine outliers.
    """
    rng = np.random.default_rng(seed)
    scenario = sample_scenario()
    hop_ids = [h.id for h in scenario.hops]
    base = {h: rng.uniform(15.0, 85.0) for h in hop_ids}

    experts: list[Expert] = []
    sheets: list[RankingSheet] = []
    responses: list[IntervalResponse] = []

    for group_id, (size, offset_sd, expert_sd, swap_range) in _GROUP_PROFILES.items():
        offsets = {h: rng.normal(0.0, offset_sd) for h in hop_ids}
        for k in range(size):
            expert_id = f"{group_id.lower()}{k + 1}"
            experts.append(
                Expert(
                    id=expert_id,
                    group_id=group_id,
                    is_reference=expert_id == _REFERENCE_EXPERT,
                )
            )

            latent = {
                h: float(np.clip(base[h] + offsets[h] + rng.normal(0.0, expert_sd), 2.0, 98.0))
                for h in hop_ids
            }
            mids: dict[str, float] = {}
            for h in hop_ids:
                for question in scenario.questions:
                    if question.is_overall:
                        center = latent[h]
                    else:
                        center = float(np.clip(latent[h] + rng.normal(0.0, 10.0), 2.0, 98.0))
                    lo, hi = _interval(rng, center)
                    if question.is_overall:
                        mids[h] = (lo + hi) / 2.0
                    responses.append(
                        IntervalResponse(
                            expert_id=expert_id,
                            hop_id=h,
                            question_id=question.id,
                            lo=lo,
                            hi=hi,
                        )
                    )

            if expert_id in _DISCORDANT:
                order = [f"av{i + 1}" for i in rng.permutation(len(scenario.avs))]
            else:
                scores = {
                    av.id: float(np.mean([mids[h] for h in av.hop_path]))
                    for av in scenario.avs
                }
                order = sorted(scores, key=lambda a: (scores[a], a))
                swaps = int(rng.integers(swap_range[0], swap_range[1] + 1))
                order = _adjacent_swaps(rng, order, swaps)
            sheets.append(_order_to_sheet(expert_id, order))

    return Dataset(
        scenario=scenario,
        experts=tuple(experts),
        rankings=tuple(sheets),
        responses=tuple(responses),
        provenance=Provenance(source_files=(), seed=seed),
    )


def concordant_cohort(
    m: int = 6,
    n: int = 10,
    seed: int = DEFAULT_SEED,
    max_swaps: int = 2,
    expert_prefix: str = "e",
) -> list[RankingSheet]:
    """m sheets over av1..avn: one base permutation, each expert at most
    max_swaps adjacent transpositions away from it."""
    rng = np.random.default_rng(seed)
    items = [f"av{i + 1}" for i in range(n)]
    base = [items[i] for i in rng.permutation(n)]
    sheets = []
    for k in range(m):
        swaps = int(rng.integers(0, max_swaps + 1))
        order = _adjacent_swaps(rng, base, swaps)
        sheets.append(_order_to_sheet(f"{expert_prefix}{k + 1}", order))
    return sheets


def tie_corpus() -> Dataset:
    """Four two-hop AVs that all share one dominant hop.

    Under (max, mid) every AV scores the shared hop's midpoint, so all four
    scores collide; rank-sensitive operators keep the distinct second hops
    visible and break the tie.
    """
    shared = Hop(id="hx", name="Shared chokepoint")
    seconds = [
        Hop(id=f"h{c}", name=f"Distinct approach {c}") for c in ("a", "b", "c", "d")
    ]
    avs = tuple(
        AttackVector(id=f"av{i + 1}", name=f"Route {i + 1}", hop_path=("hx", s.id))
        for i, s in enumerate(seconds)
    )
    scenario = Scenario(
        id="tie-demo",
        avs=avs,
        hops=(shared, *seconds),
        questions=(
            Question(id="q-overall", text="How difficult is this hop overall?", is_overall=True),
        ),
    )
    centers = {"hx": 90.0, "ha": 10.0, "hb": 20.0, "hc": 30.0, "hd": 40.0}
    responses = tuple(
        IntervalResponse(
            expert_id="e1",
            hop_id=h,
            question_id="q-overall",
            lo=c - 5.0,
            hi=c + 5.0,
        )
        for h, c in centers.items()
    )
    return Dataset(
        scenario=scenario,
        experts=(Expert(id="e1", group_id="X"),),
        rankings=(),
        responses=responses,
        provenance=Provenance(),
    )
