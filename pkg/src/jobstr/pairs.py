"""Self-supervised STR pair mining, region labels, and the disjoint-title split."""

from __future__ import annotations

import csv
import hashlib
import random
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import DataError
from .embed import EmbeddingStore, str_score


@dataclass(frozen=True)
class STRPair:
    anchor_id: str
    sample_id: str
    score: float

    def __post_init__(self):
        if self.anchor_id == self.sample_id:
            raise ValueError(f"anchor and sample are the same id: {self.anchor_id!r}")
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")


@dataclass(frozen=True)
class RegionPartition:
    low_upper: float = 0.50
    medium_upper: float = 0.75

    def __post_init__(self):
        if not 0.0 < self.low_upper < self.medium_upper < 1.0:
            raise ValueError("require 0 < low_upper < medium_upper < 1")


LOW, MEDIUM, HIGH = "Low", "Medium", "High"
REGIONS = (LOW, MEDIUM, HIGH)


def assign_region(score: float, partition: RegionPartition = RegionPartition()) -> str:
    """Half-open bands: [0, low), [low, medium), [medium, 1]."""
    if not 0.0 <= score <= 1.0:
        raise ValueError(f"score {score} outside [0, 1]")
    if score < partition.low_upper:
        return LOW
    if score < partition.medium_upper:
        return MEDIUM
    return HIGH


@dataclass
class PairDataset:
    pairs: list[STRPair] = field(default_factory=list)
    role: str = "train"


@dataclass(frozen=True)
class SamplingConfig:
    per_anchor_cap: int = 9
    seed: int = 0

    def __post_init__(self):
        if self.per_anchor_cap < 1:
            raise ValueError("per_anchor_cap must be >= 1")


def _anchor_rng(seed: int, anchor_id: str) -> random.Random:
    # keyed per anchor so parallel and serial runs agree
    digest = hashlib.blake2b(f"{seed}:{anchor_id}".encode("utf-8"), digest_size=8).digest()
    return random.Random(int.from_bytes(digest, "little"))


def build_pairs(store: EmbeddingStore, job_ids: list[str], sampling: SamplingConfig) -> list[STRPair]:
    """Per anchor: keep the top, bottom, and a random middle band of scored samples.

    The cap is split across the three bands (remainder to top, then bottom)
    so every STR region gets populated.
    """
    for jid in job_ids:
        if jid not in store:
            raise DataError(f"unknown job id {jid!r}")
    cap = sampling.per_anchor_cap
    if cap > len(job_ids) - 1:
        raise DataError(f"per-anchor cap {cap} exceeds population of {len(job_ids) - 1} candidates")
    n_top = cap // 3 + (1 if cap % 3 >= 1 else 0)
    n_bot = cap // 3 + (1 if cap % 3 >= 2 else 0)
    n_mid = cap // 3

    pairs: list[STRPair] = []
    for anchor in job_ids:
        scored = sorted(
            ((str_score(store[anchor], store[other]), other) for other in job_ids if other != anchor),
            key=lambda t: (-t[0], t[1]),
        )
        top = scored[:n_top]
        bottom = scored[len(scored) - n_bot:] if n_bot else []
        middle_pool = scored[n_top:len(scored) - n_bot]
        rng = _anchor_rng(sampling.seed, anchor)
        middle = rng.sample(middle_pool, min(n_mid, len(middle_pool)))
        for score, other in top + middle + bottom:
            pairs.append(STRPair(anchor_id=anchor, sample_id=other, score=score))
    return pairs


def split_disjoint(titles_by_id: dict[str, str], eval_fraction: float, seed: int) -> tuple[set[str], set[str]]:
    """Split job ids so that no (normalized) title appears on both sides."""
    if not 0.0 < eval_fraction < 1.0:
        raise ValueError("eval_fraction must be in (0, 1)")
    if len(titles_by_id) < 2:
        raise ValueError("need at least 2 jobs to split")
    by_title: dict[str, list[str]] = {}
    for jid, title in titles_by_id.items():
        by_title.setdefault(title.strip().lower(), []).append(jid)
    titles = sorted(by_title)
    rng = random.Random(seed)
    rng.shuffle(titles)
    n_eval = int(len(titles) * eval_fraction)
    if n_eval == 0 or n_eval == len(titles):
        raise ValueError(f"eval_fraction {eval_fraction} leaves an empty side for {len(titles)} titles")
    eval_ids = {jid for t in titles[:n_eval] for jid in by_title[t]}
    train_ids = {jid for t in titles[n_eval:] for jid in by_title[t]}
    return train_ids, eval_ids


def filter_to_side(pairs: list[STRPair], side_ids: set[str], role: str) -> PairDataset:
    """Keep pairs whose endpoints both lie on the given side; cross pairs drop."""
    kept = [p for p in pairs if p.anchor_id in side_ids and p.sample_id in side_ids]
    return PairDataset(pairs=kept, role=role)


def stratify(pairs: list[STRPair], partition: RegionPartition, quota_per_region: int,
             seed: int, role: str = "train") -> tuple[PairDataset, dict[str, int]]:
    """Uniformly subsample each region to min(quota, available)."""
    if quota_per_region < 1:
        raise ValueError("quota_per_region must be >= 1")
    buckets: dict[str, list[STRPair]] = {r: [] for r in REGIONS}
    for p in pairs:
        buckets[assign_region(p.score, partition)].append(p)
    rng = random.Random(seed)
    selected: list[STRPair] = []
    counts: dict[str, int] = {}
    for region in REGIONS:
        available = buckets[region]
        take = min(quota_per_region, len(available))
        counts[region] = take
        if take < len(available):
            selected.extend(rng.sample(available, take))
        else:
            selected.extend(available)
    return PairDataset(pairs=selected, role=role), counts


def write_pairs(dataset: PairDataset, titles_by_id: dict[str, str], path: str | Path) -> None:
    """Pair files carry titles; a sidecar `<path>.ids.csv` maps titles back to ids."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["anchor", "sample", "score"])
        for p in dataset.pairs:
            writer.writerow([titles_by_id[p.anchor_id], titles_by_id[p.sample_id], f"{p.score:.6f}"])
    used = sorted({p.anchor_id for p in dataset.pairs} | {p.sample_id for p in dataset.pairs})
    with path.with_suffix(path.suffix + ".ids.csv").open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["title", "id"])
        for jid in used:
            writer.writerow([titles_by_id[jid], jid])


def read_pairs(path: str | Path, role: str = "train") -> tuple[PairDataset, dict[str, str]]:
    """Read a pair file; returns the dataset (keyed by id when the sidecar
    exists, otherwise by title) and the title lookup."""
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    ids_path = path.with_suffix(path.suffix + ".ids.csv")
    title_to_id: dict[str, str] = {}
    if ids_path.exists():
        with ids_path.open(newline="", encoding="utf-8") as fh:
            reader = csv.DictReader(fh)
            for row in reader:
                title_to_id[row["title"]] = row["id"]
    pairs: list[STRPair] = []
    titles: dict[str, str] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["anchor", "sample", "score"]:
            raise DataError(f"{path}: bad header {header}")
        for i, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise DataError(f"{path}: row {i}: expected 3 fields, got {len(row)}")
            try:
                score = float(row[2])
            except ValueError as exc:
                raise DataError(f"{path}: row {i}: malformed score {row[2]!r}") from exc
            if not 0.0 <= score <= 1.0:
                raise DataError(f"{path}: row {i}: score {score} outside [0, 1]")
            anchor = title_to_id.get(row[0], row[0])
            sample = title_to_id.get(row[1], row[1])
            titles[anchor] = row[0]
            titles[sample] = row[1]
            pairs.append(STRPair(anchor_id=anchor, sample_id=sample, score=score))
    return PairDataset(pairs=pairs, role=role), titles
