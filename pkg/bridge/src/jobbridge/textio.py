"""CSV interchange formats shared with the main pipeline.

The bridge deliberately re-implements these readers/writers instead of
importing the pipeline package: the two components are coupled only through
the on-disk formats.

- jobs / summaries: ``id,title,description[,summary]``
- embedding store:  ``id,v0,...,v{d-1}`` (``repr`` floats)
- pairs:            ``anchor,sample,score`` (titles plus a score in [0, 1])
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np


class FormatError(ValueError):
    pass


@dataclass(frozen=True)
class JobRow:
    id: str
    title: str
    description: str
    summary: str = ""


@dataclass(frozen=True)
class PairRow:
    anchor: str
    sample: str
    score: float


def read_jobs(path: str | Path) -> list[JobRow]:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        required = {"id", "title", "description"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise FormatError(f"{path}: expected columns {sorted(required)}")
        rows = [JobRow(id=r["id"], title=r["title"], description=r["description"],
                       summary=r.get("summary") or "")
                for r in reader]
    seen: set[str] = set()
    for row in rows:
        if row.id in seen:
            raise FormatError(f"{path}: duplicate id {row.id!r}")
        seen.add(row.id)
    return rows


def write_jobs(rows: list[JobRow], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "title", "description", "summary"])
        for r in rows:
            writer.writerow([r.id, r.title, r.description, r.summary])


def read_pairs(path: str | Path) -> list[PairRow]:
    path = Path(path)
    if not path.exists():
        raise FormatError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != ["anchor", "sample", "score"]:
            raise FormatError(f"{path}: expected header anchor,sample,score")
        pairs = []
        for i, row in enumerate(reader, start=2):
            if len(row) != 3:
                raise FormatError(f"{path}: row {i}: expected 3 fields")
            try:
                score = float(row[2])
            except ValueError as exc:
                raise FormatError(f"{path}: row {i}: malformed score ({exc})") from exc
            if not 0.0 <= score <= 1.0:
                raise FormatError(f"{path}: row {i}: score {score} outside [0, 1]")
            if not row[0].strip() or not row[1].strip():
                raise FormatError(f"{path}: row {i}: empty title")
            pairs.append(PairRow(anchor=row[0], sample=row[1], score=score))
    if not pairs:
        raise FormatError(f"{path}: no pairs")
    return pairs


def write_embeddings(ids: list[str], matrix: np.ndarray, path: str | Path) -> None:
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] != len(ids):
        raise ValueError("matrix must be 2-d with one row per id")
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id"] + [f"v{i}" for i in range(matrix.shape[1])])
        for key, vec in zip(ids, matrix):
            writer.writerow([key] + [repr(float(x)) for x in vec])
