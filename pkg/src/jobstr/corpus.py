"""Loading and validation of the raw job/skill/hierarchy CSV files."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path


class DataError(ValueError):
    """Malformed or inconsistent input data."""


@dataclass(frozen=True)
class JobRecord:
    id: str
    title: str
    description: str = ""
    summary: str | None = None


@dataclass(frozen=True)
class SkillRecord:
    id: str
    name: str
    description: str = ""
    is_category: bool = False


@dataclass(frozen=True)
class HierarchyEdge:
    child_skill_id: str
    parent_skill_id: str


@dataclass
class Corpus:
    jobs: list[JobRecord] = field(default_factory=list)
    skills: list[SkillRecord] = field(default_factory=list)
    hierarchy: list[HierarchyEdge] = field(default_factory=list)

    def job_titles(self) -> dict[str, str]:
        return {j.id: j.title for j in self.jobs}


def _read_rows(path: str | Path, required: list[str]) -> tuple[list[dict], dict[str, str]]:
    """Read a CSV and map required column names case-insensitively.

    Returns (rows, colmap) where colmap maps the canonical lowercase name to
    the header name actually present in the file.
    """
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames is None:
            raise DataError(f"{path}: empty file, expected a header row")
        lower = {name.lower().strip(): name for name in reader.fieldnames}
        missing = [c for c in required if c not in lower]
        if missing:
            raise DataError(f"{path}: missing required column(s): {', '.join(missing)}")
        rows = list(reader)
    return rows, lower


def load_jobs(path: str | Path) -> list[JobRecord]:
    rows, col = _read_rows(path, ["id", "title", "description"])
    summary_col = col.get("summary")
    jobs: list[JobRecord] = []
    seen: dict[str, int] = {}
    for i, row in enumerate(rows, start=2):  # row 1 is the header
        jid = (row[col["id"]] or "").strip()
        title = (row[col["title"]] or "").strip()
        if not jid:
            raise DataError(f"{path}: row {i}: empty id")
        if jid in seen:
            raise DataError(f"{path}: duplicate id {jid!r} at rows {seen[jid]} and {i}")
        if not title:
            raise DataError(f"{path}: row {i}: empty title for id {jid!r}")
        seen[jid] = i
        summary = (row.get(summary_col) or "").strip() if summary_col else None
        jobs.append(JobRecord(
            id=jid,
            title=title,
            description=(row[col["description"]] or "").strip(),
            summary=summary or None,
        ))
    return jobs


_TRUE = {"1", "true", "yes", "y"}


def load_skills(path: str | Path) -> list[SkillRecord]:
    rows, col = _read_rows(path, ["id", "name"])
    desc_col = col.get("description")
    cat_col = col.get("is_category")
    skills: list[SkillRecord] = []
    seen: dict[str, int] = {}
    for i, row in enumerate(rows, start=2):
        sid = (row[col["id"]] or "").strip()
        name = (row[col["name"]] or "").strip()
        if not sid:
            raise DataError(f"{path}: row {i}: empty id")
        if sid in seen:
            raise DataError(f"{path}: duplicate id {sid!r} at rows {seen[sid]} and {i}")
        if not name:
            raise DataError(f"{path}: row {i}: empty name for id {sid!r}")
        seen[sid] = i
        skills.append(SkillRecord(
            id=sid,
            name=name,
            description=(row.get(desc_col) or "").strip() if desc_col else "",
            is_category=(row.get(cat_col) or "").strip().lower() in _TRUE if cat_col else False,
        ))
    return skills


def load_hierarchy(path: str | Path, skills: list[SkillRecord]) -> list[HierarchyEdge]:
    rows, col = _read_rows(path, ["child_id", "parent_id"])
    known = {s.id for s in skills}
    edges: list[HierarchyEdge] = []
    seen: set[tuple[str, str]] = set()
    for i, row in enumerate(rows, start=2):
        child = (row[col["child_id"]] or "").strip()
        parent = (row[col["parent_id"]] or "").strip()
        for sid in (child, parent):
            if sid not in known:
                raise DataError(f"{path}: row {i}: unknown skill id {sid!r}")
        if child == parent:
            raise DataError(f"{path}: row {i}: self-loop on skill {child!r}")
        if (child, parent) in seen:
            raise DataError(f"{path}: row {i}: duplicate edge {child!r} -> {parent!r}")
        seen.add((child, parent))
        edges.append(HierarchyEdge(child_skill_id=child, parent_skill_id=parent))
    return edges


def load_corpus(jobs_path, skills_path, hierarchy_path) -> Corpus:
    skills = load_skills(skills_path)
    return Corpus(
        jobs=load_jobs(jobs_path),
        skills=skills,
        hierarchy=load_hierarchy(hierarchy_path, skills),
    )


_SENTENCE = re.compile(r"[^.!?]*[.!?]|[^.!?]+$")


def summarize(job: JobRecord, max_sentences: int = 3) -> str:
    """Extractive summary: first `max_sentences` sentences of the description.

    Falls back to the title when the description is empty.
    """
    if max_sentences < 1:
        raise ValueError("max_sentences must be >= 1")
    text = job.description.strip()
    if not text:
        return job.title
    sentences = [m.group(0) for m in _SENTENCE.finditer(text) if m.group(0).strip()]
    return "".join(sentences[:max_sentences]).strip()


def save_jobs(jobs: list[JobRecord], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "title", "description", "summary"])
        for j in jobs:
            writer.writerow([j.id, j.title, j.description, j.summary or ""])


def save_skills(skills: list[SkillRecord], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id", "name", "description", "is_category"])
        for s in skills:
            writer.writerow([s.id, s.name, s.description, "true" if s.is_category else "false"])


def save_hierarchy(edges: list[HierarchyEdge], path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["child_id", "parent_id"])
        for e in edges:
            writer.writerow([e.child_skill_id, e.parent_skill_id])
