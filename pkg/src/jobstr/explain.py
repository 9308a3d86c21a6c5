"""Explanation subgraphs for job-title pairs: shared skills + verdict."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .kg import SUBSKILL_OF, KnowledgeGraph

SPECIFIC, GENERIC, NO_OVERLAP = "Specific", "Generic", "NoOverlap"


@dataclass(frozen=True)
class SharedSkill:
    skill_id: str
    label: str
    specificity: float
    weight_a: float
    weight_b: float


@dataclass
class Explanation:
    job_a: str
    job_b: str
    title_a: str
    title_b: str
    shared_skills: list[SharedSkill] = field(default_factory=list)
    verdict: str = NO_OVERLAP
    predicted_str: float = 0.0
    # optional 2-hop paths through one skill-category node: (skill_a, category, skill_b)
    category_paths: list[tuple[str, str, str]] = field(default_factory=list)


def explain_match(kg: KnowledgeGraph, specificity: dict[str, float],
                  job_a: str, job_b: str, predicted_str: float,
                  verdict_threshold: float = 0.5, hops: int = 1) -> Explanation:
    for jid in (job_a, job_b):
        if jid not in kg.nodes:
            raise ValueError(f"unknown job node {jid!r}")
    skills_a = kg.skills_of(job_a)
    skills_b = kg.skills_of(job_b)
    shared_ids = sorted(set(skills_a) & set(skills_b))
    shared = [
        SharedSkill(skill_id=sid, label=kg.nodes[sid].label,
                    specificity=specificity.get(sid, 0.0),
                    weight_a=skills_a[sid], weight_b=skills_b[sid])
        for sid in shared_ids
    ]
    shared.sort(key=lambda s: (-s.specificity, s.skill_id))
    if not shared:
        verdict = NO_OVERLAP
    elif max(s.specificity for s in shared) >= verdict_threshold:
        verdict = SPECIFIC
    else:
        verdict = GENERIC

    explanation = Explanation(
        job_a=job_a, job_b=job_b,
        title_a=kg.nodes[job_a].label, title_b=kg.nodes[job_b].label,
        shared_skills=shared, verdict=verdict, predicted_str=predicted_str,
    )
    if hops >= 2:
        parents_of = {}
        for e in kg.edges:
            if e.relation == SUBSKILL_OF:
                parents_of.setdefault(e.source, set()).add(e.target)
        for sa in sorted(skills_a):
            for sb in sorted(skills_b):
                if sa == sb:
                    continue
                for cat in sorted(parents_of.get(sa, set()) & parents_of.get(sb, set())):
                    explanation.category_paths.append((sa, cat, sb))
    return explanation


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def render_dot(explanation: Explanation) -> str:
    """Graphviz DOT: two job nodes plus one node per shared skill, labels
    carrying specificity in square brackets (minimal decimal form, e.g.
    [0.67] or [0.0]) and edge weights to 2 decimals."""
    lines = ["graph explanation {"]
    jobs = sorted([(explanation.job_a, explanation.title_a),
                   (explanation.job_b, explanation.title_b)])
    for nid, title in jobs:
        lines.append(f"  {_dot_quote(nid)} [label={_dot_quote(title)}, shape=box];")
    for s in sorted(explanation.shared_skills, key=lambda s: s.skill_id):
        label = f"{s.label} [{round(s.specificity, 2)}]"
        lines.append(f"  {_dot_quote(s.skill_id)} [label={_dot_quote(label)}];")
    for s in sorted(explanation.shared_skills, key=lambda s: s.skill_id):
        lines.append(f"  {_dot_quote(explanation.job_a)} -- {_dot_quote(s.skill_id)}"
                     f" [label={_dot_quote(f'{s.weight_a:.2f}')}];")
        lines.append(f"  {_dot_quote(explanation.job_b)} -- {_dot_quote(s.skill_id)}"
                     f" [label={_dot_quote(f'{s.weight_b:.2f}')}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def render_json(explanation: Explanation) -> str:
    payload = {
        "job_a": explanation.job_a,
        "job_b": explanation.job_b,
        "title_a": explanation.title_a,
        "title_b": explanation.title_b,
        "predicted_str": f"{explanation.predicted_str:.6f}",
        "verdict": explanation.verdict,
        "shared_skills": [
            {"skill_id": s.skill_id, "label": s.label,
             "specificity": round(s.specificity, 6),
             "weight_a": round(s.weight_a, 6), "weight_b": round(s.weight_b, 6)}
            for s in explanation.shared_skills
        ],
        "category_paths": [list(p) for p in explanation.category_paths],
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def parse_explanation_json(text: str) -> Explanation:
    payload = json.loads(text)
    return Explanation(
        job_a=payload["job_a"], job_b=payload["job_b"],
        title_a=payload["title_a"], title_b=payload["title_b"],
        shared_skills=[SharedSkill(skill_id=s["skill_id"], label=s["label"],
                                   specificity=s["specificity"],
                                   weight_a=s["weight_a"], weight_b=s["weight_b"])
                       for s in payload["shared_skills"]],
        verdict=payload["verdict"],
        predicted_str=float(payload["predicted_str"]),
        category_paths=[tuple(p) for p in payload.get("category_paths", [])],
    )


def render_table(explanation: Explanation) -> str:
    lines = [
        f"{explanation.title_a}  <->  {explanation.title_b}",
        f"predicted STR: {explanation.predicted_str:.4f}   verdict: {explanation.verdict}",
    ]
    if explanation.shared_skills:
        lines.append(f"{'skill':40s} {'spec':>6s} {'w_a':>6s} {'w_b':>6s}")
        for s in explanation.shared_skills:
            lines.append(f"{s.label[:40]:40s} {s.specificity:6.2f} {s.weight_a:6.2f} {s.weight_b:6.2f}")
    else:
        lines.append("no shared skills")
    return "\n".join(lines) + "\n"


def save_text(text: str, path: str | Path) -> None:
    Path(path).write_text(text, encoding="utf-8")
