"""Job-skill knowledge graph: matching, construction, pruning, specificity."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

from .corpus import DataError, HierarchyEdge, JobRecord, SkillRecord
from .embed import EmbeddingStore, str_score

HAS_SKILL = "HAS_SKILL"
SUBSKILL_OF = "SUBSKILL_OF"

JOB, SKILL = "Job", "Skill"


def job_node(job_id: str) -> str:
    return f"job:{job_id}"


def skill_node(skill_id: str) -> str:
    return f"skill:{skill_id}"


@dataclass(frozen=True)
class KGNode:
    id: str
    kind: str
    label: str


@dataclass(frozen=True)
class KGEdge:
    source: str
    target: str
    relation: str
    weight: float


@dataclass
class KnowledgeGraph:
    nodes: dict[str, KGNode] = field(default_factory=dict)
    edges: list[KGEdge] = field(default_factory=list)

    def add_node(self, node: KGNode) -> None:
        if node.id in self.nodes:
            raise ValueError(f"duplicate node {node.id!r}")
        self.nodes[node.id] = node

    def add_edge(self, edge: KGEdge) -> None:
        if edge.source not in self.nodes or edge.target not in self.nodes:
            raise ValueError(f"edge {edge.source!r}->{edge.target!r} references unknown node")
        src, tgt = self.nodes[edge.source], self.nodes[edge.target]
        if edge.relation == HAS_SKILL and (src.kind, tgt.kind) != (JOB, SKILL):
            raise ValueError(f"{HAS_SKILL} must connect Job->Skill, got {src.kind}->{tgt.kind}")
        if edge.relation == SUBSKILL_OF and (src.kind, tgt.kind) != (SKILL, SKILL):
            raise ValueError(f"{SUBSKILL_OF} must connect Skill->Skill, got {src.kind}->{tgt.kind}")
        self.edges.append(edge)

    def job_ids(self) -> list[str]:
        return [n.id for n in self.nodes.values() if n.kind == JOB]

    def skill_ids(self) -> list[str]:
        return [n.id for n in self.nodes.values() if n.kind == SKILL]

    def skills_of(self, job_node_id: str) -> dict[str, float]:
        """Skill node id -> HAS_SKILL weight for one job."""
        return {e.target: e.weight for e in self.edges
                if e.relation == HAS_SKILL and e.source == job_node_id}


def match_job_skills(job_emb, skill_store: EmbeddingStore, k: int = 10,
                     threshold: float = 0.5) -> list[tuple[str, float]]:
    """Skills scoring >= threshold against the job, best first, at most k."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0.0 <= threshold <= 1.0:
        raise ValueError("threshold must be in [0, 1]")
    scored = []
    for sid, vec in skill_store.items():
        s = str_score(job_emb, vec)
        if s >= threshold:
            scored.append((sid, s))
    scored.sort(key=lambda t: (-t[1], t[0]))
    return scored[:k]


def build_graph(jobs: list[JobRecord], skills: list[SkillRecord],
                matches: dict[str, list[tuple[str, float]]],
                hierarchy: list[HierarchyEdge], skill_store: EmbeddingStore,
                skill_skill_threshold: float = 0.25) -> KnowledgeGraph:
    """Bipartite HAS_SKILL edges from matches plus embedding-filtered hierarchy
    edges; skills with no incident edge are dropped."""
    skill_by_id = {s.id: s for s in skills}
    job_ids = {j.id for j in jobs}
    for jid in matches:
        if jid not in job_ids:
            raise DataError(f"match references unknown job {jid!r}")

    has_skill: list[tuple[str, str, float]] = []
    for job in jobs:
        for sid, score in matches.get(job.id, []):
            if sid not in skill_by_id:
                raise DataError(f"match for job {job.id!r} references unknown skill {sid!r}")
            has_skill.append((job.id, sid, score))

    subskill: list[tuple[str, str]] = []
    for edge in hierarchy:
        child, parent = edge.child_skill_id, edge.parent_skill_id
        if child not in skill_by_id or parent not in skill_by_id:
            raise DataError(f"hierarchy edge {child!r}->{parent!r} references unknown skill")
        if child in skill_store and parent in skill_store:
            if str_score(skill_store[child], skill_store[parent]) >= skill_skill_threshold:
                subskill.append((child, parent))

    used_skills = {sid for _, sid, _ in has_skill}
    used_skills.update(sid for pair in subskill for sid in pair)

    kg = KnowledgeGraph()
    for job in jobs:
        kg.add_node(KGNode(id=job_node(job.id), kind=JOB, label=job.title))
    for sid in sorted(used_skills):
        kg.add_node(KGNode(id=skill_node(sid), kind=SKILL, label=skill_by_id[sid].name))
    seen = set()
    for jid, sid, score in has_skill:
        key = (job_node(jid), skill_node(sid), HAS_SKILL)
        if key not in seen:
            seen.add(key)
            kg.add_edge(KGEdge(source=key[0], target=key[1], relation=HAS_SKILL, weight=score))
    for child, parent in subskill:
        key = (skill_node(child), skill_node(parent), SUBSKILL_OF)
        if key not in seen:
            seen.add(key)
            kg.add_edge(KGEdge(source=key[0], target=key[1], relation=SUBSKILL_OF, weight=1.0))
    return kg


def job_share(kg: KnowledgeGraph, skill_node_id: str) -> float:
    if skill_node_id not in kg.nodes or kg.nodes[skill_node_id].kind != SKILL:
        raise ValueError(f"unknown skill node {skill_node_id!r}")
    n_jobs = len(kg.job_ids())
    if n_jobs == 0:
        return 0.0
    linked = {e.source for e in kg.edges if e.relation == HAS_SKILL and e.target == skill_node_id}
    return len(linked) / n_jobs


def prune_generic(kg: KnowledgeGraph, share_threshold: float = 0.20) -> KnowledgeGraph:
    """Remove skills whose job share strictly exceeds the threshold, then any
    skill left without an incident edge. Jobs are never removed."""
    if not 0.0 < share_threshold <= 1.0:
        raise ValueError("share_threshold must be in (0, 1]")
    generic = {sid for sid in kg.skill_ids() if job_share(kg, sid) > share_threshold}
    kept_edges = [e for e in kg.edges if e.source not in generic and e.target not in generic]
    incident = {e.source for e in kept_edges} | {e.target for e in kept_edges}
    pruned = KnowledgeGraph()
    for node in kg.nodes.values():
        if node.kind == JOB:
            pruned.add_node(node)
        elif node.id not in generic and node.id in incident:
            pruned.add_node(node)
    for e in kept_edges:
        pruned.add_edge(e)
    return pruned


def compute_specificity(kg: KnowledgeGraph) -> dict[str, float]:
    """Min-max complement of HAS_SKILL degree; most generic retained skill -> 0.0."""
    skills = kg.skill_ids()
    if not skills:
        raise ValueError("graph has no skills")
    degree = {sid: 0 for sid in skills}
    for e in kg.edges:
        if e.relation == HAS_SKILL:
            degree[e.target] += 1
    lo, hi = min(degree.values()), max(degree.values())
    if hi == lo:
        return {sid: 1.0 for sid in skills}
    return {sid: 1.0 - (d - lo) / (hi - lo) for sid, d in degree.items()}


def save_graph(kg: KnowledgeGraph, path: str | Path) -> None:
    payload = {
        "nodes": [{"id": n.id, "kind": n.kind, "label": n.label}
                  for n in sorted(kg.nodes.values(), key=lambda n: n.id)],
        "edges": [{"source": e.source, "target": e.target, "relation": e.relation,
                   "weight": e.weight}
                  for e in sorted(kg.edges, key=lambda e: (e.source, e.target, e.relation))],
    }
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_graph(path: str | Path) -> KnowledgeGraph:
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    payload = json.loads(path.read_text(encoding="utf-8"))
    kg = KnowledgeGraph()
    for n in payload["nodes"]:
        kg.add_node(KGNode(id=n["id"], kind=n["kind"], label=n["label"]))
    for e in payload["edges"]:
        kg.add_edge(KGEdge(source=e["source"], target=e["target"],
                           relation=e["relation"], weight=e["weight"]))
    return kg


def save_specificity(table: dict[str, float], path: str | Path) -> None:
    payload = {sid: round(v, 12) for sid, v in sorted(table.items())}
    Path(path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_specificity(path: str | Path) -> dict[str, float]:
    return json.loads(Path(path).read_text(encoding="utf-8"))
