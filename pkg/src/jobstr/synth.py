"""Synthetic job/skill corpus generator for offline experiments.

Ten professional domains, each split into two sister families (for example
data science vs data engineering). Every job posting carries a layered skill
profile: two domain-core skills shared across the whole domain, one
family-core skill shared by everyone in the family, and a seniority-dependent
window of specialist skills. A handful of deliberately generic skills appear
across all roles so graph pruning has something to remove. The result is a
corpus whose description overlap — and therefore whose mined relatedness
scores — decays smoothly from same-family through sister-family to unrelated
pairs, and whose title text is genuinely predictive of that structure.
"""

from __future__ import annotations

import random

from .corpus import Corpus, HierarchyEdge, JobRecord, SkillRecord

# (domain word, (topic, role) for each sister family, 12 skill phrases laid
# out as: 2 domain-core, family-core A, family-core B, 4 specialist phrases
# for A, 4 specialist phrases for B)
DOMAINS = [
    ("data", ("data science", "Data Scientist"), ("data engineering", "Data Engineer"),
     ["analytics platform stewardship", "data quality monitoring",
      "statistical modelling", "data warehouse design",
      "machine learning pipelines", "experiment design", "predictive analytics", "feature engineering",
      "batch pipeline orchestration", "streaming ingestion systems", "schema migration tooling",
      "query optimization"]),
    ("software", ("software backend", "Backend Developer"), ("software frontend", "Frontend Developer"),
     ["interface contract testing", "service error budgeting",
      "distributed service design", "responsive interface layout",
      "api contract development", "database transaction tuning", "message queue integration",
      "backend performance profiling", "component state management", "browser performance auditing",
      "accessibility compliance testing", "design system implementation"]),
    ("platform", ("platform reliability", "Site Reliability Engineer"), ("platform security", "Security Analyst"),
     ["infrastructure as code", "patch rollout coordination",
      "deployment automation scripting", "access control hardening",
      "container cluster operations", "incident response runbooks", "observability dashboard tuning",
      "capacity headroom planning", "vulnerability assessment scanning", "intrusion detection triage",
      "security policy auditing", "penetration test reporting"]),
    ("product", ("product management", "Product Manager"), ("product design", "UX Designer"),
     ["user feedback synthesis", "prototype review facilitation",
      "product roadmap planning", "user journey mapping",
      "user story prioritization", "market opportunity sizing", "feature launch coordination",
      "stakeholder requirement gathering", "wireframe prototyping", "usability study moderation",
      "visual identity systems", "interaction pattern research"]),
    ("revenue", ("revenue marketing", "Marketing Specialist"), ("revenue sales", "Account Executive"),
     ["audience segmentation analysis", "competitive landscape briefing",
      "campaign performance tracking", "sales pipeline forecasting",
      "brand positioning strategy", "content calendar planning", "influencer outreach coordination",
      "marketing attribution modelling", "lead qualification scoring", "pricing proposal drafting",
      "contract negotiation cycles", "territory account planning"]),
    ("corporate", ("corporate finance", "Financial Analyst"), ("corporate accounting", "Accountant"),
     ["budget variance analysis", "intercompany reconciliation",
      "cash flow forecasting", "general ledger reconciliation",
      "capital expenditure review", "financial statement consolidation", "scenario planning models",
      "treasury liquidity reporting", "accounts payable processing", "tax filing preparation",
      "fixed asset depreciation", "month end closing procedures"]),
    ("people", ("people recruiting", "HR Generalist"), ("people development", "Training Coordinator"),
     ["workplace policy drafting", "performance review facilitation",
      "recruitment funnel management", "curriculum module design",
      "employee onboarding programs", "compensation benchmark studies", "candidate pipeline sourcing",
      "employer brand outreach", "skills gap assessment", "learning outcome assessment",
      "workshop facilitation planning", "certification program administration"]),
    ("service", ("service support", "Support Engineer"), ("service operations", "Operations Manager"),
     ["service level monitoring", "workflow handoff mapping",
      "ticket escalation handling", "vendor contract management",
      "knowledge base curation", "customer issue diagnosis", "help desk shift coordination",
      "escalation playbook upkeep", "process bottleneck analysis", "capacity utilization planning",
      "logistics route scheduling", "facilities readiness review"]),
    ("clinical", ("clinical care", "Clinical Coordinator"), ("clinical research", "Research Associate"),
     ["health outcome reporting", "medical record auditing",
      "patient intake scheduling", "study participant screening",
      "clinical protocol adherence", "care plan coordination", "discharge planning support",
      "immunization record tracking", "trial documentation control", "literature survey synthesis",
      "experimental data collection", "grant proposal drafting"]),
    ("quality", ("quality engineering", "Quality Engineer"), ("quality compliance", "Legal Counsel"),
     ["audit trail verification", "nonconformance tracking",
      "defect root cause analysis", "regulatory compliance review",
      "test coverage expansion", "release readiness certification", "regression suite maintenance",
      "quality metric dashboards", "commercial contract drafting", "intellectual property filings",
      "litigation risk assessment", "privacy impact analysis"]),
]

GENERIC_SKILLS = [
    "effective team communication",
    "general office administration",
    "basic time management",
]

SENIORITY = ["Junior", "Senior", "Lead", "Principal", "Associate", "Staff",
             "Head of", "Chief", "Deputy", "Interim"]

N_WINDOW = 4  # specialist phrases per family


def generate_corpus(n_jobs: int = 200, n_skills: int = 120, seed: int = 42) -> Corpus:
    """Deterministic synthetic corpus; n_skills counts granular skills,
    family categories and the generic skills are added on top.

    Each job advertises two domain-core skills, one family-core skill, and a
    two-skill specialist window selected by seniority — mirroring real
    postings, where day-to-day responsibilities shift along the career
    ladder while the core of the profession stays put.
    """
    rng = random.Random(seed)

    skills: list[SkillRecord] = []
    hierarchy: list[HierarchyEdge] = []
    per_domain = max(6, min(12, n_skills // len(DOMAINS)))
    sid = 0
    domain_ids: list[list[str]] = []
    for di, (domain, _fam_a, _fam_b, phrases) in enumerate(DOMAINS):
        ids = []
        for k in range(per_domain):
            name = phrases[k % len(phrases)]
            skill_id = f"s{sid:03d}"
            sid += 1
            skills.append(SkillRecord(id=skill_id, name=name,
                                      description=f"{name} for {domain} work"))
            ids.append(skill_id)
        domain_ids.append(ids)
        for side, (topic, _role) in enumerate((_fam_a, _fam_b)):
            cat_id = f"cat{2 * di + side:02d}"
            skills.append(SkillRecord(id=cat_id, name=f"{topic} functions",
                                      description=f"broad {topic} responsibilities",
                                      is_category=True))
        # domain cores hang one under each sister category; everything else
        # under its own family's category
        for k, skill_id in enumerate(ids):
            if k < 2:
                parent = f"cat{2 * di + (k % 2):02d}"
            elif k in (2, 3):
                parent = f"cat{2 * di + (k - 2):02d}"
            else:
                side = 0 if k < 4 + N_WINDOW else 1
                parent = f"cat{2 * di + side:02d}"
            hierarchy.append(HierarchyEdge(child_skill_id=skill_id, parent_skill_id=parent))
    for gi, name in enumerate(GENERIC_SKILLS):
        skills.append(SkillRecord(id=f"g{gi:02d}", name=name,
                                  description=f"{name} across all roles"))

    families = [fam for _, fam_a, fam_b, _ in DOMAINS for fam in (fam_a, fam_b)]
    jobs: list[JobRecord] = []
    skill_by_id = {s.id: s for s in skills}
    # shrink the specialist windows when the skill budget is tight
    n_window = max(1, min(N_WINDOW, (per_domain - 4) // 2))
    rotation = rng.randrange(n_window)
    for ji in range(n_jobs):
        fi = ji % len(families)
        di, side = fi // 2, fi % 2
        topic, role = families[fi]
        si = (ji // len(families)) % len(SENIORITY)
        ids = domain_ids[di]
        cores = [ids[0], ids[1], ids[2 + side]]
        pool = ids[4 + n_window * side:4 + n_window * (side + 1)]
        w = (si + rotation) % n_window
        windows = [pool[w]]
        if pool[(w + 1) % n_window] != pool[w]:
            windows.append(pool[(w + 1) % n_window])
        own = cores + windows
        generic = GENERIC_SKILLS[si % len(GENERIC_SKILLS)]
        # postings often advertise the current focus area in the title itself
        title = f"{SENIORITY[si]} {role}, {skill_by_id[pool[w]].name.title()}"
        # lead with the profile that defines the role — downstream extractive
        # summaries keep the opening sentences
        name = lambda s: skill_by_id[s].name
        sentences = [
            f"Role focused on {topic} work including {name(cores[0])}.",
            f"{name(cores[2])}.",
            f"{name(windows[0])}.",
            f"{name(cores[1])}.",
        ] + [f"{name(s)}." for s in windows[1:]] + [f"{generic}."]
        jobs.append(JobRecord(id=f"j{ji:03d}", title=title,
                              description=" ".join(sentences)))
    return Corpus(jobs=jobs, skills=skills, hierarchy=hierarchy)
