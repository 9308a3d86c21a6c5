#!/usr/bin/env python
"""Render explanation subgraphs for a few representative job pairs out of an
existing artifact directory (run scripts/run_experiment.py first).

Writes one DOT file and one JSON file per pair into <out-dir>/explanations/.

Usage:
    python scripts/explain_examples.py --out-dir artifacts [--n 5]
"""

from __future__ import annotations

import argparse
import random
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from jobstr import explain, kg


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="artifacts")
    parser.add_argument("--n", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    out_dir = Path(args.out_dir)
    graph = kg.load_graph(out_dir / "kg_pruned.json")
    specificity = kg.load_specificity(out_dir / "specificity.json")
    jobs = sorted(n.id for n in graph.nodes.values() if n.kind == kg.JOB)
    if len(jobs) < 2:
        print("error: graph has fewer than two jobs", file=sys.stderr)
        return 1

    dest = out_dir / "explanations"
    dest.mkdir(exist_ok=True)
    rng = random.Random(args.seed)
    for i in range(args.n):
        # retry a few times so most showcased pairs actually share skills
        result = None
        for _attempt in range(25):
            a, b = rng.sample(jobs, 2)
            result = explain.explain_match(graph, specificity, a, b,
                                           predicted_str=0.0, hops=2)
            if result.shared_skills:
                break
        stem = dest / f"pair_{i:02d}"
        explain.save_text(explain.render_dot(result), stem.with_suffix(".dot"))
        explain.save_text(explain.render_json(result), stem.with_suffix(".json"))
        print(f"{stem.name}: {result.title_a!r} vs {result.title_b!r} "
              f"-> {result.verdict} ({len(result.shared_skills)} shared skills)")
    print(f"wrote {args.n} explanation pairs to {dest}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
