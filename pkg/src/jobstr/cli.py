"""Command-line pipeline driver: one subcommand per pipeline stage."""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

import numpy as np

from . import align as align_mod
from . import corpus as corpus_mod
from . import embed as embed_mod
from . import evalstats, explain, graphembed, kg as kg_mod, pairs as pairs_mod, synth
from .config import PipelineConfig, load_config, save_config

EXIT_OK, EXIT_USAGE, EXIT_DATA = 0, 1, 2

# artifact -> stage that produces it, for actionable missing-input errors
PRODUCED_BY = {
    "source_jobs.csv": "gen-corpus",
    "source_skills.csv": "gen-corpus",
    "source_skill_hierarchy.csv": "gen-corpus",
    "summaries.csv": "summarize",
    "job_embeddings.csv": "embed",
    "skill_embeddings.csv": "embed",
    "all_pairs.csv": "pairs",
    "train_job_title_pairs.csv": "split",
    "eval_job_title_pairs.csv": "split",
    "kg_pruned.json": "kg build",
    "specificity.json": "kg build",
    "graph_embeddings.csv": "kg embed",
    "alignment.json": "align train",
}


class StageError(Exception):
    pass


def _sha256(path: Path) -> str:
    return hashlib.sha256(path.read_bytes()).hexdigest()


def _require(out_dir: Path, name: str) -> Path:
    path = out_dir / name
    if not path.exists():
        producer = PRODUCED_BY.get(name, "an earlier stage")
        raise StageError(f"missing artifact {path}; run `{producer}` first")
    return path


def _manifest(out_dir: Path, stage: str, seed: int, inputs: list[Path], outputs: list[Path]) -> None:
    line = {
        "stage": stage,
        "seed": seed,
        "inputs": {p.name: _sha256(p) for p in sorted(inputs)},
        "outputs": {p.name: _sha256(p) for p in sorted(outputs)},
    }
    with (out_dir / "manifest.jsonl").open("a", encoding="utf-8") as fh:
        fh.write(json.dumps(line, sort_keys=True) + "\n")


def _embedder_config(cfg: PipelineConfig) -> embed_mod.ReferenceEmbedderConfig:
    return embed_mod.ReferenceEmbedderConfig(
        dimension=cfg.embed_dimension, ngram_size=cfg.ngram_size, seed=cfg.seed)


def _partition(cfg: PipelineConfig) -> pairs_mod.RegionPartition:
    return pairs_mod.RegionPartition(low_upper=cfg.low_upper, medium_upper=cfg.medium_upper)


# ---------------------------------------------------------------- stages

def stage_gen_corpus(cfg: PipelineConfig, out_dir: Path, n_jobs: int, n_skills: int) -> None:
    corpus = synth.generate_corpus(n_jobs=n_jobs, n_skills=n_skills, seed=cfg.seed)
    jobs_p, skills_p, hier_p = (out_dir / cfg.jobs_csv, out_dir / cfg.skills_csv,
                                out_dir / cfg.hierarchy_csv)
    corpus_mod.save_jobs(corpus.jobs, jobs_p)
    corpus_mod.save_skills(corpus.skills, skills_p)
    corpus_mod.save_hierarchy(corpus.hierarchy, hier_p)
    _manifest(out_dir, "gen-corpus", cfg.seed, [], [jobs_p, skills_p, hier_p])


def stage_summarize(cfg: PipelineConfig, out_dir: Path) -> None:
    jobs_p = _require(out_dir, cfg.jobs_csv)
    jobs = corpus_mod.load_jobs(jobs_p)
    summarized = [
        corpus_mod.JobRecord(id=j.id, title=j.title, description=j.description,
                             summary=corpus_mod.summarize(j, cfg.max_sentences))
        for j in jobs
    ]
    out = out_dir / "summaries.csv"
    corpus_mod.save_jobs(summarized, out)
    _manifest(out_dir, "summarize", cfg.seed, [jobs_p], [out])


def stage_embed(cfg: PipelineConfig, out_dir: Path) -> None:
    summaries_p = _require(out_dir, "summaries.csv")
    skills_p = _require(out_dir, cfg.skills_csv)
    jobs = corpus_mod.load_jobs(summaries_p)
    skills = corpus_mod.load_skills(skills_p)
    econf = _embedder_config(cfg)
    job_store = embed_mod.embed_texts(
        {j.id: (j.summary or j.title) for j in jobs}, econf)
    skill_store = embed_mod.embed_texts(
        {s.id: (f"{s.name}. {s.description}" if s.description else s.name) for s in skills}, econf)
    job_out, skill_out = out_dir / "job_embeddings.csv", out_dir / "skill_embeddings.csv"
    embed_mod.save_store(job_store, job_out)
    embed_mod.save_store(skill_store, skill_out)
    _manifest(out_dir, "embed", cfg.seed, [summaries_p, skills_p], [job_out, skill_out])


def stage_pairs(cfg: PipelineConfig, out_dir: Path) -> None:
    job_emb_p = _require(out_dir, "job_embeddings.csv")
    jobs_p = _require(out_dir, cfg.jobs_csv)
    store = embed_mod.load_store(job_emb_p)
    jobs = corpus_mod.load_jobs(jobs_p)
    titles = {j.id: j.title for j in jobs}
    sampling = pairs_mod.SamplingConfig(per_anchor_cap=cfg.per_anchor_cap, seed=cfg.seed)
    all_pairs = pairs_mod.build_pairs(store, [j.id for j in jobs], sampling)
    out = out_dir / "all_pairs.csv"
    pairs_mod.write_pairs(pairs_mod.PairDataset(pairs=all_pairs, role="all"), titles, out)
    _manifest(out_dir, "pairs", cfg.seed, [job_emb_p, jobs_p], [out])


def stage_split(cfg: PipelineConfig, out_dir: Path) -> None:
    pairs_p = _require(out_dir, "all_pairs.csv")
    jobs_p = _require(out_dir, cfg.jobs_csv)
    dataset, _ = pairs_mod.read_pairs(pairs_p, role="all")
    jobs = corpus_mod.load_jobs(jobs_p)
    titles = {j.id: j.title for j in jobs}
    train_ids, eval_ids = pairs_mod.split_disjoint(titles, cfg.eval_fraction, cfg.seed)
    partition = _partition(cfg)
    train_raw = pairs_mod.filter_to_side(dataset.pairs, train_ids, "train")
    eval_raw = pairs_mod.filter_to_side(dataset.pairs, eval_ids, "eval")
    train_ds, train_counts = pairs_mod.stratify(
        train_raw.pairs, partition, cfg.quota_per_region, cfg.seed, role="train")
    eval_ds, eval_counts = pairs_mod.stratify(
        eval_raw.pairs, partition, cfg.quota_per_region, cfg.seed + 1, role="eval")
    train_p = out_dir / "train_job_title_pairs.csv"
    eval_p = out_dir / "eval_job_title_pairs.csv"
    pairs_mod.write_pairs(train_ds, titles, train_p)
    pairs_mod.write_pairs(eval_ds, titles, eval_p)
    split_p = out_dir / "split_ids.json"
    split_p.write_text(json.dumps({"train": sorted(train_ids), "eval": sorted(eval_ids),
                                   "train_counts": train_counts, "eval_counts": eval_counts},
                                  indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(f"train pairs per region: {train_counts}")
    print(f"eval pairs per region:  {eval_counts}")
    _manifest(out_dir, "split", cfg.seed, [pairs_p, jobs_p], [train_p, eval_p, split_p])


def stage_kg_build(cfg: PipelineConfig, out_dir: Path) -> None:
    job_emb_p = _require(out_dir, "job_embeddings.csv")
    skill_emb_p = _require(out_dir, "skill_embeddings.csv")
    jobs_p, skills_p = _require(out_dir, cfg.jobs_csv), _require(out_dir, cfg.skills_csv)
    hier_p = _require(out_dir, cfg.hierarchy_csv)
    job_store = embed_mod.load_store(job_emb_p)
    skill_store = embed_mod.load_store(skill_emb_p)
    jobs = corpus_mod.load_jobs(jobs_p)
    skills = corpus_mod.load_skills(skills_p)
    hierarchy = corpus_mod.load_hierarchy(hier_p, skills)
    matches = {
        j.id: kg_mod.match_job_skills(job_store[j.id], skill_store,
                                      k=cfg.skills_per_job, threshold=cfg.job_skill_threshold)
        for j in jobs
    }
    graph = kg_mod.build_graph(jobs, skills, matches, hierarchy, skill_store,
                               skill_skill_threshold=cfg.skill_skill_threshold)
    pruned = kg_mod.prune_generic(graph, share_threshold=cfg.share_threshold)
    specificity = kg_mod.compute_specificity(pruned)
    raw_p, pruned_p, spec_p = out_dir / "kg_raw.json", out_dir / "kg_pruned.json", out_dir / "specificity.json"
    kg_mod.save_graph(graph, raw_p)
    kg_mod.save_graph(pruned, pruned_p)
    kg_mod.save_specificity(specificity, spec_p)
    print(f"graph: {len(pruned.nodes)} nodes, {len(pruned.edges)} edges "
          f"({len(graph.skill_ids()) - len(pruned.skill_ids())} skills pruned)")
    _manifest(out_dir, "kg build", cfg.seed,
              [job_emb_p, skill_emb_p, jobs_p, skills_p, hier_p], [raw_p, pruned_p, spec_p])


def stage_kg_embed(cfg: PipelineConfig, out_dir: Path) -> None:
    pruned_p = _require(out_dir, "kg_pruned.json")
    graph = kg_mod.load_graph(pruned_p)
    gconf = graphembed.GraphTrainConfig(
        epochs=cfg.graph_epochs, learning_rate=cfg.graph_learning_rate,
        negatives_per_positive=cfg.negatives_per_positive, seed=cfg.seed,
        hidden_dim=cfg.graph_hidden_dim, output_dim=cfg.graph_output_dim,
        base_dim=cfg.graph_base_dim)
    _model, table, history = graphembed.train_graph(graph, gconf)
    out = out_dir / "graph_embeddings.csv"
    embed_mod.save_store(table, out)
    print(f"graph training loss: {history['loss'][0]:.4f} -> {history['final_loss']:.4f}")
    _manifest(out_dir, "kg embed", cfg.seed, [pruned_p], [out])


def stage_align_train(cfg: PipelineConfig, out_dir: Path) -> None:
    graph_emb_p = _require(out_dir, "graph_embeddings.csv")
    jobs_p = _require(out_dir, cfg.jobs_csv)
    split_p = _require(out_dir, "split_ids.json")
    table = embed_mod.load_store(graph_emb_p)
    jobs = corpus_mod.load_jobs(jobs_p)
    train_ids = set(json.loads(split_p.read_text(encoding="utf-8"))["train"])
    econf = _embedder_config(cfg)
    inputs, targets = [], []
    for j in jobs:
        node = kg_mod.job_node(j.id)
        if j.id in train_ids and node in table:
            inputs.append(embed_mod.reference_embed(j.title, econf))
            targets.append(table[node])
    if not inputs:
        raise StageError("no (text, graph) training pairs; check the split and graph")
    aconf = align_mod.AlignTrainConfig(
        epochs=cfg.align_epochs, learning_rate=cfg.align_learning_rate,
        batch_size=cfg.align_batch_size, seed=cfg.seed, patience=cfg.align_patience)
    model, history = align_mod.train_alignment(
        np.array(inputs), np.array(targets), aconf, hidden=cfg.align_hidden)
    out = out_dir / "alignment.json"
    align_mod.save_alignment(model, out, seed=cfg.seed)
    print(f"alignment val MSE: {history['val_loss'][0]:.6f} -> {history['best_val']:.6f}")
    _manifest(out_dir, "align train", cfg.seed, [graph_emb_p, jobs_p, split_p], [out])


def stage_predict(cfg: PipelineConfig, out_dir: Path, title_a: str, title_b: str) -> None:
    model_p = _require(out_dir, "alignment.json")
    model = align_mod.load_alignment(model_p)
    econf = _embedder_config(cfg)
    score = align_mod.predict_str(title_a, title_b,
                                  lambda t: embed_mod.reference_embed(t, econf), model)
    print(f"{score:.6f}")


def stage_eval(cfg: PipelineConfig, out_dir: Path) -> None:
    model_p = _require(out_dir, "alignment.json")
    eval_p = _require(out_dir, "eval_job_title_pairs.csv")
    model = align_mod.load_alignment(model_p)
    dataset, titles = pairs_mod.read_pairs(eval_p, role="eval")
    econf = _embedder_config(cfg)
    embedder = lambda t: embed_mod.reference_embed(t, econf)
    predictions = [
        evalstats.Prediction(
            pair=p,
            predicted=align_mod.predict_str(titles[p.anchor_id], titles[p.sample_id],
                                            embedder, model),
            actual=p.score)
        for p in dataset.pairs
    ]
    partition = _partition(cfg)
    report = evalstats.build_report(predictions, partition, model=cfg.model_name)
    evalstats.export_report(report, out_dir)
    evalstats.export_boxplot_data(report, out_dir)
    evalstats.export_heatmap_data([report], out_dir)
    outs = [out_dir / "eval_report.json", out_dir / "rmse_by_region.csv",
            out_dir / "ttests.csv", out_dir / f"boxplot_{cfg.model_name}.csv",
            out_dir / "heatmap.csv"]
    print(f"global RMSE: {report.global_rmse:.4f}")
    for r in pairs_mod.REGIONS:
        entry = report.regions[r]
        if "rmse" in entry:
            print(f"  {r:6s} RMSE: {entry['rmse']:.4f}  (n={entry['count']})")
        else:
            print(f"  {r:6s} RMSE: n/a     (n=0)")
    _manifest(out_dir, "eval", cfg.seed, [model_p, eval_p], outs)


def stage_explain(cfg: PipelineConfig, out_dir: Path, job_a: str, job_b: str,
                  hops: int, dot_out: str | None, json_out: str | None) -> None:
    pruned_p = _require(out_dir, "kg_pruned.json")
    spec_p = _require(out_dir, "specificity.json")
    graph = kg_mod.load_graph(pruned_p)
    specificity = kg_mod.load_specificity(spec_p)

    def resolve(ref: str) -> str:
        if ref in graph.nodes:
            return ref
        if kg_mod.job_node(ref) in graph.nodes:
            return kg_mod.job_node(ref)
        matches = [n.id for n in graph.nodes.values()
                   if n.kind == kg_mod.JOB and n.label.lower() == ref.lower()]
        if len(matches) == 1:
            return matches[0]
        raise StageError(f"cannot resolve job {ref!r} "
                         f"({'ambiguous' if matches else 'not found'})")

    node_a, node_b = resolve(job_a), resolve(job_b)
    predicted = 0.0
    model_p = out_dir / "alignment.json"
    if model_p.exists():
        model = align_mod.load_alignment(model_p)
        econf = _embedder_config(cfg)
        predicted = align_mod.predict_str(graph.nodes[node_a].label, graph.nodes[node_b].label,
                                          lambda t: embed_mod.reference_embed(t, econf), model)
    result = explain.explain_match(graph, specificity, node_a, node_b, predicted, hops=hops)
    print(explain.render_table(result), end="")
    if dot_out:
        explain.save_text(explain.render_dot(result), dot_out)
    if json_out:
        explain.save_text(explain.render_json(result), json_out)


RUN_ALL = ["summarize", "embed", "pairs", "split", "kg build", "kg embed",
           "align train", "eval"]


def run_stage(name: str, cfg: PipelineConfig, out_dir: Path, args) -> None:
    if name == "gen-corpus":
        stage_gen_corpus(cfg, out_dir, args.jobs, args.skills)
    elif name == "summarize":
        stage_summarize(cfg, out_dir)
    elif name == "embed":
        stage_embed(cfg, out_dir)
    elif name == "pairs":
        stage_pairs(cfg, out_dir)
    elif name == "split":
        stage_split(cfg, out_dir)
    elif name == "kg build":
        stage_kg_build(cfg, out_dir)
    elif name == "kg embed":
        stage_kg_embed(cfg, out_dir)
    elif name == "align train":
        stage_align_train(cfg, out_dir)
    elif name == "eval":
        stage_eval(cfg, out_dir)
    else:
        raise StageError(f"unknown stage {name!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="jobstr",
                                     description="Job-title STR pipeline over a skill knowledge graph")
    parser.add_argument("--config", help="JSON config file (see init-config)")
    parser.add_argument("--out-dir", default="artifacts", help="artifact directory")
    parser.add_argument("--seed", type=int, help="override the config seed")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("init-config", help="write a config file with all defaults")

    g = sub.add_parser("gen-corpus", help="generate the bundled synthetic corpus")
    g.add_argument("--jobs", type=int, default=200)
    g.add_argument("--skills", type=int, default=120)

    for name in ("summarize", "embed", "pairs", "split"):
        sub.add_parser(name)

    kg_p = sub.add_parser("kg")
    kg_sub = kg_p.add_subparsers(dest="kg_command", required=True)
    kg_sub.add_parser("build")
    kg_sub.add_parser("embed")

    align_p = sub.add_parser("align")
    align_sub = align_p.add_subparsers(dest="align_command", required=True)
    align_sub.add_parser("train")

    p = sub.add_parser("predict")
    p.add_argument("--title-a", required=True)
    p.add_argument("--title-b", required=True)

    sub.add_parser("eval")

    e = sub.add_parser("explain")
    e.add_argument("--job-a", required=True, help="job id, node id, or exact title")
    e.add_argument("--job-b", required=True)
    e.add_argument("--hops", type=int, default=1, choices=(1, 2))
    e.add_argument("--dot", help="write DOT output to this path")
    e.add_argument("--json", dest="json_out", help="write JSON output to this path")

    r = sub.add_parser("run-all", help="run every pipeline stage in order")
    r.add_argument("--jobs", type=int, default=200)
    r.add_argument("--skills", type=int, default=120)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.config:
        try:
            cfg = load_config(args.config)
        except (OSError, ValueError) as exc:
            print(f"error: bad config: {exc}", file=sys.stderr)
            return EXIT_USAGE
    else:
        cfg = PipelineConfig()
    if args.seed is not None:
        cfg.seed = args.seed
    problems = cfg.validate()
    if problems:
        print("error: invalid config:", file=sys.stderr)
        for p in problems:
            print(f"  - {p}", file=sys.stderr)
        return EXIT_USAGE

    command = args.command
    if command == "kg":
        command = f"kg {args.kg_command}"
    elif command == "align":
        command = f"align {args.align_command}"

    try:
        if command == "init-config":
            path = args.config or str(out_dir / "config.json")
            save_config(cfg, path)
            print(f"wrote {path}")
        elif command == "predict":
            stage_predict(cfg, out_dir, args.title_a, args.title_b)
        elif command == "explain":
            stage_explain(cfg, out_dir, args.job_a, args.job_b, args.hops,
                          args.dot, args.json_out)
        elif command == "run-all":
            # fresh manifest so two runs of run-all compare byte-for-byte
            manifest = out_dir / "manifest.jsonl"
            if manifest.exists():
                manifest.unlink()
            stage_gen_corpus(cfg, out_dir, args.jobs, args.skills)
            for stage in RUN_ALL:
                print(f"== {stage} ==")
                run_stage(stage, cfg, out_dir, args)
        else:
            run_stage(command, cfg, out_dir, args)
    except StageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except corpus_mod.DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
