import json
from pathlib import Path

import pytest

from jobstr.cli import EXIT_DATA, EXIT_OK, EXIT_USAGE, main
from jobstr.config import PipelineConfig, load_config, save_config


@pytest.fixture(scope="module")
def fast_config(tmp_path_factory):
    """Small dims/epochs so CLI plumbing tests stay quick."""
    path = tmp_path_factory.mktemp("cfg") / "config.json"
    cfg = PipelineConfig(
        seed=42, quota_per_region=60,
        graph_hidden_dim=32, graph_output_dim=16, graph_base_dim=16,
        graph_epochs=5, align_hidden=64, align_epochs=8, embed_dimension=128,
    )
    save_config(cfg, path)
    return str(path)


def run(args, out_dir, config=None):
    argv = ["--out-dir", str(out_dir)]
    if config:
        argv += ["--config", config]
    return main(argv + args)


@pytest.fixture(scope="module")
def pipeline_dir(tmp_path_factory, fast_config):
    out = tmp_path_factory.mktemp("artifacts")
    code = run(["run-all", "--jobs", "60", "--skills", "60"], out, fast_config)
    assert code == EXIT_OK
    return out


def test_run_all_produces_artifacts(pipeline_dir):
    for name in ("source_jobs.csv", "summaries.csv", "job_embeddings.csv",
                 "train_job_title_pairs.csv", "eval_job_title_pairs.csv",
                 "kg_pruned.json", "specificity.json", "graph_embeddings.csv",
                 "alignment.json", "eval_report.json", "rmse_by_region.csv",
                 "ttests.csv", "heatmap.csv", "manifest.jsonl"):
        assert (pipeline_dir / name).exists(), name


def test_manifest_has_hashes(pipeline_dir):
    lines = (pipeline_dir / "manifest.jsonl").read_text().splitlines()
    stages = [json.loads(l)["stage"] for l in lines]
    assert stages[0] == "gen-corpus"
    assert "kg build" in stages and "eval" in stages
    for l in lines:
        entry = json.loads(l)
        assert all(len(h) == 64 for h in entry["outputs"].values())


def test_run_all_deterministic(tmp_path_factory, fast_config, pipeline_dir):
    out2 = tmp_path_factory.mktemp("artifacts2")
    assert run(["run-all", "--jobs", "60", "--skills", "60"], out2, fast_config) == EXIT_OK
    names = sorted(p.name for p in pipeline_dir.iterdir())
    assert names == sorted(p.name for p in out2.iterdir())
    for name in names:
        assert (pipeline_dir / name).read_bytes() == (out2 / name).read_bytes(), name


def test_predict_outputs_score(pipeline_dir, fast_config, capsys):
    code = run(["predict", "--title-a", "Chief Executive Officer",
                "--title-b", "Managing Director"], pipeline_dir, fast_config)
    assert code == EXIT_OK
    out = capsys.readouterr().out.strip()
    assert 0.0 <= float(out) <= 1.0


def test_eval_without_model_names_stage(tmp_path, fast_config, capsys):
    code = run(["eval"], tmp_path, fast_config)
    assert code == EXIT_DATA
    assert "align train" in capsys.readouterr().err


def test_summarize_without_corpus_names_stage(tmp_path, fast_config, capsys):
    code = run(["summarize"], tmp_path, fast_config)
    assert code == EXIT_DATA
    assert "gen-corpus" in capsys.readouterr().err


def test_explain_cli(pipeline_dir, fast_config, tmp_path, capsys):
    dot_path = tmp_path / "ex.dot"
    json_path = tmp_path / "ex.json"
    code = run(["explain", "--job-a", "j000", "--job-b", "j020",
                "--dot", str(dot_path), "--json", str(json_path)],
               pipeline_dir, fast_config)
    assert code == EXIT_OK
    assert "verdict" in capsys.readouterr().out
    assert dot_path.exists() and json_path.exists()
    from dot_checker import parse_dot
    parse_dot(dot_path.read_text())


def test_init_config_roundtrip(tmp_path):
    assert run(["init-config"], tmp_path) == EXIT_OK
    cfg = load_config(tmp_path / "config.json")
    assert cfg.skills_per_job == 10
    assert cfg.job_skill_threshold == 0.5
    assert cfg.skill_skill_threshold == 0.25
    assert cfg.share_threshold == 0.20
    assert cfg.graph_epochs == 15


def test_invalid_config_lists_fields(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    cfg = PipelineConfig(job_skill_threshold=3.0, graph_epochs=0)
    save_config(cfg, bad)
    code = run(["summarize"], tmp_path, str(bad))
    assert code == EXIT_USAGE
    err = capsys.readouterr().err
    assert "job_skill_threshold" in err and "graph_epochs" in err


def test_unknown_config_field_rejected(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"no_such_field": 1}')
    assert run(["summarize"], tmp_path, str(bad)) == EXIT_USAGE
    assert "no_such_field" in capsys.readouterr().err
