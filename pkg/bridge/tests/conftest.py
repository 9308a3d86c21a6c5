"""Shared fixtures: a tiny locally-built sentence-encoder checkpoint and
small CSV corpora in the pipeline's interchange formats.

The checkpoint is constructed from scratch (1-layer transformer, character
WordPiece vocabulary, dense head to 768) so the real encode/fine-tune code
paths run without any model downloads.
"""

from __future__ import annotations

import os
import sys
from pathlib import Path

# fully offline: never let the hub client attempt a network round trip
os.environ.setdefault("HF_HUB_OFFLINE", "1")
os.environ.setdefault("TRANSFORMERS_OFFLINE", "1")
os.environ.setdefault("TOKENIZERS_PARALLELISM", "false")

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

import pytest  # noqa: E402

TITLES = {
    "j00": "Junior Data Scientist",
    "j01": "Senior Data Scientist",
    "j02": "Lead Data Engineer",
    "j03": "Junior Backend Developer",
    "j04": "Senior Backend Developer",
    "j05": "Lead Frontend Developer",
    "j06": "Junior Accountant",
    "j07": "Senior Accountant",
    "j08": "Lead Financial Analyst",
}
GROUPS = {"j00": 0, "j01": 0, "j02": 0,
          "j03": 1, "j04": 1, "j05": 1,
          "j06": 2, "j07": 2, "j08": 2}


@pytest.fixture(scope="session")
def tiny_checkpoint(tmp_path_factory) -> str:
    import torch
    from sentence_transformers import SentenceTransformer, models
    from tokenizers import Tokenizer
    from tokenizers import models as tok_models
    from tokenizers import normalizers, pre_tokenizers, processors
    from transformers import BertConfig, BertModel, PreTrainedTokenizerFast

    torch.manual_seed(0)
    root = tmp_path_factory.mktemp("checkpoint")
    hf_dir = root / "hf"
    hf_dir.mkdir()

    chars = list("abcdefghijklmnopqrstuvwxyz0123456789.,-/&()")
    vocab_list = ["[PAD]", "[UNK]", "[CLS]", "[SEP]", "[MASK]"]
    vocab_list += chars + [f"##{c}" for c in chars]
    vocab = {token: i for i, token in enumerate(vocab_list)}

    # character-level WordPiece: any word tokenizes to char pieces
    tok = Tokenizer(tok_models.WordPiece(vocab, unk_token="[UNK]"))
    tok.normalizer = normalizers.Lowercase()
    tok.pre_tokenizer = pre_tokenizers.Whitespace()
    tok.post_processor = processors.TemplateProcessing(
        single="[CLS] $A [SEP]",
        pair="[CLS] $A [SEP] $B:1 [SEP]:1",
        special_tokens=[("[CLS]", vocab["[CLS]"]), ("[SEP]", vocab["[SEP]"])])
    PreTrainedTokenizerFast(tokenizer_object=tok, unk_token="[UNK]",
                            pad_token="[PAD]", cls_token="[CLS]",
                            sep_token="[SEP]", mask_token="[MASK]",
                            model_max_length=128).save_pretrained(hf_dir)

    config = BertConfig(vocab_size=len(vocab_list), hidden_size=32,
                        num_hidden_layers=1, num_attention_heads=2,
                        intermediate_size=64, max_position_embeddings=128)
    BertModel(config).save_pretrained(hf_dir)

    from jobbridge.models import embedding_dimension

    word = models.Transformer(str(hf_dir), max_seq_length=64)
    word_dim = embedding_dimension(word)
    pooling = models.Pooling(word_dim, pooling_mode="mean")
    dense = models.Dense(word_dim, 768, activation_function=torch.nn.Tanh())
    encoder = SentenceTransformer(modules=[word, pooling, dense])
    st_dir = root / "st"
    encoder.save(str(st_dir))
    return str(st_dir)


@pytest.fixture()
def jobs_csv(tmp_path) -> Path:
    path = tmp_path / "jobs.csv"
    lines = ["id,title,description,summary"]
    for jid, title in TITLES.items():
        desc = "" if jid == "j08" else f"Role focused on {title.lower()} work."
        lines.append(f"{jid},{title},{desc},")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture()
def pairs_csv(tmp_path) -> Path:
    path = tmp_path / "train_job_title_pairs.csv"
    ids = sorted(TITLES)
    lines = ["anchor,sample,score"]
    for i, a in enumerate(ids):
        for b in ids[i + 1:]:
            score = 0.9 if GROUPS[a] == GROUPS[b] else 0.2
            lines.append(f"{TITLES[a]},{TITLES[b]},{score}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
