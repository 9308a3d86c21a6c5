"""Fine-tune a sentence encoder on mined anchor/sample/score pairs.

Objective: mean squared error between the encoder cosine of the two titles
and the mined relatedness score (the standard cosine-similarity loss for
score-supervised sentence-encoder training). Runs a fixed number of epochs
— 5 by default — and writes a checkpoint directory the encoder loader can
consume as the ``-F`` model variant, plus a ``training_log.json`` with the
per-epoch loss curve.
"""

from __future__ import annotations

import json
import random
from pathlib import Path

import torch

from .models import ModelSpec, load_encoder
from .textio import PairRow, read_pairs

DEFAULT_EPOCHS = 5


def _forward(encoder, texts: list[str]) -> torch.Tensor:
    features = encoder.tokenize(texts)
    features = {k: v.to(encoder.device) if torch.is_tensor(v) else v
                for k, v in features.items()}
    return encoder(features)["sentence_embedding"]


def _epoch(encoder, pairs: list[PairRow], optimizer, batch_size: int,
           order: list[int]) -> float:
    total = 0.0
    for start in range(0, len(order), batch_size):
        batch = [pairs[i] for i in order[start:start + batch_size]]
        emb_a = _forward(encoder, [p.anchor for p in batch])
        emb_b = _forward(encoder, [p.sample for p in batch])
        cos = torch.nn.functional.cosine_similarity(emb_a, emb_b)
        target = torch.tensor([p.score for p in batch], dtype=cos.dtype,
                              device=cos.device)
        loss = torch.nn.functional.mse_loss(cos, target)
        optimizer.zero_grad()
        loss.backward()
        optimizer.step()
        total += loss.item() * len(batch)
    return total / len(order)


def finetune(spec: ModelSpec, pairs_csv: str | Path, out_dir: str | Path,
             epochs: int = DEFAULT_EPOCHS, learning_rate: float = 2e-5,
             batch_size: int = 16, seed: int = 0) -> list[float]:
    """Returns the per-epoch training losses; the fine-tuned checkpoint and
    its training log land in `out_dir`."""
    if epochs < 1:
        raise ValueError("epochs must be >= 1")
    pairs = read_pairs(pairs_csv)
    encoder = load_encoder(spec)

    torch.manual_seed(seed)
    rng = random.Random(seed)
    optimizer = torch.optim.AdamW(encoder.parameters(), lr=learning_rate)
    losses = []
    encoder.train()
    for _epoch_idx in range(epochs):
        order = list(range(len(pairs)))
        rng.shuffle(order)
        losses.append(_epoch(encoder, pairs, optimizer, batch_size, order))
    encoder.eval()

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    encoder.save(str(out))
    log = {"base_checkpoint": spec.checkpoint, "epochs": epochs,
           "learning_rate": learning_rate, "batch_size": batch_size,
           "seed": seed, "loss": losses}
    (out / "training_log.json").write_text(json.dumps(log, indent=2, sort_keys=True) + "\n",
                                           encoding="utf-8")
    return losses
