"""Feed-forward map from text-embedding space into graph-embedding space.

Two-layer MLP, rectifier hidden activation, l2-normalized output. Trained by
mini-batch SGD on the MSE between the normalized prediction and the
normalized target; backprop is written by hand and checked against finite
differences in the test suite.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .embed import str_score


@dataclass(frozen=True)
class AlignTrainConfig:
    epochs: int = 50
    learning_rate: float = 1e-3
    batch_size: int = 32
    seed: int = 0
    patience: int = 5
    val_fraction: float = 0.1

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if self.learning_rate <= 0:
            raise ValueError("learning_rate must be > 0")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")


@dataclass
class AlignmentModel:
    W1: np.ndarray  # in_dim x hidden
    b1: np.ndarray
    W2: np.ndarray  # hidden x out_dim
    b2: np.ndarray

    @property
    def in_dim(self) -> int:
        return self.W1.shape[0]

    @property
    def out_dim(self) -> int:
        return self.W2.shape[1]


def init_alignment(in_dim: int = 768, hidden: int = 1024, out_dim: int = 500,
                   seed: int = 0) -> AlignmentModel:
    rng = np.random.default_rng(seed)

    def uniform(shape, fan_in):
        bound = 1.0 / math.sqrt(fan_in)
        return rng.uniform(-bound, bound, size=shape)

    # biases start near zero: a weight-scale random bias would dominate the
    # unit-norm inputs, pushing every hidden vector toward one shared
    # direction and crippling both the random baseline and gradient
    # conditioning. A tiny nonzero value keeps the output well-defined even
    # when every rectifier gate happens to close.
    return AlignmentModel(
        W1=uniform((in_dim, hidden), in_dim),
        b1=1e-6 * uniform((hidden,), in_dim),
        W2=uniform((hidden, out_dim), hidden),
        b2=1e-6 * uniform((out_dim,), hidden),
    )


def _normalize_rows(x: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    norms = np.linalg.norm(x, axis=1, keepdims=True)
    safe = np.where(norms == 0.0, 1.0, norms)
    return x / safe, safe


def map_text_to_graph(text_emb: np.ndarray, model: AlignmentModel) -> np.ndarray:
    x = np.asarray(text_emb, dtype=np.float64)
    squeeze = x.ndim == 1
    if squeeze:
        x = x[None, :]
    if x.shape[1] != model.in_dim:
        raise ValueError(f"input dimension {x.shape[1]}, model expects {model.in_dim}")
    h = np.maximum(x @ model.W1 + model.b1, 0.0)
    z = h @ model.W2 + model.b2
    y, _ = _normalize_rows(z)
    return y[0] if squeeze else y


def _loss_and_grads(model: AlignmentModel, x: np.ndarray, targets: np.ndarray):
    """MSE between normalized prediction and normalized target."""
    t, _ = _normalize_rows(targets)
    a1 = x @ model.W1 + model.b1
    h = np.maximum(a1, 0.0)
    z = h @ model.W2 + model.b2
    y, norms = _normalize_rows(z)
    diff = y - t
    n, d = x.shape[0], z.shape[1]
    loss = float(np.sum(diff * diff) / (n * d))

    dy = 2.0 * diff / (n * d)
    # back through y = z / ||z||: dz = (dy - y * <dy, y>) / ||z||
    dz = (dy - y * np.sum(dy * y, axis=1, keepdims=True)) / norms
    gW2 = h.T @ dz
    gb2 = dz.sum(axis=0)
    dh = dz @ model.W2.T
    da1 = dh * (a1 > 0.0)
    gW1 = x.T @ da1
    gb1 = da1.sum(axis=0)
    return loss, (gW1, gb1, gW2, gb2)


def evaluate_mse(model: AlignmentModel, x: np.ndarray, targets: np.ndarray) -> float:
    t, _ = _normalize_rows(np.asarray(targets, dtype=np.float64))
    y = map_text_to_graph(x, model)
    diff = y - t
    return float(np.sum(diff * diff) / diff.size)


def train_alignment(inputs: np.ndarray, targets: np.ndarray,
                    config: AlignTrainConfig = AlignTrainConfig(),
                    hidden: int = 1024) -> tuple[AlignmentModel, dict]:
    """Returns the best-validation model and a history dict."""
    x = np.asarray(inputs, dtype=np.float64)
    t = np.asarray(targets, dtype=np.float64)
    if x.ndim != 2 or t.ndim != 2 or x.shape[0] != t.shape[0]:
        raise ValueError("inputs and targets must be 2-d with matching row counts")
    if x.shape[0] == 0:
        raise ValueError("empty training set")

    rng = np.random.default_rng(config.seed)
    order = rng.permutation(x.shape[0])
    n_val = int(x.shape[0] * config.val_fraction)
    val_idx, train_idx = order[:n_val], order[n_val:]
    if len(train_idx) == 0:
        train_idx = order
    if len(val_idx) == 0:
        val_idx = train_idx  # tiny datasets validate on train
    xt, tt = x[train_idx], t[train_idx]
    xv, tv = x[val_idx], t[val_idx]

    model = init_alignment(in_dim=x.shape[1], hidden=hidden, out_dim=t.shape[1],
                           seed=config.seed)
    best = _copy(model)
    best_val = evaluate_mse(model, xv, tv)
    history = {"train_loss": [], "val_loss": [best_val]}
    stale = 0
    for _epoch in range(config.epochs):
        perm = rng.permutation(len(xt))
        epoch_loss = 0.0
        for start in range(0, len(xt), config.batch_size):
            idx = perm[start:start + config.batch_size]
            loss, (gW1, gb1, gW2, gb2) = _loss_and_grads(model, xt[idx], tt[idx])
            epoch_loss += loss * len(idx)
            model.W1 -= config.learning_rate * gW1
            model.b1 -= config.learning_rate * gb1
            model.W2 -= config.learning_rate * gW2
            model.b2 -= config.learning_rate * gb2
        history["train_loss"].append(epoch_loss / len(xt))
        val = evaluate_mse(model, xv, tv)
        history["val_loss"].append(val)
        if val < best_val:
            best_val = val
            best = _copy(model)
            stale = 0
        else:
            stale += 1
            if stale >= config.patience:
                break
    history["best_val"] = best_val
    return best, history


def _copy(model: AlignmentModel) -> AlignmentModel:
    return AlignmentModel(W1=model.W1.copy(), b1=model.b1.copy(),
                          W2=model.W2.copy(), b2=model.b2.copy())


def predict_str(title_a: str, title_b: str, embedder, model: AlignmentModel) -> float:
    """STR of two titles in graph space; `embedder` maps text -> text vector."""
    if not title_a.strip() or not title_b.strip():
        raise ValueError("titles must be non-empty")
    ya = map_text_to_graph(embedder(title_a), model)
    yb = map_text_to_graph(embedder(title_b), model)
    return str_score(ya, yb)


def save_alignment(model: AlignmentModel, path: str | Path, seed: int | None = None) -> None:
    payload = {
        "in_dim": model.in_dim,
        "hidden": int(model.W1.shape[1]),
        "out_dim": model.out_dim,
        "seed": seed,
        "W1": model.W1.reshape(-1).tolist(),
        "b1": model.b1.tolist(),
        "W2": model.W2.reshape(-1).tolist(),
        "b2": model.b2.tolist(),
    }
    Path(path).write_text(json.dumps(payload, sort_keys=True) + "\n", encoding="utf-8")


def load_alignment(path: str | Path) -> AlignmentModel:
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    in_dim, hidden, out_dim = payload["in_dim"], payload["hidden"], payload["out_dim"]
    return AlignmentModel(
        W1=np.array(payload["W1"]).reshape(in_dim, hidden),
        b1=np.array(payload["b1"]),
        W2=np.array(payload["W2"]).reshape(hidden, out_dim),
        b2=np.array(payload["b2"]),
    )
