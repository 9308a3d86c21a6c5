"""Embedding vectors, the deterministic reference embedder, and the shared CSV store format."""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .corpus import DataError


@dataclass(frozen=True)
class ReferenceEmbedderConfig:
    dimension: int = 768
    ngram_size: int = 3
    seed: int = 0

    def __post_init__(self):
        if self.dimension < 8:
            raise ValueError("dimension must be >= 8")
        if self.ngram_size < 1:
            raise ValueError("ngram_size must be >= 1")


def _ngrams(text: str, n: int) -> list[str]:
    padded = f" {text} "
    if len(padded) <= n:
        return [padded]
    return [padded[i:i + n] for i in range(len(padded) - n + 1)]


def reference_embed(text: str, config: ReferenceEmbedderConfig = ReferenceEmbedderConfig()) -> np.ndarray:
    """Signed-hash projection of character n-gram counts, l2-normalized.

    Deterministic for fixed (text, config); a stand-in for a neural sentence
    encoder so the pipeline runs offline.
    """
    normalized = text.strip().lower()
    if not normalized:
        raise ValueError("cannot embed empty text")
    vec = np.zeros(config.dimension, dtype=np.float64)
    key = config.seed.to_bytes(8, "little")
    for gram in _ngrams(normalized, config.ngram_size):
        digest = hashlib.blake2b(gram.encode("utf-8"), key=key, digest_size=9).digest()
        bucket = int.from_bytes(digest[:8], "little") % config.dimension
        sign = 1.0 if digest[8] & 1 else -1.0
        vec[bucket] += sign
    norm = np.linalg.norm(vec)
    if norm == 0.0:  # all n-gram signs cancelled; nudge one bucket
        vec[0] = 1.0
        norm = 1.0
    return vec / norm


def embed_texts(items: dict[str, str], config: ReferenceEmbedderConfig) -> "EmbeddingStore":
    store = EmbeddingStore(dimension=config.dimension)
    for key, text in items.items():
        store.add(key, reference_embed(text, config))
    return store


def cosine(u: np.ndarray, v: np.ndarray) -> float:
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    nu = np.linalg.norm(u)
    nv = np.linalg.norm(v)
    if nu == 0.0 or nv == 0.0:
        raise ValueError("cosine undefined for zero-norm input")
    return float(np.clip(np.dot(u, v) / (nu * nv), -1.0, 1.0))


def str_score(u: np.ndarray, v: np.ndarray) -> float:
    """Cosine clamped to [0, 1]; negative similarity counts as unrelated."""
    return max(0.0, cosine(u, v))


class EmbeddingStore:
    """Fixed-dimension id -> vector table."""

    def __init__(self, dimension: int):
        if dimension < 1:
            raise ValueError("dimension must be positive")
        self.dimension = dimension
        self._entries: dict[str, np.ndarray] = {}

    def add(self, key: str, vector: np.ndarray) -> None:
        vector = np.asarray(vector, dtype=np.float64)
        if vector.shape != (self.dimension,):
            raise ValueError(f"vector for {key!r} has shape {vector.shape}, expected ({self.dimension},)")
        if not np.all(np.isfinite(vector)):
            raise ValueError(f"vector for {key!r} has non-finite entries")
        if key in self._entries:
            raise ValueError(f"duplicate id {key!r}")
        self._entries[key] = vector

    def __getitem__(self, key: str) -> np.ndarray:
        return self._entries[key]

    def __contains__(self, key: str) -> bool:
        return key in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def ids(self) -> list[str]:
        return list(self._entries)

    def items(self):
        return self._entries.items()


def save_store(store: EmbeddingStore, path: str | Path) -> None:
    with Path(path).open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["id"] + [f"v{i}" for i in range(store.dimension)])
        for key, vec in store.items():
            writer.writerow([key] + [repr(float(x)) for x in vec])


def load_store(path: str | Path) -> EmbeddingStore:
    path = Path(path)
    if not path.exists():
        raise DataError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if not header or header[0] != "id":
            raise DataError(f"{path}: expected header starting with 'id'")
        dimension = len(header) - 1
        if dimension < 1:
            raise DataError(f"{path}: no vector columns in header")
        store = EmbeddingStore(dimension=dimension)
        for i, row in enumerate(reader, start=2):
            if len(row) != dimension + 1:
                raise DataError(f"{path}: row {i}: expected {dimension + 1} fields, got {len(row)}")
            try:
                values = np.array([float(x) for x in row[1:]], dtype=np.float64)
            except ValueError as exc:
                raise DataError(f"{path}: row {i}: malformed float ({exc})") from exc
            if not np.all(np.isfinite(values)):
                raise DataError(f"{path}: row {i}: non-finite value")
            try:
                store.add(row[0], values)
            except ValueError as exc:
                raise DataError(f"{path}: row {i}: {exc}") from exc
    return store
