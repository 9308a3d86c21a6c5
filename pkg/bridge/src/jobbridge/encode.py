"""Batch sentence encoding into the pipeline's embedding-store CSV format."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .models import ModelSpec, load_encoder
from .textio import FormatError, write_embeddings


def read_texts(path: str | Path, column: str, fallback: str | None = "title") -> tuple[list[str], list[str]]:
    """(ids, texts) from any CSV with an ``id`` column and the named text
    column; empty cells fall back to the `fallback` column when present."""
    path = Path(path)
    if not path.exists():
        raise FormatError(f"file not found: {path}")
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.DictReader(fh)
        fields = reader.fieldnames or []
        if "id" not in fields or column not in fields:
            raise FormatError(f"{path}: expected columns 'id' and {column!r}, got {fields}")
        ids, texts = [], []
        for i, row in enumerate(reader, start=2):
            text = (row.get(column) or "").strip()
            if not text and fallback and fallback in fields:
                text = (row.get(fallback) or "").strip()
            if not text:
                raise FormatError(f"{path}: row {i}: empty text for id {row['id']!r}")
            ids.append(row["id"])
            texts.append(text)
    if not ids:
        raise FormatError(f"{path}: no rows")
    if len(set(ids)) != len(ids):
        raise FormatError(f"{path}: duplicate ids")
    return ids, texts


def encode_batch(texts_csv: str | Path, spec: ModelSpec, out_csv: str | Path,
                 column: str = "summary", batch_size: int = 32) -> int:
    """Encode one CSV column per row and write an embedding store; returns
    the number of rows encoded."""
    ids, texts = read_texts(texts_csv, column)
    encoder = load_encoder(spec)
    matrix = np.asarray(
        encoder.encode(texts, batch_size=batch_size, convert_to_numpy=True,
                       normalize_embeddings=False, show_progress_bar=False),
        dtype=np.float64)
    if matrix.shape != (len(ids), spec.dimension):
        raise ValueError(f"dimension drift: encoder produced shape {matrix.shape}, "
                         f"expected ({len(ids)}, {spec.dimension})")
    write_embeddings(ids, matrix, out_csv)
    return len(ids)
