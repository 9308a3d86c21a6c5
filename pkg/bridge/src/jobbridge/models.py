"""Encoder roster and checkpoint loading.

Four encoder families are wired up: two pretrained sentence encoders and
their fine-tuned variants (the ``-F`` models produced by ``finetune``). All
emit 768-dimensional vectors, matching the main pipeline's embedding store.
A checkpoint may also be given directly as a local sentence-transformers
directory, which is how fine-tuned models round-trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

ENCODER_DIMENSION = 768


@dataclass(frozen=True)
class ModelSpec:
    family: str
    checkpoint: str
    dimension: int = ENCODER_DIMENSION

    def __post_init__(self):
        if self.dimension != ENCODER_DIMENSION:
            raise ValueError(f"encoder dimension must be {ENCODER_DIMENSION}, got {self.dimension}")


MODEL_ROSTER: dict[str, ModelSpec] = {
    "JOBBERT": ModelSpec("JOBBERT", "jjzha/jobbert-base-cased"),
    "JOBBERT-F": ModelSpec("JOBBERT-F", "checkpoints/jobbert-finetuned"),
    "MPNET": ModelSpec("MPNET", "sentence-transformers/all-mpnet-base-v2"),
    "MPNET-F": ModelSpec("MPNET-F", "checkpoints/mpnet-finetuned"),
}

DEFAULT_SUMMARIZER = "facebook/bart-large-cnn"


class ModelUnavailableError(RuntimeError):
    """A checkpoint could not be loaded (not cached locally, no download source)."""


def unavailable_message(checkpoint: str) -> str:
    return (
        f"model {checkpoint!r} is unavailable (no local checkpoint, no download "
        "source); run the main pipeline with its built-in pass-through "
        "summarizer / reference embedder instead"
    )


def resolve_spec(name_or_path: str) -> ModelSpec:
    """Roster family name, or any local/remote checkpoint identifier."""
    if name_or_path in MODEL_ROSTER:
        return MODEL_ROSTER[name_or_path]
    family = Path(name_or_path).name or name_or_path
    return ModelSpec(family=family, checkpoint=name_or_path)


def embedding_dimension(module) -> int:
    """Output dimension of a sentence-transformers module, tolerant of the
    method rename across library versions."""
    for name in ("get_embedding_dimension", "get_sentence_embedding_dimension",
                 "get_word_embedding_dimension"):
        fn = getattr(module, name, None)
        if fn is not None:
            return fn()
    raise TypeError(f"cannot determine embedding dimension of {type(module).__name__}")


def load_encoder(spec: ModelSpec):
    """Load a sentence encoder, raising ModelUnavailableError when the
    checkpoint cannot be materialized."""
    from sentence_transformers import SentenceTransformer

    try:
        encoder = SentenceTransformer(spec.checkpoint)
    except Exception as exc:  # HF raises a zoo of exception types here
        raise ModelUnavailableError(unavailable_message(spec.checkpoint)) from exc
    got = embedding_dimension(encoder)
    if got != spec.dimension:
        raise ValueError(
            f"dimension drift: checkpoint {spec.checkpoint!r} emits {got}-dim "
            f"vectors, spec requires {spec.dimension}")
    return encoder


def load_summarizer(checkpoint: str = DEFAULT_SUMMARIZER):
    """Load a seq2seq summarization pipeline; same unavailable contract."""
    from transformers import pipeline

    try:
        return pipeline("summarization", model=checkpoint)
    except Exception as exc:
        raise ModelUnavailableError(unavailable_message(checkpoint)) from exc
