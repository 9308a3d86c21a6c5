"""Adapter between the offline STR pipeline and the pretrained-LM ecosystem.

The main pipeline runs fully offline on a deterministic reference embedder;
this package swaps in real models — abstractive summarization, pretrained
sentence encoders, and fine-tuned encoder variants — while talking to the
pipeline only through its CSV interchange formats (jobs, pairs, embedding
stores). Everything here is a stateless batch script: read CSVs, run the
model, write CSVs.
"""

from .models import MODEL_ROSTER, ModelSpec, ModelUnavailableError, load_encoder, resolve_spec

__all__ = [
    "MODEL_ROSTER",
    "ModelSpec",
    "ModelUnavailableError",
    "load_encoder",
    "resolve_spec",
]
