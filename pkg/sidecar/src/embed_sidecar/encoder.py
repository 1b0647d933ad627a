"""Document encoders behind the sidecar.

Every document is rendered through one fixed textual template before
encoding, and the "__baseline__" document flows through the same template
with empty fields, so the baseline vector captures the structural scaffolding
rather than any content:

    Title: {title}\nAbstract: {body}\nKeywords: {kw1, kw2, ...}

Two encoder families are available. Tags like ``hash-256`` select a
deterministic FNV-1a token-bucket encoder that needs no model download; any
other tag is treated as a sentence-transformers model id (``specter2`` maps
to ``allenai/specter2_base``) and requires the optional transformer extra.
"""
from __future__ import annotations

import re

import numpy as np

FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211
_MASK64 = (1 << 64) - 1
_TOKENS = re.compile(r"[^\W_]+", re.UNICODE)

MODEL_ALIASES = {"specter2": "allenai/specter2_base"}


def render_template(title: str, body: str, keywords: list[str]) -> str:
    return f"Title: {title}\nAbstract: {body}\nKeywords: {', '.join(keywords)}"


def _fnv1a(token: str) -> int:
    h = FNV_OFFSET_BASIS
    for byte in token.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


class HashEncoder:
    """Deterministic token-bucket encoder over the rendered template text.

    The template labels themselves contribute tokens, so the baseline
    (all-empty fields) is a nonzero vector, exactly like a transformer's
    encoding of the empty structure.
    """

    def __init__(self, dim: int):
        if dim < 2:
            raise ValueError(f"dim must be >= 2, got {dim}")
        self.dim = dim

    def encode(self, texts: list[str], batch_size: int = 32) -> np.ndarray:
        out = np.zeros((len(texts), self.dim), dtype=np.float64)
        for row, text in enumerate(texts):
            for token in _TOKENS.findall(text.lower()):
                out[row, _fnv1a(token) % self.dim] += 1.0
        norms = np.linalg.norm(out, axis=1)
        safe = np.where(norms == 0.0, 1.0, norms)
        return (out / safe[:, None]).astype(np.float32)


class TransformerEncoder:
    """sentence-transformers wrapper pinned to deterministic CPU inference."""

    def __init__(self, model_id: str):
        try:
            import torch
            from sentence_transformers import SentenceTransformer
        except ImportError as exc:
            raise RuntimeError(
                f"model {model_id!r} needs the sentence-transformers extra: {exc}"
            ) from None
        torch.manual_seed(0)
        torch.set_grad_enabled(False)
        self._model = SentenceTransformer(model_id, device="cpu")
        self._model.eval()
        self.dim = int(self._model.get_sentence_embedding_dimension())

    def encode(self, texts: list[str], batch_size: int = 32) -> np.ndarray:
        vectors = self._model.encode(
            texts,
            batch_size=batch_size,
            convert_to_numpy=True,
            normalize_embeddings=False,
            show_progress_bar=False,
        )
        return np.asarray(vectors, dtype=np.float32)


_HASH_TAG = re.compile(r"^hash-(\d+)$")


def make_encoder(model_tag: str):
    match = _HASH_TAG.match(model_tag)
    if match:
        return HashEncoder(dim=int(match.group(1)))
    return TransformerEncoder(MODEL_ALIASES.get(model_tag, model_tag))
