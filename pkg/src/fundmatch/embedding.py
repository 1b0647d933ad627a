"""Document vectors: providers, storage, and stylistic-component removal.

Vectors are held in 32-bit floats; dot products and norms accumulate in
64-bit. Debiasing projects every vector onto the orthogonal complement of the
embedding of an empty structured document, so the remaining direction carries
thematic content rather than the shared academic register.
"""
from __future__ import annotations

import json
import re
import subprocess
import tempfile
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Protocol, Sequence

import numpy as np

from .errors import ProviderError, ValidationError
from .fileio import dumps_canonical
from .records import ScholarlyDocument

FNV_OFFSET_BASIS = 14695981039346656037
FNV_PRIME = 1099511628211
_MASK64 = (1 << 64) - 1

BASELINE_DOC_ID = "__baseline__"

_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(text: str) -> list[str]:
    """Maximal runs of alphanumerics, lowercased."""
    return _TOKEN_RE.findall(text.lower())


def fnv1a_64(token: str) -> int:
    h = FNV_OFFSET_BASIS
    for byte in token.encode("utf-8"):
        h ^= byte
        h = (h * FNV_PRIME) & _MASK64
    return h


@dataclass
class EmbeddingVector:
    doc_id: str
    dim: int
    components: np.ndarray  # float32, shape (dim,)
    model_tag: str
    debiased: bool = False

    def __post_init__(self) -> None:
        arr = np.asarray(self.components)
        if arr.dtype != np.float64:  # float64 allowed transiently (debias output)
            arr = arr.astype(np.float32)
        if arr.shape != (self.dim,):
            raise ValidationError(
                f"vector for {self.doc_id!r} has {arr.shape[0] if arr.ndim == 1 else arr.shape} "
                f"components, expected {self.dim}"
            )
        if not np.all(np.isfinite(arr)):
            raise ValidationError(f"vector for {self.doc_id!r} contains NaN/Inf")
        self.components = arr

    def norm(self) -> float:
        return float(np.linalg.norm(self.components.astype(np.float64)))


def hash_embed(doc: ScholarlyDocument, dim: int = 64, model_tag: str | None = None) -> EmbeddingVector:
    """Deterministic bag-of-tokens embedding (FNV-1a bucket hashing).

    Title tokens weigh 2.0, body and keyword tokens 1.0; the result is
    L2-normalized. A document with no tokens at all maps to the zero vector.
    """
    if dim < 2:
        raise ValidationError(f"hash_embed dim must be >= 2, got {dim}")
    acc = np.zeros(dim, dtype=np.float64)
    for token in tokenize(doc.title):
        acc[fnv1a_64(token) % dim] += 2.0
    for token in tokenize(doc.body):
        acc[fnv1a_64(token) % dim] += 1.0
    for kw in doc.keywords:
        for token in tokenize(kw):
            acc[fnv1a_64(token) % dim] += 1.0
    norm = float(np.linalg.norm(acc))
    if norm > 0.0:
        acc /= norm
    return EmbeddingVector(
        doc_id=doc.doc_id,
        dim=dim,
        components=acc.astype(np.float32),
        model_tag=model_tag or f"hash-{dim}",
    )


class EmbeddingProvider(Protocol):
    model_tag: str

    def embed(self, docs: Sequence[ScholarlyDocument]) -> list[EmbeddingVector]: ...


class HashEmbedder:
    """In-process deterministic provider, used for tests and desk-scale runs."""

    def __init__(self, dim: int = 64):
        if dim < 2:
            raise ValidationError(f"dim must be >= 2, got {dim}")
        self.dim = dim
        self.model_tag = f"hash-{dim}"

    def embed(self, docs: Sequence[ScholarlyDocument]) -> list[EmbeddingVector]:
        return [hash_embed(doc, self.dim, self.model_tag) for doc in docs]


class SidecarEmbedder:
    """Provider delegating to an external executable speaking the sidecar protocol.

    The engine writes docs.jsonl, runs `cmd --in docs.jsonl --out vectors.jsonl
    --model <tag>`, and reads the vectors back. Exit code 0 means success;
    anything else surfaces the sidecar's stderr.
    """

    def __init__(self, cmd: Sequence[str], model_tag: str):
        if not cmd:
            raise ValidationError("sidecar command must not be empty")
        self.cmd = list(cmd)
        self.model_tag = model_tag

    def embed(self, docs: Sequence[ScholarlyDocument]) -> list[EmbeddingVector]:
        if not docs:
            return []
        with tempfile.TemporaryDirectory(prefix="fundmatch-sidecar-") as tmp:
            in_path = Path(tmp) / "docs.jsonl"
            out_path = Path(tmp) / "vectors.jsonl"
            with open(in_path, "w", encoding="utf-8") as fh:
                for doc in docs:
                    fh.write(
                        dumps_canonical(
                            {
                                "doc_id": doc.doc_id,
                                "title": doc.title,
                                "body": doc.body,
                                "keywords": list(doc.keywords),
                            }
                        )
                    )
                    fh.write("\n")
            proc = subprocess.run(
                self.cmd + ["--in", str(in_path), "--out", str(out_path), "--model", self.model_tag],
                capture_output=True,
                text=True,
            )
            if proc.returncode != 0:
                raise ProviderError(
                    f"sidecar exited with {proc.returncode}: {proc.stderr.strip().splitlines()[-1] if proc.stderr.strip() else 'no diagnostic'}"
                )
            store = import_vectors(out_path)
        by_id = {doc_id: store.get(doc_id) for doc_id in store.doc_ids()}
        if store.baseline is not None:
            by_id[BASELINE_DOC_ID] = store.baseline
        out: list[EmbeddingVector] = []
        for doc in docs:
            vec = by_id.get(doc.doc_id)
            if vec is None:
                raise ProviderError("sidecar produced no vector", doc_id=doc.doc_id)
            out.append(vec)
        return out


def embed_batch(
    provider: EmbeddingProvider, docs: Sequence[ScholarlyDocument]
) -> list[EmbeddingVector]:
    """One vector per document, input order preserved, dimensions consistent."""
    if not docs:
        return []
    vectors = provider.embed(docs)
    if len(vectors) != len(docs):
        raise ProviderError(
            f"provider returned {len(vectors)} vectors for {len(docs)} documents"
        )
    dim = vectors[0].dim
    for doc, vec in zip(docs, vectors):
        if vec.doc_id != doc.doc_id:
            raise ProviderError("provider broke document order", doc_id=doc.doc_id)
        if vec.dim != dim:
            raise ProviderError(f"dimension mismatch {vec.dim} != {dim}", doc_id=vec.doc_id)
    return vectors


def empty_template_document(doc_id: str = BASELINE_DOC_ID) -> ScholarlyDocument:
    return ScholarlyDocument(doc_id=doc_id, kind="publication", title="", body="", keywords=[])


def compute_baseline(provider: EmbeddingProvider) -> EmbeddingVector:
    """Embed an empty document through the provider's own structural template."""
    return embed_batch(provider, [empty_template_document()])[0]


def debias(v: EmbeddingVector, b: EmbeddingVector) -> EmbeddingVector:
    """Project v onto the orthogonal complement of baseline b.

    A zero baseline short-circuits to the identity (the projection is undefined
    at ||b|| = 0, and a token-free hash baseline legitimately produces it).
    The result keeps 64-bit precision so repeated debiasing is a fixed point;
    stores quantize back to 32-bit when the vector is persisted.
    """
    if v.dim != b.dim:
        raise ValidationError(f"dim mismatch: {v.dim} != {b.dim}")
    b64 = b.components.astype(np.float64)
    bb = float(b64 @ b64)
    if bb == 0.0:
        return replace(v, components=v.components.astype(np.float64), debiased=True)
    v64 = v.components.astype(np.float64)
    projected = v64 - ((v64 @ b64) / bb) * b64
    return replace(v, components=projected, debiased=True)


@dataclass
class VectorStore:
    """Immutable-after-build collection of equal-dimension vectors."""

    model_tag: str
    dim: int
    baseline: EmbeddingVector | None = None
    _entries: dict[str, EmbeddingVector] = field(default_factory=dict)

    def add(self, vec: EmbeddingVector) -> None:
        if vec.dim != self.dim:
            raise ValidationError(f"dim mismatch for {vec.doc_id!r}: {vec.dim} != {self.dim}")
        if vec.model_tag != self.model_tag:
            raise ValidationError(
                f"model_tag mismatch for {vec.doc_id!r}: {vec.model_tag!r} != {self.model_tag!r}"
            )
        if vec.doc_id in self._entries:
            raise ValidationError(f"duplicate doc_id {vec.doc_id!r} in vector store")
        self._entries[vec.doc_id] = vec

    def get(self, doc_id: str) -> EmbeddingVector:
        try:
            return self._entries[doc_id]
        except KeyError:
            raise ValidationError(f"no vector for doc_id {doc_id!r}") from None

    def __contains__(self, doc_id: str) -> bool:
        return doc_id in self._entries

    def __len__(self) -> int:
        return len(self._entries)

    def doc_ids(self) -> list[str]:
        return sorted(self._entries)

    def matrix(self, doc_ids: Sequence[str]) -> np.ndarray:
        """Stack vectors for doc_ids into a (n, dim) float32 matrix."""
        rows = [self.get(d).components for d in doc_ids]
        if not rows:
            return np.zeros((0, self.dim), dtype=np.float32)
        return np.stack(rows)

    def debiased_copy(self, baseline: EmbeddingVector) -> "VectorStore":
        """New store with every entry debiased and quantized back to float32."""
        out = VectorStore(model_tag=self.model_tag, dim=self.dim, baseline=baseline)
        for doc_id in self.doc_ids():
            projected = debias(self._entries[doc_id], baseline)
            out.add(replace(projected, components=projected.components.astype(np.float32)))
        return out


def build_store(
    vectors: Iterable[EmbeddingVector], baseline: EmbeddingVector | None = None
) -> VectorStore:
    vecs = list(vectors)
    if not vecs:
        raise ValidationError("cannot build a vector store from zero vectors")
    store = VectorStore(model_tag=vecs[0].model_tag, dim=vecs[0].dim, baseline=baseline)
    for vec in vecs:
        store.add(vec)
    return store


def export_vectors(store: VectorStore, path: str | Path) -> None:
    """vectors.jsonl: header line, then one row per vector (baseline row first)."""
    flags = {store.get(d).debiased for d in store.doc_ids()}
    if flags == {True, False}:
        raise ValidationError("store mixes debiased and raw vectors")
    debiased = flags == {True}
    if debiased and store.baseline is None:
        raise ValidationError("debiased store carries no baseline")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(dumps_canonical({"model_tag": store.model_tag, "dim": store.dim, "debiased": debiased}))
        fh.write("\n")
        if store.baseline is not None:
            fh.write(_vector_row(BASELINE_DOC_ID, store.baseline.components))
        for doc_id in store.doc_ids():
            fh.write(_vector_row(doc_id, store.get(doc_id).components))


def _vector_row(doc_id: str, components: np.ndarray) -> str:
    row = {"doc_id": doc_id, "v": [float(x) for x in components]}
    return json.dumps(row, ensure_ascii=False, separators=(",", ":")) + "\n"


def import_vectors(path: str | Path) -> VectorStore:
    """Read vectors.jsonl back; dimension, tag and uniqueness are enforced."""
    p = Path(path)
    if not p.is_file():
        raise OSError(f"cannot read {p}")
    with open(p, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh if ln.strip()]
    if not lines:
        raise ValidationError(f"{p} is empty; expected a header line")
    header = json.loads(lines[0])
    for key in ("model_tag", "dim", "debiased"):
        if key not in header:
            raise ValidationError(f"vectors header missing {key!r}")
    model_tag = str(header["model_tag"])
    dim = int(header["dim"])
    debiased = bool(header["debiased"])

    store = VectorStore(model_tag=model_tag, dim=dim)
    for line in lines[1:]:
        try:
            row = json.loads(line)
            doc_id = str(row["doc_id"])
            values = row["v"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ValidationError(f"malformed vector row: {line[:120]!r} ({exc})") from None
        if len(values) != dim:
            raise ValidationError(f"vector for {doc_id!r} has dim {len(values)}, expected {dim}")
        vec = EmbeddingVector(
            doc_id=doc_id,
            dim=dim,
            components=np.asarray(values, dtype=np.float32),
            model_tag=model_tag,
            debiased=debiased and doc_id != BASELINE_DOC_ID,
        )
        if doc_id == BASELINE_DOC_ID:
            if store.baseline is not None:
                raise ValidationError("duplicate baseline row")
            store.baseline = vec
        else:
            store.add(vec)
    if debiased and store.baseline is None:
        raise ValidationError("store marked debiased but carries no baseline row")
    return store
