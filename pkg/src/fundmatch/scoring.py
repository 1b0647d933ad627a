"""Similarity scoring: cosine pairs, per-call aggregation, within-researcher z-scores.

The full publication-by-call similarity matrix is computed once as a float64
matrix product over unit-normalized rows; per-set aggregation then reads row
slices in pub_id-sorted order, so results do not depend on evaluation order or
on the thread count.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from .embedding import EmbeddingVector, VectorStore
from .errors import ValidationError
from .profiling import PublicationSet

FULL_MEAN = "full_mean"
TOP_THIRD_MEAN = "top_third_mean"

SCOPE_PER_INDICATOR = "per_indicator_across_calls"
SCOPE_ACROSS_INDICATORS = "across_indicators"
SCOPE_PRE_AGGREGATION = "pre_aggregation"
NORMALIZATION_SCOPES = (SCOPE_PER_INDICATOR, SCOPE_ACROSS_INDICATORS, SCOPE_PRE_AGGREGATION)

SIGMA_FLOOR = 1e-12


@dataclass(frozen=True)
class PairScore:
    pub_id: str
    call_id: str
    sim: float


@dataclass(frozen=True)
class AggregatedScore:
    researcher_id: str
    indicator_name: str
    call_id: str
    a: float
    n_set: int
    k_used: int
    rule: str


@dataclass(frozen=True)
class NormalizedScore:
    researcher_id: str
    indicator_name: str
    call_id: str
    z: float
    mu_r: float
    sigma_r: float


@dataclass(frozen=True)
class ScoreRow:
    """One scored (researcher, indicator, call) triple, ready for scores.jsonl."""

    researcher_id: str
    indicator: str
    call_id: str
    a: float
    z: float
    n_set: int
    k_used: int
    rule: str

    def to_dict(self) -> dict:
        return {
            "researcher_id": self.researcher_id,
            "indicator": self.indicator,
            "call_id": self.call_id,
            "a": self.a,
            "z": self.z,
            "n_set": self.n_set,
            "k_used": self.k_used,
            "rule": self.rule,
        }


def cosine(p: EmbeddingVector, c: EmbeddingVector) -> float:
    """Cosine of the angle between two vectors; 0 when either is the zero vector."""
    if p.dim != c.dim:
        raise ValidationError(f"dim mismatch: {p.dim} != {c.dim}")
    a = p.components.astype(np.float64)
    b = c.components.astype(np.float64)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        return 0.0
    return float(a @ b) / (na * nb)


def top_k_for(n_set: int, denominator: int = 3) -> tuple[str, int]:
    """Aggregation rule for a set of n_set pair scores.

    The top-third count is k = ceil(n/denominator); when that amounts to two
    scores or fewer the plain mean over the full set is used instead.
    """
    if n_set < 1:
        raise ValidationError(f"n_set must be >= 1, got {n_set}")
    if denominator < 2:
        raise ValidationError(f"denominator must be >= 2, got {denominator}")
    k = math.ceil(n_set / denominator)
    if k <= 2:
        return FULL_MEAN, n_set
    return TOP_THIRD_MEAN, k


def aggregate(pair_sims: Sequence[float], rule: str, k: int) -> float:
    """Arithmetic mean over the full set, or over the k largest values."""
    if not pair_sims:
        raise ValidationError("cannot aggregate an empty list of similarities")
    if k < 1 or k > len(pair_sims):
        raise ValidationError(f"k={k} out of range for {len(pair_sims)} values")
    values = np.asarray(pair_sims, dtype=np.float64)
    if rule == FULL_MEAN:
        return float(values.mean())
    if rule == TOP_THIRD_MEAN:
        top = np.sort(values)[-k:]
        return float(top.mean())
    raise ValidationError(f"unknown aggregation rule {rule!r}")


def normalize(
    researcher_id: str, indicator_name: str, scores: Mapping[str, float]
) -> dict[str, NormalizedScore]:
    """Z-score the aggregated values against this researcher's own distribution.

    Population statistics over all calls of the (researcher, indicator) pair;
    below the sigma floor every z collapses to 0.
    """
    if not scores:
        raise ValidationError("normalize requires at least one scored call")
    values = np.asarray([scores[c] for c in sorted(scores)], dtype=np.float64)
    mu = float(values.mean())
    sigma = float(values.std())  # population std
    out: dict[str, NormalizedScore] = {}
    for call_id in sorted(scores):
        z = 0.0 if sigma < SIGMA_FLOOR else (scores[call_id] - mu) / sigma
        out[call_id] = NormalizedScore(
            researcher_id=researcher_id,
            indicator_name=indicator_name,
            call_id=call_id,
            z=z,
            mu_r=mu,
            sigma_r=sigma,
        )
    return out


def pair_similarities(
    store: VectorStore, pub_ids: Sequence[str], call_ids: Sequence[str]
) -> np.ndarray:
    """Cosine matrix (len(pub_ids) x len(call_ids)) in float64."""
    pubs = _unit_rows(store.matrix(pub_ids))
    calls = _unit_rows(store.matrix(call_ids))
    return pubs @ calls.T


def _unit_rows(matrix: np.ndarray) -> np.ndarray:
    m = matrix.astype(np.float64)
    norms = np.linalg.norm(m, axis=1)
    safe = np.where(norms == 0.0, 1.0, norms)
    return m / safe[:, None]


def score_matrix(
    sets: Sequence[PublicationSet],
    store: VectorStore,
    call_ids: Sequence[str],
    *,
    scope: str = SCOPE_PER_INDICATOR,
    denominator: int = 3,
    threads: int = 1,
) -> list[ScoreRow]:
    """Score every eligible publication set against every call.

    Output is canonically sorted by (indicator, call_id, z descending,
    researcher_id) and is identical for any thread count: the similarity
    matrix is computed once and each set's aggregation is self-contained.
    """
    if scope not in NORMALIZATION_SCOPES:
        raise ValidationError(f"unknown normalization scope {scope!r}")
    eligible = [s for s in sets if s.eligible and s.pub_ids]
    calls_sorted = sorted(call_ids)
    if not eligible or not calls_sorted:
        return []

    pub_ids = sorted({p for s in eligible for p in s.pub_ids})
    for doc_id in pub_ids + calls_sorted:
        if doc_id not in store:
            raise ValidationError(f"missing vector for doc_id {doc_id!r}")
    sims = pair_similarities(store, pub_ids, calls_sorted)
    pub_index = {p: i for i, p in enumerate(pub_ids)}

    def score_one(pset: PublicationSet) -> list[tuple[str, str, str, float, float, int, int, str]]:
        idx = [pub_index[p] for p in sorted(pset.pub_ids)]
        block = sims[idx, :]  # (n_set, n_calls)
        n = len(idx)
        rule, k = top_k_for(n, denominator)
        if rule == FULL_MEAN:
            agg = block.mean(axis=0)
        else:
            agg = np.sort(block, axis=0)[-k:, :].mean(axis=0)
        if scope == SCOPE_PRE_AGGREGATION:
            mu = float(block.mean())
            sigma = float(block.std())
            if sigma < SIGMA_FLOOR:
                normed = np.zeros_like(block)
            else:
                normed = (block - mu) / sigma
            if rule == FULL_MEAN:
                z = normed.mean(axis=0)
            else:
                z = np.sort(normed, axis=0)[-k:, :].mean(axis=0)
        else:
            z = agg  # normalized in a later pass
        return [
            (pset.researcher_id, pset.indicator_name, call_id, float(agg[j]), float(z[j]), n, k, rule)
            for j, call_id in enumerate(calls_sorted)
        ]

    ordered_sets = sorted(eligible, key=lambda s: (s.indicator_name, s.researcher_id))
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            per_set = list(pool.map(score_one, ordered_sets))
    else:
        per_set = [score_one(s) for s in ordered_sets]

    flat = [row for rows in per_set for row in rows]
    if scope == SCOPE_PER_INDICATOR:
        flat = _normalize_grouped(flat, key=lambda r: (r[0], r[1]))
    elif scope == SCOPE_ACROSS_INDICATORS:
        flat = _normalize_grouped(flat, key=lambda r: r[0])

    rows = [
        ScoreRow(
            researcher_id=r, indicator=i, call_id=c, a=a, z=z, n_set=n, k_used=k, rule=rule
        )
        for (r, i, c, a, z, n, k, rule) in flat
    ]
    rows.sort(key=lambda r: (r.indicator, r.call_id, -r.z, r.researcher_id))
    return rows


def _normalize_grouped(rows: list[tuple], key) -> list[tuple]:
    """Replace the z slot with the z-score of `a` within each key group."""
    groups: dict = {}
    for row in rows:
        groups.setdefault(key(row), []).append(row)
    out: list[tuple] = []
    for group in groups.values():
        values = np.asarray([r[3] for r in group], dtype=np.float64)
        mu = float(values.mean())
        sigma = float(values.std())
        for r in group:
            z = 0.0 if sigma < SIGMA_FLOOR else (r[3] - mu) / sigma
            out.append((r[0], r[1], r[2], r[3], z, r[5], r[6], r[7]))
    return out
