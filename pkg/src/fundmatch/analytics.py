"""Assignment summaries, pairwise indicator overlap with rank correlation, and
per-researcher recommendation-count distributions."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ValidationError
from .ranking import Assignment

COMBINED = "combined"


@dataclass(frozen=True)
class IndicatorSummary:
    indicator_name: str
    researchers_assigned: int
    unique_researchers: int | None  # None on the combined row
    avg_calls_per_researcher: float
    avg_researchers_per_call: float


@dataclass(frozen=True)
class OverlapCell:
    row_indicator: str
    col_indicator: str
    overlap_pct: float
    spearman_rho: float | None  # None when undefined


@dataclass(frozen=True)
class DistributionStats:
    indicator_name: str
    median: float | None
    q1: float | None
    q3: float | None
    histogram: list[tuple[int, int]]  # (calls-per-researcher bucket, researcher count)


def _pairs_by_indicator(assignments: Sequence[Assignment]) -> dict[str, dict[tuple[str, str], float]]:
    """indicator -> {(researcher, call): percentile}, insertion order preserved."""
    out: dict[str, dict[tuple[str, str], float]] = {}
    for a in assignments:
        out.setdefault(a.indicator_name, {})[(a.researcher_id, a.call_id)] = a.percentile
    return out


def summary(
    assignments: Sequence[Assignment], indicator_names: Sequence[str] | None = None
) -> list[IndicatorSummary]:
    """Per-indicator assignment counts plus a combined unique-pairs row."""
    by_ind = _pairs_by_indicator(assignments)
    names = list(indicator_names) if indicator_names is not None else sorted(by_ind)

    researchers_by_ind = {name: {r for r, _ in by_ind.get(name, {})} for name in names}
    rows: list[IndicatorSummary] = []
    for name in names:
        pairs = by_ind.get(name, {})
        researchers = researchers_by_ind[name]
        calls = {c for _, c in pairs}
        exclusive = {
            r
            for r in researchers
            if all(r not in researchers_by_ind[other] for other in names if other != name)
        }
        rows.append(
            IndicatorSummary(
                indicator_name=name,
                researchers_assigned=len(researchers),
                unique_researchers=len(exclusive),
                avg_calls_per_researcher=len(pairs) / len(researchers) if researchers else 0.0,
                avg_researchers_per_call=len(pairs) / len(calls) if calls else 0.0,
            )
        )

    union_pairs = {p for pairs in by_ind.values() for p in pairs}
    union_researchers = {r for r, _ in union_pairs}
    union_calls = {c for _, c in union_pairs}
    rows.append(
        IndicatorSummary(
            indicator_name=COMBINED,
            researchers_assigned=len(union_researchers),
            unique_researchers=None,
            avg_calls_per_researcher=len(union_pairs) / len(union_researchers)
            if union_researchers
            else 0.0,
            avg_researchers_per_call=len(union_pairs) / len(union_calls) if union_calls else 0.0,
        )
    )
    return rows


def average_ranks(values: Sequence[float]) -> np.ndarray:
    """Ranks 1..n with ties receiving the average of their positions."""
    arr = np.asarray(values, dtype=np.float64)
    order = np.argsort(arr, kind="stable")
    ranks = np.empty(len(arr), dtype=np.float64)
    i = 0
    while i < len(arr):
        j = i
        while j + 1 < len(arr) and arr[order[j + 1]] == arr[order[i]]:
            j += 1
        avg = (i + j) / 2.0 + 1.0
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float | None:
    """Spearman rho: Pearson correlation of average-rank-transformed values.

    Without ties this reduces to the closed form 1 - 6*sum(d^2)/(n(n^2-1)),
    which is exact for integer ranks and is used in that case. Returns None
    (undefined) when either side has zero rank variance.
    """
    if len(x) != len(y):
        raise ValidationError(f"length mismatch: {len(x)} != {len(y)}")
    if len(x) < 2:
        raise ValidationError("spearman requires at least two observations")
    rx = average_ranks(x)
    ry = average_ranks(y)
    sx = rx.std()
    sy = ry.std()
    if sx == 0.0 or sy == 0.0:
        return None
    n = len(x)
    if len(set(x)) == n and len(set(y)) == n:
        d2 = float(((rx - ry) ** 2).sum())
        return 1.0 - 6.0 * d2 / (n * (n * n - 1))
    cov = float(((rx - rx.mean()) * (ry - ry.mean())).mean())
    return cov / (float(sx) * float(sy))


def overlap_matrix(
    assignments: Sequence[Assignment], indicator_names: Sequence[str] | None = None
) -> list[OverlapCell]:
    """Asymmetric pair overlap and rank correlation for every ordered indicator pair.

    Overlap is the share of the row indicator's (researcher, call) pairs also
    assigned by the column indicator; rho correlates the two percentile values
    over that shared set.
    """
    by_ind = _pairs_by_indicator(assignments)
    names = list(indicator_names) if indicator_names is not None else sorted(by_ind)
    cells: list[OverlapCell] = []
    for row in names:
        row_pairs = by_ind.get(row, {})
        for col in names:
            if col == row:
                continue
            col_pairs = by_ind.get(col, {})
            shared = sorted(set(row_pairs) & set(col_pairs))
            pct = 100.0 * len(shared) / len(row_pairs) if row_pairs else 0.0
            rho = None
            if len(shared) >= 2:
                rho = spearman([row_pairs[p] for p in shared], [col_pairs[p] for p in shared])
            cells.append(OverlapCell(row, col, pct, rho))
    return cells


def distribution(assignments: Sequence[Assignment], indicator: str) -> DistributionStats:
    """Distribution of distinct recommended calls per researcher for one indicator."""
    calls_per_researcher: dict[str, set[str]] = {}
    for a in assignments:
        if a.indicator_name == indicator:
            calls_per_researcher.setdefault(a.researcher_id, set()).add(a.call_id)
    counts = sorted(len(calls) for calls in calls_per_researcher.values())
    if not counts:
        return DistributionStats(indicator, median=None, q1=None, q3=None, histogram=[])
    q1, median, q3 = np.percentile(np.asarray(counts, dtype=np.float64), [25, 50, 75])
    buckets: dict[int, int] = {}
    for c in counts:
        buckets[c] = buckets.get(c, 0) + 1
    return DistributionStats(
        indicator_name=indicator,
        median=float(median),
        q1=float(q1),
        q3=float(q3),
        histogram=sorted(buckets.items()),
    )


def analytics_payload(
    assignments: Sequence[Assignment], indicator_names: Sequence[str]
) -> dict:
    """The analytics.json document: summary, overlap and distributions."""
    return {
        "summary": [
            {
                "indicator_name": s.indicator_name,
                "researchers_assigned": s.researchers_assigned,
                "unique_researchers": s.unique_researchers,
                "avg_calls_per_researcher": s.avg_calls_per_researcher,
                "avg_researchers_per_call": s.avg_researchers_per_call,
            }
            for s in summary(assignments, indicator_names)
        ],
        "overlap": [
            {
                "row_indicator": c.row_indicator,
                "col_indicator": c.col_indicator,
                "overlap_pct": c.overlap_pct,
                "spearman_rho": c.spearman_rho,
            }
            for c in overlap_matrix(assignments, indicator_names)
        ],
        "distributions": [
            {
                "indicator_name": d.indicator_name,
                "median": d.median,
                "q1": d.q1,
                "q3": d.q3,
                "histogram": [[bucket, count] for bucket, count in d.histogram],
            }
            for d in (distribution(assignments, name) for name in indicator_names)
        ],
    }
