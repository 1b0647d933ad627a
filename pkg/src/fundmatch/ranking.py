"""Institution-relative percentiles, competition ranks, and cutoff assignments.

Percentile uses the weak inequality (share of scored researchers with z at or
below one's own); rank is 1 plus the number of strictly greater scores, so
rank 1 and percentile 100 always coincide and ties share both.
"""
from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import ValidationError
from .scoring import ScoreRow


@dataclass(frozen=True)
class PercentileEntry:
    researcher_id: str
    indicator_name: str
    call_id: str
    percentile: float  # [0, 100]
    rank: int  # >= 1
    z: float


@dataclass(frozen=True)
class Assignment:
    researcher_id: str
    indicator_name: str
    call_id: str
    percentile: float


def percentiles(
    indicator_name: str, call_id: str, z_by_researcher: Mapping[str, float]
) -> list[PercentileEntry]:
    """Position every scored researcher within this (indicator, call) distribution."""
    if not z_by_researcher:
        raise ValidationError("percentiles requires at least one scored researcher")
    n = len(z_by_researcher)
    ascending = sorted(z_by_researcher.values())
    entries = []
    for researcher_id in sorted(z_by_researcher):
        z = z_by_researcher[researcher_id]
        count_le = bisect_right(ascending, z)
        entries.append(
            PercentileEntry(
                researcher_id=researcher_id,
                indicator_name=indicator_name,
                call_id=call_id,
                percentile=100.0 * count_le / n,
                rank=1 + (n - count_le),
                z=z,
            )
        )
    entries.sort(key=lambda e: (-e.z, e.researcher_id))
    return entries


def assign(entries: Sequence[PercentileEntry], cutoff: float = 95.0) -> list[Assignment]:
    """Keep entries at or above the percentile cutoff."""
    return [
        Assignment(
            researcher_id=e.researcher_id,
            indicator_name=e.indicator_name,
            call_id=e.call_id,
            percentile=e.percentile,
        )
        for e in entries
        if e.percentile >= cutoff
    ]


class _Group:
    """One (indicator, call) distribution, stored as aligned arrays.

    Rows are ordered by descending z with researcher_id as the tiebreak, so
    the assigned slice is always a prefix.
    """

    __slots__ = ("researcher_ids", "z", "percentile", "rank")

    def __init__(self, researcher_ids: list[str], z_values: np.ndarray):
        # researcher_ids arrive sorted ascending; a stable argsort on -z keeps
        # that order among ties.
        order = np.argsort(-z_values, kind="stable")
        self.researcher_ids = [researcher_ids[i] for i in order]
        self.z = z_values[order]
        n = len(self.z)
        ascending = np.sort(z_values)
        count_le = np.searchsorted(ascending, self.z, side="right")
        self.percentile = 100.0 * count_le / n
        self.rank = 1 + (n - count_le)

    def entries(self, indicator: str, call_id: str, limit: int | None = None) -> list[PercentileEntry]:
        stop = len(self.researcher_ids) if limit is None else limit
        return [
            PercentileEntry(
                researcher_id=self.researcher_ids[i],
                indicator_name=indicator,
                call_id=call_id,
                percentile=float(self.percentile[i]),
                rank=int(self.rank[i]),
                z=float(self.z[i]),
            )
            for i in range(stop)
        ]

    def assigned_count(self, cutoff: float) -> int:
        return int(np.searchsorted(-self.percentile, -cutoff, side="right"))


class RankingBook:
    """Percentile tables and assignments for a completed scoring run."""

    def __init__(
        self,
        rows: Sequence[ScoreRow],
        cutoff: float = 95.0,
        indicator_order: Sequence[str] | None = None,
    ):
        if not 0.0 < cutoff <= 100.0:
            raise ValidationError(f"percentile cutoff must be in (0, 100], got {cutoff}")
        self.cutoff = cutoff
        self._indicators: list[str] = []
        self._calls: set[str] = set()
        self._scored_researchers: set[str] = set()

        staged: dict[tuple[str, str], tuple[list[str], list[float]]] = {}
        for row in rows:
            ids, zs = staged.setdefault((row.indicator, row.call_id), ([], []))
            ids.append(row.researcher_id)
            zs.append(row.z)
            self._calls.add(row.call_id)
            if row.indicator not in self._indicators:
                self._indicators.append(row.indicator)
        if indicator_order is not None:
            present = set(self._indicators)
            ordered = [name for name in indicator_order if name in present]
            self._indicators = ordered + [n for n in self._indicators if n not in set(ordered)]

        self._groups: dict[tuple[str, str], _Group] = {}
        for key in sorted(staged):
            ids, zs = staged[key]
            order = sorted(range(len(ids)), key=lambda i: ids[i])
            sorted_ids = [ids[i] for i in order]
            self._scored_researchers.update(sorted_ids)
            self._groups[key] = _Group(sorted_ids, np.asarray(zs, dtype=np.float64)[order])

        self._recommendation_index: dict[str, dict[str, list[tuple[str, int, float]]]] | None = None

    @property
    def indicators(self) -> list[str]:
        return list(self._indicators)

    @property
    def scored_researchers(self) -> set[str]:
        return set(self._scored_researchers)

    @property
    def calls(self) -> set[str]:
        return set(self._calls)

    def iter_entries(self) -> Iterator[PercentileEntry]:
        """All percentile entries in canonical (indicator, call, -z) order."""
        for (indicator, call_id), group in self._groups.items():
            yield from group.entries(indicator, call_id)

    def iter_assigned(self) -> Iterator[PercentileEntry]:
        """Entries at or above the cutoff, canonical order."""
        for (indicator, call_id), group in self._groups.items():
            cut = group.assigned_count(self.cutoff)
            yield from group.entries(indicator, call_id, limit=cut)

    @property
    def assignments(self) -> list[Assignment]:
        return [
            Assignment(
                researcher_id=e.researcher_id,
                indicator_name=e.indicator_name,
                call_id=e.call_id,
                percentile=e.percentile,
            )
            for e in self.iter_assigned()
        ]

    def _recommendations(self) -> dict[str, dict[str, list[tuple[str, int, float]]]]:
        if self._recommendation_index is None:
            index: dict[str, dict[str, list[tuple[str, int, float]]]] = {}
            for e in self.iter_assigned():
                per = index.setdefault(e.researcher_id, {})
                per.setdefault(e.indicator_name, []).append((e.call_id, e.rank, e.percentile))
            for per in index.values():
                for items in per.values():
                    items.sort(key=lambda item: (-item[2], item[0]))
            self._recommendation_index = index
        return self._recommendation_index

    def recommend_for_researcher(
        self, researcher_id: str
    ) -> dict[str, list[tuple[str, int, float]]]:
        """Assigned calls per indicator as (call_id, rank, percentile), best first."""
        if researcher_id not in self._scored_researchers:
            raise ValidationError(f"unknown researcher {researcher_id!r}")
        per = self._recommendations().get(researcher_id, {})
        return {name: list(per.get(name, [])) for name in self._indicators}

    def candidates_for_call(
        self, call_id: str, indicator: str, min_percentile: float = 0.0
    ) -> list[PercentileEntry]:
        """Scored researchers for one call at or above min_percentile, rank order."""
        if call_id not in self._calls:
            raise ValidationError(f"unknown call {call_id!r}")
        if indicator not in self._indicators:
            raise ValidationError(f"unknown indicator {indicator!r}")
        group = self._groups.get((indicator, call_id))
        if group is None:
            return []
        cut = group.assigned_count(min_percentile) if min_percentile > 0 else len(group.researcher_ids)
        return group.entries(indicator, call_id, limit=cut)
