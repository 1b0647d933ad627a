"""Indicators and per-researcher publication sets.

An indicator crosses an author filter (all publications vs. publications the
researcher led as first, last or corresponding author) with a time window and
a minimum-size threshold. A researcher below the threshold for one indicator
is excluded from that ranking only; the set is still built for diagnostics.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ValidationError
from .records import PublicationRecord, ResearcherProfile

FILTER_ALL = "all"
FILTER_LEADING = "leading"
AUTHOR_FILTERS = (FILTER_ALL, FILTER_LEADING)

RESEARCH_BACKGROUND = "Research background"
CURRENT_FOCUS = "Current focus"
RESEARCH_LEADERSHIP = "Research leadership"
CURRENT_LEADERSHIP = "Current leadership"


@dataclass(frozen=True)
class IndicatorSpec:
    name: str
    author_filter: str
    window_years: int
    min_pubs: int

    def validate(self) -> None:
        if self.author_filter not in AUTHOR_FILTERS:
            raise ValidationError(f"unknown author_filter {self.author_filter!r}")
        if self.window_years < 1:
            raise ValidationError(f"window_years must be >= 1, got {self.window_years}")
        if self.min_pubs < 1:
            raise ValidationError(f"min_pubs must be >= 1, got {self.min_pubs}")


@dataclass
class PublicationSet:
    researcher_id: str
    indicator_name: str
    pub_ids: list[str]  # descending year, then pub_id
    eligible: bool


def default_indicators() -> list[IndicatorSpec]:
    """The four standard indicators: two windows crossed with two author filters."""
    return [
        IndicatorSpec(RESEARCH_BACKGROUND, FILTER_ALL, window_years=5, min_pubs=5),
        IndicatorSpec(CURRENT_FOCUS, FILTER_ALL, window_years=2, min_pubs=3),
        IndicatorSpec(RESEARCH_LEADERSHIP, FILTER_LEADING, window_years=5, min_pubs=4),
        IndicatorSpec(CURRENT_LEADERSHIP, FILTER_LEADING, window_years=2, min_pubs=2),
    ]


def is_leading(pub: PublicationRecord, researcher: ResearcherProfile) -> bool:
    """True when the researcher holds a first, last or corresponding slot."""
    n = len(pub.authors)
    own = [s for s in pub.authors if s.source_author_id in researcher.merged_source_ids]
    if not own:
        raise ValidationError(
            f"researcher {researcher.researcher_id!r} is not among the authors of {pub.pub_id!r}"
        )
    return any(s.position == 1 or s.position == n or s.is_corresponding for s in own)


def in_window(pub: PublicationRecord, window_years: int, reference_year: int) -> bool:
    return reference_year - window_years + 1 <= pub.year <= reference_year


def build_set(
    researcher: ResearcherProfile,
    indicator: IndicatorSpec,
    pubs: Mapping[str, PublicationRecord],
    reference_year: int,
) -> PublicationSet:
    """Select the researcher's publications passing the indicator's filter and window."""
    indicator.validate()
    selected: list[PublicationRecord] = []
    for pub_id in researcher.publication_ids:
        pub = pubs.get(pub_id)
        if pub is None:
            raise ValidationError(f"publication {pub_id!r} owned by researcher but not in corpus")
        if not in_window(pub, indicator.window_years, reference_year):
            continue
        if indicator.author_filter == FILTER_LEADING and not is_leading(pub, researcher):
            continue
        selected.append(pub)
    selected.sort(key=lambda p: (-p.year, p.pub_id))
    ids = [p.pub_id for p in selected]
    return PublicationSet(
        researcher_id=researcher.researcher_id,
        indicator_name=indicator.name,
        pub_ids=ids,
        eligible=len(ids) >= indicator.min_pubs,
    )


def build_all_sets(
    researchers: list[ResearcherProfile],
    indicators: list[IndicatorSpec],
    pubs: Mapping[str, PublicationRecord],
    reference_year: int,
) -> list[PublicationSet]:
    """All (researcher, indicator) sets in canonical (indicator, researcher) order."""
    names = [i.name for i in indicators]
    if len(set(names)) != len(names):
        raise ValidationError("indicator names must be unique")
    out: list[PublicationSet] = []
    for indicator in indicators:
        for researcher in sorted(researchers, key=lambda r: r.researcher_id):
            out.append(build_set(researcher, indicator, pubs, reference_year))
    return out
